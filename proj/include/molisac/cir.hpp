#pragma once

#include <cstdint>
#include <vector>

#include "molisac/channel.hpp"
#include "molisac/sampling.hpp"

namespace molisac {

/// Expected molecule counts per transient state at one Markov step.
struct StateVector {
  std::vector<double> x;
  std::int64_t step_index = 0;
};

/// One state-space step x' = Q x + b u, with b the inlet selector.
/// Cost is linear in the stored entries of Q.
StateVector propagate(const ChannelMatrix& cm, const StateVector& sv,
                      double input);

/// Markov-step impulse response for one candidate distance: g[i] is the
/// expected bound-state occupancy i steps after a unit release into the
/// inlet. Zero until the shortest transport-plus-binding path completes.
struct CirTable {
  double distance = 0.0;
  std::vector<double> g;         // g[0..horizon]
  std::int64_t horizon = 0;
  double truncation_tail = 0.0;  // g[horizon]
};

/// Computes the impulse response by iterated sparse propagation (never by
/// explicit matrix powers).
CirTable impulse_response(const ChannelMatrix& cm, std::int64_t horizon);

/// Block response at symbol delay `delay`: the CIR at the retained-sample
/// lags delay*N_s + q*M - 1 for q = 1..X. Throws when the horizon does not
/// cover the requested delay.
std::vector<double> block_response(const CirTable& cir, std::int64_t delay,
                                   const SamplingGrid& grid);

/// Stochastic oracle: each molecule walks the chain independently from the
/// inlet. Returns the bound-state occupancy count after 0..steps
/// transitions; deterministic for a fixed seed.
std::vector<std::int64_t> simulate_particles(const ChannelMatrix& cm,
                                             std::int64_t n_molecules,
                                             int steps, std::uint64_t seed);

/// Max |sum(x_k) + absorbed_k - 1| over a unit-impulse trajectory.
double mass_conservation_error(const ChannelMatrix& cm, std::int64_t steps);

}  // namespace molisac
