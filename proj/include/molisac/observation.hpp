#pragma once

#include <cstdint>
#include <vector>

#include "molisac/cir.hpp"
#include "molisac/sampling.hpp"

namespace molisac {

/// OOK frame: known pilot prefix followed by data bits; a 1-bit releases
/// release_amplitude molecules at the start of its symbol interval.
struct SymbolFrame {
  std::vector<std::uint8_t> pilot;
  std::vector<std::uint8_t> data;
  double release_amplitude = 0.0;  // N_tx

  std::size_t length() const { return pilot.size() + data.size(); }
  std::vector<std::uint8_t> bits() const;
};

struct Impulse {
  std::int64_t step = 0;
  double amplitude = 0.0;
};

/// Impulsive molecular input induced by the frame: one impulse of
/// release_amplitude at step (m-1)*N_s per 1-bit.
std::vector<Impulse> ook_input(const SymbolFrame& frame,
                               const SamplingGrid& grid);

/// Largest symbol delay whose block response fits the CIR horizon
/// (-1 when not even delay 0 fits). Delays beyond it are treated as zero.
std::int64_t max_block_delay(const CirTable& cir, const SamplingGrid& grid);

/// Block responses for delays 0..max_delay.
std::vector<std::vector<double>> block_responses_upto(const CirTable& cir,
                                                      const SamplingGrid& grid,
                                                      std::int64_t max_delay);

namespace detail {
/// Superposes per-delay block responses over the frame bits into a flat
/// K*X buffer: out[(m-1)*X + q-1] = sum_l amplitude*bit[m-l]*per_delay[l][q-1].
void accumulate_block_means(const std::vector<std::vector<double>>& per_delay,
                            const std::vector<std::uint8_t>& bits,
                            double amplitude, std::vector<double>& out);
}  // namespace detail

/// Nested-block variant of the superposition above.
std::vector<std::vector<double>> accumulate_block_means(
    const std::vector<std::vector<double>>& per_delay,
    const std::vector<std::uint8_t>& bits, double amplitude);

/// Noiseless per-symbol block means under the table's distance; CIR values
/// beyond the horizon contribute zero.
std::vector<std::vector<double>> noiseless_block_means(
    const CirTable& cir, const SymbolFrame& frame, const SamplingGrid& grid);

/// Signal-dependent variance at one Markov step:
/// sum_m N_tx*a_m*g(lag)*(1 - g(lag)) over the symbols released so far.
double noise_variance(const CirTable& cir, const SymbolFrame& frame,
                      const SamplingGrid& grid, std::int64_t step);

/// The K observation blocks of one frame.
struct ObservationFrame {
  std::vector<std::vector<double>> blocks;  // K x X
  SamplingGrid grid;
  double true_distance = 0.0;
  std::uint64_t seed = 0;
};

/// Synthesizes observations at the table's distance: independent Gaussian
/// noise per retained sample with the signal-dependent variance, or the
/// exact means when noise is off. Deterministic for a fixed seed; samples
/// with zero variance stay exactly at the mean, and negative observations
/// are kept as-is.
ObservationFrame generate_observations(const CirTable& cir,
                                       const SymbolFrame& frame,
                                       const SamplingGrid& grid,
                                       std::uint64_t seed, bool noise_on);

}  // namespace molisac
