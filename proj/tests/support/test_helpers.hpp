#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "molisac/harness.hpp"

namespace testsupport {

using namespace molisac;

// Production-scale constants used throughout the experiments.
inline PhysicalParams table_params() {
  PhysicalParams p;
  p.diffusion_coeff = 5e-11;
  p.flow_velocity = 1e-5;
  p.binding_rate = 6e8;
  p.unbinding_rate = 3.0;
  p.receptor_conc = 1e-8;
  p.spatial_step = 1e-6;
  p.time_step = 8e-4;
  p.num_states = 301;
  return p;
}

inline SamplingGrid table_grid() { return make_grid(12.0, 2.4, 8e-4); }

// Short channel with stronger flow/binding and fast unbinding, so CIRs
// settle within a few hundred steps; keeps the Monte Carlo tests quick
// while preserving the heavy post-cursor ISI structure.
inline PhysicalParams small_params() {
  PhysicalParams p;
  p.diffusion_coeff = 5e-11;
  p.flow_velocity = 4e-5;
  p.binding_rate = 6e8;
  p.unbinding_rate = 30.0;
  p.receptor_conc = 5e-8;
  p.spatial_step = 1e-6;
  p.time_step = 8e-4;
  p.num_states = 25;
  return p;
}

inline SamplingGrid small_grid() { return make_grid(0.4, 0.1, 8e-4); }  // 500/125/4

inline std::vector<double> small_candidates() {
  return {8e-6, 10e-6, 12e-6, 14e-6};
}

inline ExperimentConfig small_experiment() {
  ExperimentConfig cfg;
  cfg.physical = small_params();
  cfg.symbol_interval = 0.4;
  cfg.sampling_interval = 0.1;
  cfg.pilot_length = 2;
  cfg.data_length = 60;
  cfg.release_amplitude = 120.0;
  cfg.candidates = small_candidates();
  cfg.memory_length = 2;
  cfg.max_iterations = 4;
  cfg.true_distance = 12e-6;
  cfg.mismatched_distance = 8e-6;
  cfg.trials = 100;
  cfg.master_seed = 7;
  cfg.mode = DetectorMode::isac;
  return cfg;
}

// Four-state chain with the receiver next to the inlet: the smallest
// geometry with distinct inlet/outlet/bound behavior.
inline PhysicalParams tiny_params() {
  PhysicalParams p = table_params();
  p.num_states = 4;
  return p;
}

inline bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol;
}

// Exhaustive path enumeration: probability mass on the bound state after
// exactly `steps` transitions from the inlet, summed over every transient
// path. Reads matrix entries only; independent of the propagation kernel.
inline double bound_mass_by_paths(const ChannelMatrix& cm, int state,
                                  int steps) {
  if (steps == 0) return state == cm.dims ? 1.0 : 0.0;
  double total = 0.0;
  for (int next = 1; next <= cm.dims; ++next) {
    const double p = cm.Q.coeff(next, state);
    if (p > 0.0) total += p * bound_mass_by_paths(cm, next, steps - 1);
  }
  return total;
}

inline double bound_mass_by_paths(const ChannelMatrix& cm, int steps) {
  return bound_mass_by_paths(cm, 1, steps);
}

// Straight-line re-implementation of the pilot least-squares matcher,
// assembling each template directly from raw CIR lags instead of the
// block-response/bank machinery.
inline double ls_pilot_reference(const ObservationFrame& obs,
                                 const std::vector<CirTable>& cirs,
                                 const std::vector<std::uint8_t>& pilot,
                                 double amplitude) {
  const SamplingGrid& grid = obs.grid;
  double best_rss = std::numeric_limits<double>::infinity();
  double best_distance = 0.0;
  for (const auto& cir : cirs) {
    double rss = 0.0;
    for (std::size_t m = 1; m <= pilot.size(); ++m) {
      for (int q = 1; q <= grid.samples_per_symbol; ++q) {
        const std::int64_t k = retained_step(grid, static_cast<std::int64_t>(m), q);
        double mu = 0.0;
        for (std::size_t mp = 1; mp <= m; ++mp) {
          if (!pilot[mp - 1]) continue;
          const std::int64_t lag =
              k - static_cast<std::int64_t>(mp - 1) * grid.steps_per_symbol - 1;
          if (lag < 0 || lag > cir.horizon) continue;
          mu += amplitude * cir.g[static_cast<std::size_t>(lag)];
        }
        const double diff = obs.blocks[m - 1][static_cast<std::size_t>(q - 1)] - mu;
        rss += diff * diff;
      }
    }
    if (rss < best_rss) {
      best_rss = rss;
      best_distance = cir.distance;
    }
  }
  return best_distance;
}

inline std::vector<std::uint8_t> random_bits(std::size_t count,
                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> bits(count);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);
  return bits;
}

}  // namespace testsupport
