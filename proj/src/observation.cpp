#include "molisac/observation.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace molisac {

namespace {

void validate_frame(const SymbolFrame& frame) {
  if (frame.length() < 1) {
    throw std::invalid_argument("symbol frame must contain at least one symbol");
  }
  if (!(frame.release_amplitude > 0.0)) {
    throw std::invalid_argument("release_amplitude must be positive");
  }
  for (auto b : frame.pilot) {
    if (b > 1) throw std::invalid_argument("pilot bits must be 0 or 1");
  }
  for (auto b : frame.data) {
    if (b > 1) throw std::invalid_argument("data bits must be 0 or 1");
  }
}

}  // namespace

std::vector<std::uint8_t> SymbolFrame::bits() const {
  std::vector<std::uint8_t> all(pilot);
  all.insert(all.end(), data.begin(), data.end());
  return all;
}

std::vector<Impulse> ook_input(const SymbolFrame& frame,
                               const SamplingGrid& grid) {
  validate_frame(frame);
  std::vector<Impulse> impulses;
  const auto all = frame.bits();
  for (std::size_t m = 1; m <= all.size(); ++m) {
    if (all[m - 1]) {
      impulses.push_back(
          {static_cast<std::int64_t>(m - 1) * grid.steps_per_symbol,
           frame.release_amplitude});
    }
  }
  return impulses;
}

std::int64_t max_block_delay(const CirTable& cir, const SamplingGrid& grid) {
  const std::int64_t block_span =
      static_cast<std::int64_t>(grid.samples_per_symbol) * grid.decimation - 1;
  if (cir.horizon < block_span) return -1;
  return (cir.horizon - block_span) / grid.steps_per_symbol;
}

std::vector<std::vector<double>> block_responses_upto(const CirTable& cir,
                                                      const SamplingGrid& grid,
                                                      std::int64_t max_delay) {
  std::vector<std::vector<double>> per_delay;
  per_delay.reserve(static_cast<std::size_t>(max_delay + 1));
  for (std::int64_t l = 0; l <= max_delay; ++l) {
    per_delay.push_back(block_response(cir, l, grid));
  }
  return per_delay;
}

namespace detail {

void accumulate_block_means(const std::vector<std::vector<double>>& per_delay,
                            const std::vector<std::uint8_t>& bits,
                            double amplitude, std::vector<double>& out) {
  if (per_delay.empty()) {
    throw std::invalid_argument(
        "accumulate_block_means: no block responses within the CIR horizon");
  }
  const std::size_t samples = per_delay.front().size();
  const std::size_t symbols = bits.size();
  out.assign(symbols * samples, 0.0);
  for (std::size_t m = 1; m <= symbols; ++m) {
    double* block = out.data() + (m - 1) * samples;
    const std::size_t delays = std::min(per_delay.size(), m);
    for (std::size_t l = 0; l < delays; ++l) {
      if (!bits[m - l - 1]) continue;
      const double* g = per_delay[l].data();
      for (std::size_t s = 0; s < samples; ++s) block[s] += amplitude * g[s];
    }
  }
}

}  // namespace detail

std::vector<std::vector<double>> accumulate_block_means(
    const std::vector<std::vector<double>>& per_delay,
    const std::vector<std::uint8_t>& bits, double amplitude) {
  std::vector<double> flat;
  detail::accumulate_block_means(per_delay, bits, amplitude, flat);
  const std::size_t samples = per_delay.front().size();
  std::vector<std::vector<double>> blocks(bits.size());
  for (std::size_t m = 0; m < bits.size(); ++m) {
    blocks[m].assign(flat.begin() + static_cast<std::ptrdiff_t>(m * samples),
                     flat.begin() + static_cast<std::ptrdiff_t>((m + 1) * samples));
  }
  return blocks;
}

std::vector<std::vector<double>> noiseless_block_means(
    const CirTable& cir, const SymbolFrame& frame, const SamplingGrid& grid) {
  validate_frame(frame);
  const auto per_delay =
      block_responses_upto(cir, grid, max_block_delay(cir, grid));
  return accumulate_block_means(per_delay, frame.bits(),
                                frame.release_amplitude);
}

double noise_variance(const CirTable& cir, const SymbolFrame& frame,
                      const SamplingGrid& grid, std::int64_t step) {
  validate_frame(frame);
  const auto all = frame.bits();
  double variance = 0.0;
  for (std::size_t m = 1; m <= all.size(); ++m) {
    const std::int64_t lag =
        step - static_cast<std::int64_t>(m - 1) * grid.steps_per_symbol - 1;
    if (lag < 0) break;  // later symbols have not been released by `step`
    if (!all[m - 1] || lag > cir.horizon) continue;
    const double g = cir.g[static_cast<std::size_t>(lag)];
    variance += frame.release_amplitude * g * (1.0 - g);
  }
  return variance;
}

ObservationFrame generate_observations(const CirTable& cir,
                                       const SymbolFrame& frame,
                                       const SamplingGrid& grid,
                                       std::uint64_t seed, bool noise_on) {
  ObservationFrame obs;
  obs.grid = grid;
  obs.true_distance = cir.distance;
  obs.seed = seed;
  obs.blocks = noiseless_block_means(cir, frame, grid);
  if (!noise_on) return obs;

  // Per-delay binomial variance factors g*(1-g) on the same retained grid.
  auto var_delay = block_responses_upto(cir, grid, max_block_delay(cir, grid));
  for (auto& block : var_delay) {
    for (double& g : block) g = g * (1.0 - g);
  }
  std::vector<double> variance;
  detail::accumulate_block_means(var_delay, frame.bits(),
                                 frame.release_amplitude, variance);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t samples = static_cast<std::size_t>(grid.samples_per_symbol);
  for (std::size_t m = 0; m < obs.blocks.size(); ++m) {
    for (std::size_t q = 0; q < samples; ++q) {
      obs.blocks[m][q] += std::sqrt(variance[m * samples + q]) * normal(rng);
    }
  }
  return obs;
}

}  // namespace molisac
