#include "molisac/receiver.hpp"

#include <limits>
#include <stdexcept>

namespace molisac {

namespace {

const std::vector<double>& effective_combiner(const ReceiverConfig& cfg,
                                              int samples,
                                              std::vector<double>& storage) {
  if (!cfg.combiner.empty()) return cfg.combiner;
  storage = uniform_combiner(samples);
  return storage;
}

double pilot_residual(const ObservationFrame& obs, const BankEntry& entry,
                      std::size_t pilot_blocks) {
  double residual = 0.0;
  for (std::size_t m = 0; m < pilot_blocks; ++m) {
    const auto& z = obs.blocks[m];
    const auto& mu = entry.pilot_templates[m];
    for (std::size_t q = 0; q < z.size(); ++q) {
      const double d = z[q] - mu[q];
      residual += d * d;
    }
  }
  return residual;
}

}  // namespace

std::vector<double> uniform_combiner(int samples) {
  if (samples < 1) {
    throw std::invalid_argument("uniform_combiner: need at least one sample");
  }
  return std::vector<double>(static_cast<std::size_t>(samples),
                             1.0 / static_cast<double>(samples));
}

BankEntry build_bank_entry(const CirTable& cir, const SamplingGrid& grid,
                           const ReceiverConfig& cfg,
                           double release_amplitude) {
  BankEntry entry;
  entry.distance = cir.distance;
  const std::int64_t delays = max_block_delay(cir, grid);
  if (delays < 0) {
    throw std::invalid_argument(
        "build_bank_entry: CIR horizon shorter than one symbol block");
  }
  entry.block_cir = block_responses_upto(cir, grid, delays);

  std::vector<double> storage;
  const auto& combiner =
      effective_combiner(cfg, grid.samples_per_symbol, storage);
  if (static_cast<int>(combiner.size()) != grid.samples_per_symbol) {
    throw std::invalid_argument("build_bank_entry: combiner length != X");
  }
  entry.compressed_cir.reserve(entry.block_cir.size());
  for (const auto& block : entry.block_cir) {
    entry.compressed_cir.push_back(compress(block, combiner));
  }
  // Delays beyond the horizon are treated as zero response.
  while (entry.compressed_cir.size() <
         static_cast<std::size_t>(cfg.memory_length) + 1) {
    entry.compressed_cir.push_back(0.0);
  }
  entry.pilot_templates =
      accumulate_block_means(entry.block_cir, cfg.pilot, release_amplitude);
  return entry;
}

TemplateBank build_bank(const std::vector<CirTable>& cirs,
                        const SamplingGrid& grid, const ReceiverConfig& cfg,
                        double release_amplitude) {
  if (cirs.size() != cfg.candidates.size()) {
    throw std::invalid_argument("build_bank: one CIR table per candidate required");
  }
  TemplateBank bank;
  bank.release_amplitude = release_amplitude;
  bank.entries.reserve(cirs.size());
  for (const auto& cir : cirs) {
    bank.entries.push_back(build_bank_entry(cir, grid, cfg, release_amplitude));
  }
  return bank;
}

double compress(const std::vector<double>& block,
                const std::vector<double>& combiner) {
  if (block.size() != combiner.size()) {
    throw std::invalid_argument("compress: combiner/block length mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < block.size(); ++i) acc += combiner[i] * block[i];
  return acc;
}

std::size_t pilot_distance_init_index(const ObservationFrame& obs,
                                      const TemplateBank& bank,
                                      const ReceiverConfig& cfg) {
  if (bank.entries.empty()) {
    throw std::invalid_argument("pilot_distance_init: empty candidate set");
  }
  const std::size_t pilot_blocks = cfg.pilot.size();
  if (obs.blocks.size() < pilot_blocks) {
    throw std::invalid_argument(
        "pilot_distance_init: fewer observation blocks than pilot symbols");
  }
  std::size_t best = 0;
  double best_residual = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < bank.entries.size(); ++idx) {
    const double residual = pilot_residual(obs, bank.entries[idx], pilot_blocks);
    if (residual < best_residual) {  // strict: ties keep the smallest candidate
      best_residual = residual;
      best = idx;
    }
  }
  return best;
}

double pilot_distance_init(const ObservationFrame& obs,
                           const TemplateBank& bank,
                           const ReceiverConfig& cfg) {
  return bank.entries[pilot_distance_init_index(obs, bank, cfg)].distance;
}

std::vector<std::uint8_t> dfe_detect(const ObservationFrame& obs,
                                     const BankEntry& entry,
                                     const ReceiverConfig& cfg,
                                     double release_amplitude) {
  const std::size_t total = obs.blocks.size();
  const std::size_t pilots = cfg.pilot.size();
  if (pilots > total) {
    throw std::invalid_argument("dfe_detect: more pilots than observation blocks");
  }
  std::vector<double> storage;
  const auto& combiner =
      effective_combiner(cfg, obs.grid.samples_per_symbol, storage);
  const auto& coeff = entry.compressed_cir;
  const double threshold = 0.5 * release_amplitude * coeff[0];

  std::vector<std::uint8_t> feedback(total + 1, 0);  // 1-based; index 0 unused
  for (std::size_t j = 1; j <= pilots; ++j) feedback[j] = cfg.pilot[j - 1];

  std::vector<std::uint8_t> detected;
  detected.reserve(total - pilots);
  for (std::size_t m = pilots + 1; m <= total; ++m) {
    const double z = compress(obs.blocks[m - 1], combiner);
    double isi = 0.0;
    const std::size_t reach =
        std::min<std::size_t>(cfg.memory_length, std::min(m - 1, coeff.size() - 1));
    for (std::size_t l = 1; l <= reach; ++l) {
      if (feedback[m - l]) isi += release_amplitude * coeff[l];
    }
    const std::uint8_t bit = (z - isi >= threshold) ? 1 : 0;
    feedback[m] = bit;
    detected.push_back(bit);
  }
  return detected;
}

std::size_t refine_distance_index(const ObservationFrame& obs,
                                  const std::vector<std::uint8_t>& reconstructed,
                                  const TemplateBank& bank,
                                  const ReceiverConfig& /*cfg*/) {
  if (bank.entries.empty()) {
    throw std::invalid_argument("refine_distance: empty candidate set");
  }
  if (reconstructed.size() != obs.blocks.size()) {
    throw std::invalid_argument(
        "refine_distance: reconstructed sequence must cover the full frame");
  }
  const std::size_t samples =
      static_cast<std::size_t>(obs.grid.samples_per_symbol);
  std::size_t best = 0;
  double best_residual = std::numeric_limits<double>::infinity();
  std::vector<double> means;
  for (std::size_t idx = 0; idx < bank.entries.size(); ++idx) {
    detail::accumulate_block_means(bank.entries[idx].block_cir, reconstructed,
                                   bank.release_amplitude, means);
    double residual = 0.0;
    for (std::size_t m = 0; m < obs.blocks.size(); ++m) {
      const auto& z = obs.blocks[m];
      const double* mu = means.data() + m * samples;
      for (std::size_t q = 0; q < samples; ++q) {
        const double d = z[q] - mu[q];
        residual += d * d;
      }
    }
    if (residual < best_residual) {
      best_residual = residual;
      best = idx;
    }
  }
  return best;
}

double refine_distance(const ObservationFrame& obs,
                       const std::vector<std::uint8_t>& reconstructed,
                       const TemplateBank& bank, const ReceiverConfig& cfg) {
  return bank.entries[refine_distance_index(obs, reconstructed, bank, cfg)]
      .distance;
}

DetectionResult run_receiver(const ObservationFrame& obs,
                             const ReceiverConfig& cfg,
                             const TemplateBank& bank) {
  if (bank.entries.size() != cfg.candidates.size() || bank.entries.empty()) {
    throw std::invalid_argument("run_receiver: bank does not cover the candidate set");
  }
  if (cfg.max_iterations < 1) {
    throw std::invalid_argument("run_receiver: max_iterations must be >= 1");
  }
  DetectionResult result;
  std::size_t current = pilot_distance_init_index(obs, bank, cfg);
  result.distance_trajectory.push_back(bank.entries[current].distance);

  bool converged = false;
  for (int t = 0; t < cfg.max_iterations && !converged; ++t) {
    auto bits = dfe_detect(obs, bank.entries[current], cfg,
                           bank.release_amplitude);
    std::vector<std::uint8_t> reconstructed(cfg.pilot);
    reconstructed.insert(reconstructed.end(), bits.begin(), bits.end());
    const std::size_t next =
        refine_distance_index(obs, reconstructed, bank, cfg);
    result.bits_per_iteration.push_back(std::move(bits));
    result.distance_trajectory.push_back(bank.entries[next].distance);
    if (next == current) {
      converged = true;
      // Re-detection at the unchanged estimate reproduces the same decisions.
      result.bits_per_iteration.push_back(result.bits_per_iteration.back());
    }
    current = next;
  }
  if (!converged) {
    result.bits_per_iteration.push_back(
        dfe_detect(obs, bank.entries[current], cfg, bank.release_amplitude));
  }
  result.iterations_used =
      static_cast<int>(result.distance_trajectory.size()) - 1;
  result.converged = converged;
  return result;
}

}  // namespace molisac
