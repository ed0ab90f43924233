#pragma once

#include <cstdint>
#include <vector>

#include "molisac/observation.hpp"

namespace molisac {

/// Joint-receiver configuration: candidate distances (strictly increasing),
/// DFE memory length, iteration cap, pilot pattern, and the block combiner
/// (empty = uniform averaging).
struct ReceiverConfig {
  std::vector<double> candidates;
  int memory_length = 0;   // L
  int max_iterations = 1;  // T_max
  std::vector<std::uint8_t> pilot;
  std::vector<double> combiner;
};

std::vector<double> uniform_combiner(int samples);

/// Per-candidate detection material: block responses per symbol delay,
/// their compressed scalar coefficients, and the noiseless pilot templates
/// (release amplitude included).
struct BankEntry {
  double distance = 0.0;
  std::vector<std::vector<double>> block_cir;       // delay 0..max_delay
  std::vector<double> compressed_cir;               // padded to >= L+1
  std::vector<std::vector<double>> pilot_templates;  // K_p blocks
};

struct TemplateBank {
  std::vector<BankEntry> entries;  // aligned with ReceiverConfig::candidates
  double release_amplitude = 0.0;
};

BankEntry build_bank_entry(const CirTable& cir, const SamplingGrid& grid,
                           const ReceiverConfig& cfg,
                           double release_amplitude);

/// Builds entries for every candidate; `cirs` must be aligned with
/// cfg.candidates. Entries are immutable afterwards and safe to share.
TemplateBank build_bank(const std::vector<CirTable>& cirs,
                        const SamplingGrid& grid, const ReceiverConfig& cfg,
                        double release_amplitude);

/// Scalar decision statistic c'z for one block.
double compress(const std::vector<double>& block,
                const std::vector<double>& combiner);

/// Least-squares pilot matching over the candidate set; ties break toward
/// the smallest candidate. Index variant returns the candidate position.
std::size_t pilot_distance_init_index(const ObservationFrame& obs,
                                      const TemplateBank& bank,
                                      const ReceiverConfig& cfg);
double pilot_distance_init(const ObservationFrame& obs,
                           const TemplateBank& bank,
                           const ReceiverConfig& cfg);

/// Sequential DFE over the data symbols: feedback uses pilots, then prior
/// hard decisions (zero before the frame); ISI from the previous L symbols
/// is cancelled and the residual compared against the midpoint threshold
/// eta = amplitude*g~_0/2 (decision 1 on >=).
std::vector<std::uint8_t> dfe_detect(const ObservationFrame& obs,
                                     const BankEntry& entry,
                                     const ReceiverConfig& cfg,
                                     double release_amplitude);

/// Full-frame least-squares re-estimation given a reconstructed symbol
/// sequence (pilots + detected bits); same tie-breaking as initialization.
std::size_t refine_distance_index(const ObservationFrame& obs,
                                  const std::vector<std::uint8_t>& reconstructed,
                                  const TemplateBank& bank,
                                  const ReceiverConfig& cfg);
double refine_distance(const ObservationFrame& obs,
                       const std::vector<std::uint8_t>& reconstructed,
                       const TemplateBank& bank, const ReceiverConfig& cfg);

struct DetectionResult {
  std::vector<double> distance_trajectory;  // estimate per iteration, t = 0..
  std::vector<std::vector<std::uint8_t>> bits_per_iteration;  // detected at trajectory[t]
  int iterations_used = 0;
  bool converged = false;
};

/// Alternating refinement: pilot initialization, then DFE detection and
/// full-frame distance re-estimation until the estimate repeats or the
/// iteration cap is hit. Final bits are detected at the final estimate.
DetectionResult run_receiver(const ObservationFrame& obs,
                             const ReceiverConfig& cfg,
                             const TemplateBank& bank);

}  // namespace molisac
