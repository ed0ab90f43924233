#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "molisac/receiver.hpp"

namespace molisac {

enum class DetectorMode { isac, true_distance_dfe, unaware_dfe };

const char* to_string(DetectorMode mode);
DetectorMode detector_mode_from_string(const std::string& name);

/// One experiment point: physics, frame layout, receiver settings, and the
/// Monte Carlo controls. Loaded from a JSON document with sections
/// physical / sampling / frame / receiver / experiment (+ optional sweep).
struct ExperimentConfig {
  PhysicalParams physical;
  double symbol_interval = 0.0;    // T_b [s]
  double sampling_interval = 0.0;  // T_s [s]
  int pilot_length = 0;
  int data_length = 0;
  std::vector<std::uint8_t> pilot_bits;  // empty = all-ones
  double release_amplitude = 0.0;        // N_tx
  std::vector<double> candidates;        // meters
  int memory_length = 0;
  int max_iterations = 1;
  double true_distance = 0.0;
  double mismatched_distance = 0.0;  // d_un for the unaware baseline
  int trials = 1;
  std::uint64_t master_seed = 0;
  DetectorMode mode = DetectorMode::isac;
  bool noise_on = true;
  std::int64_t cir_horizon = 0;  // 0 = auto: (L+1)*N_s, raised until the tail is negligible
  int workers = 0;               // 0 = hardware concurrency
  std::vector<double> ntx_sweep;
  std::vector<int> pilot_sweep;
};

/// Normalizes distances onto the spatial grid and enforces the config
/// invariants (throws std::invalid_argument naming the offending field).
void validate_config(ExperimentConfig& cfg);

ExperimentConfig load_config(const std::string& path);
ExperimentConfig load_config_json(const std::string& text);

/// Immutable shared state for one experiment: grids, per-candidate CIR
/// tables, the template bank, the synthesis CIR at the true distance, and
/// the fixed bank entry used by the baseline detectors.
struct ExperimentContext {
  ExperimentConfig cfg;
  SamplingGrid grid;
  ReceiverConfig receiver;
  std::int64_t horizon = 0;
  std::vector<CirTable> cir_set;
  TemplateBank bank;
  CirTable true_cir;
  BankEntry fixed_entry;  // baseline modes only
};

ExperimentContext prepare_experiment(const ExperimentConfig& cfg);

struct TrialResult {
  std::uint64_t seed = 0;  // observation-noise substream seed
  DetectionResult detection;
  std::vector<int> bit_errors;                  // per iteration
  std::vector<std::uint8_t> distance_correct;   // per iteration
};

/// Frame drawn from the trial substream (master_seed, trial_index); also
/// yields the observation-noise seed consumed after the data bits.
SymbolFrame trial_frame(const ExperimentConfig& cfg, int trial_index,
                        std::uint64_t& obs_seed);

TrialResult run_trial(const ExperimentContext& ctx, int trial_index);
TrialResult run_trial(const ExperimentConfig& cfg, int trial_index);

struct WilsonInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson 95% score interval for a binomial proportion.
WilsonInterval wilson_interval(std::int64_t successes, std::int64_t n);

struct IterationMetrics {
  int iteration = 0;
  double p_acc = 0.0;
  double p_acc_lo = 0.0;
  double p_acc_hi = 0.0;
  double ber = 0.0;
  double ber_lo = 0.0;
  double ber_hi = 0.0;
  double delta_ber = 0.0;  // (BER(0) - BER(t))/BER(0), 0 when BER(0) = 0
};

struct MetricsSummary {
  std::vector<IterationMetrics> per_iteration;
  int trials = 0;
  int data_length = 0;
};

/// Order-independent aggregation; trials that converged early keep their
/// final estimate/decisions for later iteration indices.
MetricsSummary summarize(const std::vector<TrialResult>& results,
                         int data_length, int report_iterations);

MetricsSummary run_monte_carlo(const ExperimentConfig& cfg);

enum class SweepAxis { ntx, pilot, iteration };

const char* to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& name);

struct SweepPoint {
  double value = 0.0;
  MetricsSummary summary;
};

/// One Monte Carlo run per sweep value (iteration axis: a single run whose
/// per-iteration rows form the table). Throws when the axis has no values.
std::vector<SweepPoint> sweep(const ExperimentConfig& cfg, SweepAxis axis);

}  // namespace molisac
