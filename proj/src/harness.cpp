#include "molisac/harness.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "molisac/parallel.hpp"

namespace molisac {

namespace {

std::mt19937_64 trial_stream(std::uint64_t master_seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

int hamming_errors(const std::vector<std::uint8_t>& detected,
                   const std::vector<std::uint8_t>& sent) {
  int errors = 0;
  for (std::size_t i = 0; i < sent.size(); ++i) {
    errors += (detected[i] != sent[i]) ? 1 : 0;
  }
  return errors;
}

bool tail_negligible(const CirTable& cir) {
  const double peak = *std::max_element(cir.g.begin(), cir.g.end());
  return cir.truncation_tail < 1e-6 * peak;
}

DetectionResult fixed_distance_detection(const ObservationFrame& obs,
                                         const ExperimentContext& ctx) {
  DetectionResult det;
  det.distance_trajectory.push_back(ctx.fixed_entry.distance);
  det.bits_per_iteration.push_back(dfe_detect(
      obs, ctx.fixed_entry, ctx.receiver, ctx.cfg.release_amplitude));
  det.iterations_used = 0;
  det.converged = true;
  return det;
}

}  // namespace

const char* to_string(DetectorMode mode) {
  switch (mode) {
    case DetectorMode::isac: return "isac";
    case DetectorMode::true_distance_dfe: return "true_distance_dfe";
    case DetectorMode::unaware_dfe: return "unaware_dfe";
  }
  return "isac";
}

DetectorMode detector_mode_from_string(const std::string& name) {
  if (name == "isac") return DetectorMode::isac;
  if (name == "true_distance_dfe") return DetectorMode::true_distance_dfe;
  if (name == "unaware_dfe") return DetectorMode::unaware_dfe;
  throw std::invalid_argument("unknown detector_mode '" + name + "'");
}

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::ntx: return "ntx";
    case SweepAxis::pilot: return "pilot";
    case SweepAxis::iteration: return "iteration";
  }
  return "ntx";
}

SweepAxis sweep_axis_from_string(const std::string& name) {
  if (name == "ntx") return SweepAxis::ntx;
  if (name == "pilot") return SweepAxis::pilot;
  if (name == "iteration") return SweepAxis::iteration;
  throw std::invalid_argument("unknown sweep axis '" + name + "'");
}

void validate_config(ExperimentConfig& cfg) {
  const auto positive = [](double v, const char* field) {
    if (!(v > 0.0)) {
      throw std::invalid_argument(std::string("config: ") + field +
                                  " must be positive");
    }
  };
  positive(cfg.physical.diffusion_coeff, "physical.diffusion_coeff");
  positive(cfg.physical.flow_velocity, "physical.flow_velocity");
  positive(cfg.physical.binding_rate, "physical.binding_rate");
  positive(cfg.physical.unbinding_rate, "physical.unbinding_rate");
  positive(cfg.physical.receptor_conc, "physical.receptor_conc");
  positive(cfg.physical.spatial_step, "physical.spatial_step");
  positive(cfg.physical.time_step, "physical.time_step");
  if (cfg.physical.num_states < 3) {
    throw std::invalid_argument("config: physical.num_states must be >= 3");
  }
  elementary_probs(cfg.physical);
  make_grid(cfg.symbol_interval, cfg.sampling_interval, cfg.physical.time_step);

  if (cfg.pilot_length < 0) {
    throw std::invalid_argument("config: frame.pilot_length must be >= 0");
  }
  if (cfg.data_length < 0) {
    throw std::invalid_argument("config: frame.data_length must be >= 0");
  }
  if (cfg.pilot_length + cfg.data_length < 1) {
    throw std::invalid_argument("config: frame must contain at least one symbol");
  }
  if (cfg.pilot_bits.empty()) {
    cfg.pilot_bits.assign(static_cast<std::size_t>(cfg.pilot_length), 1);
  }
  if (static_cast<int>(cfg.pilot_bits.size()) != cfg.pilot_length) {
    throw std::invalid_argument(
        "config: frame.pilot_bits length must equal frame.pilot_length");
  }
  for (auto b : cfg.pilot_bits) {
    if (b > 1) {
      throw std::invalid_argument("config: frame.pilot_bits entries must be 0/1");
    }
  }
  positive(cfg.release_amplitude, "frame.release_molecules");

  if (cfg.candidates.empty()) {
    throw std::invalid_argument("config: receiver.candidate_distances is empty");
  }
  const double dx = cfg.physical.spatial_step;
  const int max_free = cfg.physical.num_states - 1;
  const auto normalize = [&](double d, const char* field) {
    const int r = receiver_index(d, dx);
    if (r > max_free) {
      throw std::invalid_argument(std::string("config: ") + field +
                                  " lies beyond the outlet state");
    }
    return distance_of(r, dx);
  };
  for (auto& d : cfg.candidates) {
    d = normalize(d, "receiver.candidate_distances");
  }
  for (std::size_t i = 1; i < cfg.candidates.size(); ++i) {
    if (!(cfg.candidates[i] > cfg.candidates[i - 1])) {
      throw std::invalid_argument(
          "config: receiver.candidate_distances must be strictly increasing");
    }
  }
  if (cfg.memory_length < 0) {
    throw std::invalid_argument("config: receiver.memory_length must be >= 0");
  }
  if (cfg.max_iterations < 1) {
    throw std::invalid_argument("config: receiver.max_iterations must be >= 1");
  }

  cfg.true_distance = normalize(cfg.true_distance, "experiment.true_distance");
  cfg.mismatched_distance =
      normalize(cfg.mismatched_distance, "experiment.mismatched_distance");
  if (cfg.mode == DetectorMode::isac) {
    const bool member =
        std::find(cfg.candidates.begin(), cfg.candidates.end(),
                  cfg.true_distance) != cfg.candidates.end();
    if (!member) {
      throw std::invalid_argument(
          "config: experiment.true_distance must be in the candidate set for isac mode");
    }
  }
  if (cfg.trials < 1) {
    throw std::invalid_argument("config: experiment.trials must be >= 1");
  }
  if (cfg.workers < 0) {
    throw std::invalid_argument("config: experiment.workers must be >= 0");
  }
  if (cfg.cir_horizon < 0) {
    throw std::invalid_argument("config: experiment.cir_horizon must be >= 0");
  }
  for (double v : cfg.ntx_sweep) positive(v, "sweep.ntx values");
  for (int v : cfg.pilot_sweep) {
    if (v < 0) {
      throw std::invalid_argument("config: sweep.pilot values must be >= 0");
    }
  }
}

ExperimentContext prepare_experiment(const ExperimentConfig& raw) {
  ExperimentContext ctx;
  ctx.cfg = raw;
  validate_config(ctx.cfg);
  const ExperimentConfig& cfg = ctx.cfg;

  ctx.grid = make_grid(cfg.symbol_interval, cfg.sampling_interval,
                       cfg.physical.time_step);
  ctx.receiver.candidates = cfg.candidates;
  ctx.receiver.memory_length = cfg.memory_length;
  ctx.receiver.max_iterations = cfg.max_iterations;
  ctx.receiver.pilot = cfg.pilot_bits;
  ctx.receiver.combiner = uniform_combiner(ctx.grid.samples_per_symbol);

  // Every distance the experiment touches gets a table at a common horizon.
  std::vector<double> distances = cfg.candidates;
  const auto ensure = [&](double d) {
    if (std::find(distances.begin(), distances.end(), d) == distances.end()) {
      distances.push_back(d);
    }
  };
  ensure(cfg.true_distance);
  if (cfg.mode == DetectorMode::unaware_dfe) ensure(cfg.mismatched_distance);

  const bool fixed_horizon = cfg.cir_horizon > 0;
  if (fixed_horizon && cfg.cir_horizon < ctx.grid.steps_per_symbol - 1) {
    throw std::invalid_argument(
        "prepare_experiment: cir_horizon shorter than one symbol block");
  }
  ctx.horizon = fixed_horizon ? cfg.cir_horizon
                              : (static_cast<std::int64_t>(cfg.memory_length) + 1) *
                                    ctx.grid.steps_per_symbol;
  std::vector<CirTable> tables(distances.size());
  for (int attempt = 0;; ++attempt) {
    parallel_for(static_cast<int>(distances.size()), cfg.workers, [&](int i) {
      const ChannelMatrix cm = build_transition(
          cfg.physical, distances[static_cast<std::size_t>(i)]);
      tables[static_cast<std::size_t>(i)] = impulse_response(cm, ctx.horizon);
    });
    if (fixed_horizon ||
        std::all_of(tables.begin(), tables.end(), tail_negligible)) {
      break;
    }
    if (attempt >= 64) {
      throw std::runtime_error(
          "prepare_experiment: CIR tail does not decay within 64 extra symbols");
    }
    ctx.horizon += ctx.grid.steps_per_symbol;
  }

  ctx.cir_set.assign(tables.begin(),
                     tables.begin() + static_cast<std::ptrdiff_t>(cfg.candidates.size()));
  const auto find_table = [&](double d) -> const CirTable* {
    for (const auto& t : tables) {
      if (t.distance == d) return &t;
    }
    return nullptr;
  };
  ctx.true_cir = *find_table(cfg.true_distance);

  switch (cfg.mode) {
    case DetectorMode::isac:
      ctx.bank = build_bank(ctx.cir_set, ctx.grid, ctx.receiver,
                            cfg.release_amplitude);
      break;
    case DetectorMode::true_distance_dfe:
      ctx.fixed_entry = build_bank_entry(ctx.true_cir, ctx.grid, ctx.receiver,
                                         cfg.release_amplitude);
      break;
    case DetectorMode::unaware_dfe:
      ctx.fixed_entry = build_bank_entry(*find_table(cfg.mismatched_distance),
                                         ctx.grid, ctx.receiver,
                                         cfg.release_amplitude);
      break;
  }
  return ctx;
}

SymbolFrame trial_frame(const ExperimentConfig& cfg, int trial_index,
                        std::uint64_t& obs_seed) {
  auto rng = trial_stream(cfg.master_seed, static_cast<std::uint64_t>(trial_index));
  SymbolFrame frame;
  frame.pilot = cfg.pilot_bits;
  frame.release_amplitude = cfg.release_amplitude;
  frame.data.resize(static_cast<std::size_t>(cfg.data_length));
  for (auto& bit : frame.data) {
    bit = static_cast<std::uint8_t>(rng() >> 63);  // fair coin per data symbol
  }
  obs_seed = rng();
  return frame;
}

TrialResult run_trial(const ExperimentContext& ctx, int trial_index) {
  const ExperimentConfig& cfg = ctx.cfg;
  std::uint64_t obs_seed = 0;
  const SymbolFrame frame = trial_frame(cfg, trial_index, obs_seed);

  const ObservationFrame obs = generate_observations(
      ctx.true_cir, frame, ctx.grid, obs_seed, cfg.noise_on);

  TrialResult result;
  result.seed = obs_seed;
  result.detection = (cfg.mode == DetectorMode::isac)
                         ? run_receiver(obs, ctx.receiver, ctx.bank)
                         : fixed_distance_detection(obs, ctx);

  const auto& det = result.detection;
  result.bit_errors.reserve(det.bits_per_iteration.size());
  result.distance_correct.reserve(det.distance_trajectory.size());
  for (std::size_t t = 0; t < det.distance_trajectory.size(); ++t) {
    result.distance_correct.push_back(
        det.distance_trajectory[t] == cfg.true_distance ? 1 : 0);
    result.bit_errors.push_back(
        hamming_errors(det.bits_per_iteration[t], frame.data));
  }
  return result;
}

TrialResult run_trial(const ExperimentConfig& cfg, int trial_index) {
  return run_trial(prepare_experiment(cfg), trial_index);
}

WilsonInterval wilson_interval(std::int64_t successes, std::int64_t n) {
  if (n <= 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;  // 95% two-sided
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  WilsonInterval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (successes == 0) ci.lo = 0.0;
  if (successes == n) ci.hi = 1.0;
  return ci;
}

MetricsSummary summarize(const std::vector<TrialResult>& results,
                         int data_length, int report_iterations) {
  MetricsSummary summary;
  summary.trials = static_cast<int>(results.size());
  summary.data_length = data_length;
  const std::int64_t n_trials = static_cast<std::int64_t>(results.size());
  const std::int64_t n_bits = n_trials * static_cast<std::int64_t>(data_length);

  double ber0 = 0.0;
  for (int t = 0; t <= report_iterations; ++t) {
    std::int64_t correct = 0;
    std::int64_t errors = 0;
    for (const auto& trial : results) {
      // Converged trials keep their final estimate and decisions.
      const std::size_t last = trial.distance_correct.size() - 1;
      const std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(t), last);
      correct += trial.distance_correct[idx];
      errors += trial.bit_errors[idx];
    }
    IterationMetrics m;
    m.iteration = t;
    m.p_acc = n_trials > 0 ? static_cast<double>(correct) / static_cast<double>(n_trials) : 0.0;
    const WilsonInterval pa = wilson_interval(correct, n_trials);
    m.p_acc_lo = pa.lo;
    m.p_acc_hi = pa.hi;
    m.ber = n_bits > 0 ? static_cast<double>(errors) / static_cast<double>(n_bits) : 0.0;
    const WilsonInterval be = wilson_interval(errors, n_bits);
    m.ber_lo = be.lo;
    m.ber_hi = be.hi;
    if (t == 0) {
      ber0 = m.ber;
      m.delta_ber = 0.0;
    } else {
      m.delta_ber = ber0 > 0.0 ? (ber0 - m.ber) / ber0 : 0.0;
    }
    summary.per_iteration.push_back(m);
  }
  return summary;
}

MetricsSummary run_monte_carlo(const ExperimentConfig& cfg) {
  const ExperimentContext ctx = prepare_experiment(cfg);
  std::vector<TrialResult> results(static_cast<std::size_t>(ctx.cfg.trials));
  parallel_for(ctx.cfg.trials, ctx.cfg.workers, [&](int i) {
    results[static_cast<std::size_t>(i)] = run_trial(ctx, i);
  });
  const int report = (ctx.cfg.mode == DetectorMode::isac)
                         ? ctx.cfg.max_iterations
                         : 0;
  return summarize(results, ctx.cfg.data_length, report);
}

std::vector<SweepPoint> sweep(const ExperimentConfig& cfg, SweepAxis axis) {
  std::vector<SweepPoint> points;
  switch (axis) {
    case SweepAxis::ntx: {
      if (cfg.ntx_sweep.empty()) {
        throw std::invalid_argument("sweep: axis 'ntx' has no values configured");
      }
      for (double value : cfg.ntx_sweep) {
        ExperimentConfig point_cfg = cfg;
        point_cfg.release_amplitude = value;
        points.push_back({value, run_monte_carlo(point_cfg)});
      }
      break;
    }
    case SweepAxis::pilot: {
      if (cfg.pilot_sweep.empty()) {
        throw std::invalid_argument("sweep: axis 'pilot' has no values configured");
      }
      for (int value : cfg.pilot_sweep) {
        ExperimentConfig point_cfg = cfg;
        point_cfg.pilot_length = value;
        point_cfg.pilot_bits.assign(static_cast<std::size_t>(value), 1);
        points.push_back({static_cast<double>(value), run_monte_carlo(point_cfg)});
      }
      break;
    }
    case SweepAxis::iteration:
      points.push_back({0.0, run_monte_carlo(cfg)});
      break;
  }
  return points;
}

}  // namespace molisac
