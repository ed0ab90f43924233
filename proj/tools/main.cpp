#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "molisac/io.hpp"

namespace {

using namespace molisac;

struct SeedOverride {
  bool set = false;
  std::uint64_t value = 0;

  void apply(ExperimentConfig& cfg) const {
    if (set) cfg.master_seed = value;
  }
};

void add_seed_option(CLI::App* cmd, SeedOverride& seed) {
  cmd->add_option_function<std::uint64_t>(
      "--seed",
      [&seed](std::uint64_t v) {
        seed.set = true;
        seed.value = v;
      },
      "Override experiment.master_seed");
}

int run_cir(const std::string& config_path, const std::string& out_path) {
  ExperimentConfig cfg = load_config(config_path);
  const ExperimentContext ctx = prepare_experiment(cfg);
  write_cir_csv(out_path, ctx.cir_set);
  std::printf("wrote %zu CIR tables (horizon %" PRId64 ") to %s\n",
              ctx.cir_set.size(), ctx.horizon, out_path.c_str());
  return 0;
}

int run_simulate(const std::string& config_path, const std::string& out_path,
                 const SeedOverride& seed, const std::string& dump_path) {
  ExperimentConfig cfg = load_config(config_path);
  seed.apply(cfg);
  const MetricsSummary summary = run_monte_carlo(cfg);
  write_metrics_json(out_path, cfg, summary);
  for (const auto& m : summary.per_iteration) {
    std::printf("t=%d  P_acc=%.4f [%.4f, %.4f]  BER=%.6g [%.6g, %.6g]  dBER=%.4f\n",
                m.iteration, m.p_acc, m.p_acc_lo, m.p_acc_hi, m.ber, m.ber_lo,
                m.ber_hi, m.delta_ber);
  }
  std::printf("wrote %s\n", out_path.c_str());
  if (!dump_path.empty()) {
    write_observation_csv(dump_path, prepare_experiment(cfg));
    std::printf("wrote %s\n", dump_path.c_str());
  }
  return 0;
}

int run_sweep(const std::string& config_path, const std::string& axis_name,
              const std::string& out_path, const SeedOverride& seed) {
  ExperimentConfig cfg = load_config(config_path);
  seed.apply(cfg);
  const SweepAxis axis = sweep_axis_from_string(axis_name);
  const auto points = sweep(cfg, axis);
  write_sweep_csv(out_path, axis, points);
  std::printf("wrote %zu sweep point(s) to %s\n", points.size(),
              out_path.c_str());
  return 0;
}

int run_validate(const std::string& config_path) {
  ExperimentConfig cfg = load_config(config_path);
  const ElementaryProbs probs = elementary_probs(cfg.physical);
  const SamplingGrid grid = make_grid(cfg.symbol_interval,
                                      cfg.sampling_interval,
                                      cfg.physical.time_step);
  std::printf("p_diff=%.6g p_flow=%.6g p_bind=%.6g p_unbind=%.6g\n",
              probs.diffuse, probs.advect, probs.bind, probs.unbind);
  std::printf("grid: N_s=%" PRId64 " M=%" PRId64 " X=%d\n",
              grid.steps_per_symbol, grid.decimation, grid.samples_per_symbol);

  const ExperimentContext ctx = prepare_experiment(cfg);
  bool all_ok = true;
  const auto report_line = [&](bool ok, const std::string& label,
                               const std::string& detail) {
    all_ok = all_ok && ok;
    std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", label.c_str(),
                detail.empty() ? "" : ": ", detail.c_str());
  };

  for (double d : cfg.candidates) {
    const std::string label = "d=" + std::to_string(d * 1e6) + "um";
    const ChannelMatrix cm = build_transition(cfg.physical, d);
    const ValidationReport rep = validate(cm);
    for (const auto& check : rep.checks) {
      report_line(check.passed, label + " channel " + check.name, check.detail);
    }
    const double mass_err = mass_conservation_error(cm, 2000);
    report_line(mass_err < 1e-10, label + " cir mass-conservation",
                "max err " + std::to_string(mass_err));
  }
  for (const auto& cir : ctx.cir_set) {
    const std::string label = "d=" + std::to_string(cir.distance * 1e6) + "um";
    const int r = receiver_index(cir.distance, cfg.physical.spatial_step);
    bool dead_time_ok = true;
    bool bounds_ok = true;
    for (std::size_t i = 0; i < cir.g.size(); ++i) {
      if (static_cast<int>(i) <= r - 1 && cir.g[i] != 0.0) dead_time_ok = false;
      if (!(cir.g[i] >= 0.0 && cir.g[i] <= 1.0)) bounds_ok = false;
    }
    report_line(dead_time_ok, label + " cir dead-time",
                "r=" + std::to_string(r));
    report_line(bounds_ok, label + " cir bounds", "");
    const double peak = *std::max_element(cir.g.begin(), cir.g.end());
    report_line(cir.truncation_tail < 1e-6 * peak, label + " cir truncation-tail",
                "tail/peak=" + std::to_string(
                    peak > 0.0 ? cir.truncation_tail / peak : 0.0));
  }
  std::printf("overall: %s\n", all_ok ? "PASS" : "FAIL");
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Microfluidic molecular-communication ISAC simulator: Markov channel "
      "construction, impulse responses, OOK observation synthesis, and a "
      "pilot-assisted joint distance-sensing/DFE receiver"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string axis_name;
  std::string dump_path;
  SeedOverride seed;

  CLI::App* cir = app.add_subcommand("cir", "Dump per-candidate CIR tables as CSV");
  cir->add_option("--config", config_path, "Experiment configuration (JSON)")
      ->required();
  cir->add_option("--out", out_path, "Output CSV path")->required();

  CLI::App* simulate =
      app.add_subcommand("simulate", "Run one Monte Carlo configuration");
  simulate->add_option("--config", config_path, "Experiment configuration (JSON)")
      ->required();
  simulate->add_option("--out", out_path, "Output metrics JSON path")->required();
  simulate->add_option("--dump-observations", dump_path,
                       "Also dump every trial's observation blocks as CSV");
  add_seed_option(simulate, seed);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Sweep one experiment axis");
  sweep_cmd->add_option("--config", config_path, "Experiment configuration (JSON)")
      ->required();
  sweep_cmd->add_option("--axis", axis_name, "Sweep axis: ntx | pilot | iteration")
      ->required();
  sweep_cmd->add_option("--out", out_path, "Output CSV path")->required();
  add_seed_option(sweep_cmd, seed);

  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "Run the channel/CIR invariant suite for a configuration");
  validate_cmd->add_option("--config", config_path, "Experiment configuration (JSON)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cir->parsed()) return run_cir(config_path, out_path);
    if (simulate->parsed()) return run_simulate(config_path, out_path, seed, dump_path);
    if (sweep_cmd->parsed()) return run_sweep(config_path, axis_name, out_path, seed);
    if (validate_cmd->parsed()) return run_validate(config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
