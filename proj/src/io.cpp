#include "molisac/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace molisac {

namespace {

std::string fmt(double v, const char* spec = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

std::string metrics_json_text(const ExperimentConfig& cfg,
                              const MetricsSummary& summary) {
  nlohmann::ordered_json j;
  j["detector_mode"] = to_string(cfg.mode);
  j["trials"] = summary.trials;
  j["data_length"] = summary.data_length;
  j["pilot_length"] = cfg.pilot_length;
  j["release_molecules"] = cfg.release_amplitude;
  j["true_distance_m"] = cfg.true_distance;
  j["master_seed"] = cfg.master_seed;
  j["noise"] = cfg.noise_on;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& m : summary.per_iteration) {
    nlohmann::ordered_json row;
    row["iteration"] = m.iteration;
    row["p_acc"] = m.p_acc;
    row["p_acc_ci"] = {m.p_acc_lo, m.p_acc_hi};
    row["ber"] = m.ber;
    row["ber_ci"] = {m.ber_lo, m.ber_hi};
    row["delta_ber"] = m.delta_ber;
    rows.push_back(row);
  }
  j["iterations"] = rows;
  return j.dump(2) + "\n";
}

void write_metrics_json(const std::string& path, const ExperimentConfig& cfg,
                        const MetricsSummary& summary) {
  write_text_file(path, metrics_json_text(cfg, summary));
}

std::string sweep_csv_text(SweepAxis axis,
                           const std::vector<SweepPoint>& points) {
  std::string out =
      "axis,value,iteration,p_acc,p_acc_lo,p_acc_hi,ber,ber_lo,ber_hi,"
      "delta_ber,trials\n";
  const char* axis_name = to_string(axis);
  for (const auto& point : points) {
    for (const auto& m : point.summary.per_iteration) {
      const double value =
          (axis == SweepAxis::iteration) ? m.iteration : point.value;
      out += axis_name;
      out += ',' + fmt(value) + ',' + std::to_string(m.iteration);
      out += ',' + fmt(m.p_acc) + ',' + fmt(m.p_acc_lo) + ',' + fmt(m.p_acc_hi);
      out += ',' + fmt(m.ber) + ',' + fmt(m.ber_lo) + ',' + fmt(m.ber_hi);
      out += ',' + fmt(m.delta_ber) + ',' + std::to_string(point.summary.trials);
      out += '\n';
    }
  }
  return out;
}

void write_sweep_csv(const std::string& path, SweepAxis axis,
                     const std::vector<SweepPoint>& points) {
  write_text_file(path, sweep_csv_text(axis, points));
}

std::string cir_csv_text(const std::vector<CirTable>& tables) {
  std::string out = "distance_m,step_index,g\n";
  for (const auto& table : tables) {
    const std::string d = fmt(table.distance, "%.9g");
    for (std::size_t i = 0; i < table.g.size(); ++i) {
      out += d + ',' + std::to_string(i) + ',' + fmt(table.g[i], "%.17g") + '\n';
    }
  }
  return out;
}

void write_cir_csv(const std::string& path,
                   const std::vector<CirTable>& tables) {
  write_text_file(path, cir_csv_text(tables));
}

void write_observation_csv(const std::string& path,
                           const ExperimentContext& ctx) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << "trial,symbol_index,sample_index,z\n";
  const ExperimentConfig& cfg = ctx.cfg;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    // Rebuild each trial's frame and noise from its substream; avoids
    // retaining every observation in memory during the main run.
    std::uint64_t obs_seed = 0;
    const SymbolFrame frame = trial_frame(cfg, trial, obs_seed);
    const ObservationFrame obs = generate_observations(
        ctx.true_cir, frame, ctx.grid, obs_seed, cfg.noise_on);
    for (std::size_t m = 0; m < obs.blocks.size(); ++m) {
      for (std::size_t q = 0; q < obs.blocks[m].size(); ++q) {
        out << trial << ',' << (m + 1) << ',' << (q + 1) << ','
            << fmt(obs.blocks[m][q], "%.17g") << '\n';
      }
    }
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << text;
  if (!out) {
    throw std::runtime_error("failed writing '" + path + "'");
  }
}

}  // namespace molisac
