#pragma once

#include <string>
#include <vector>

#include "molisac/harness.hpp"

namespace molisac {

/// Single-run metrics as a deterministic JSON document (stable key order,
/// no timestamps), so identical seeds produce byte-identical files.
std::string metrics_json_text(const ExperimentConfig& cfg,
                              const MetricsSummary& summary);
void write_metrics_json(const std::string& path, const ExperimentConfig& cfg,
                        const MetricsSummary& summary);

/// Sweep table: header row, one row per sweep point per iteration index.
std::string sweep_csv_text(SweepAxis axis,
                           const std::vector<SweepPoint>& points);
void write_sweep_csv(const std::string& path, SweepAxis axis,
                     const std::vector<SweepPoint>& points);

/// CIR dump rows: distance_m,step_index,g.
std::string cir_csv_text(const std::vector<CirTable>& tables);
void write_cir_csv(const std::string& path,
                   const std::vector<CirTable>& tables);

/// Observation dump rows: trial,symbol_index,sample_index,z (observations
/// are regenerated from the trial substreams).
void write_observation_csv(const std::string& path,
                           const ExperimentContext& ctx);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace molisac
