#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "molisac/harness.hpp"

namespace molisac {

namespace {

using nlohmann::json;

const json& section(const json& doc, const char* name) {
  if (!doc.contains(name) || !doc.at(name).is_object()) {
    throw std::invalid_argument(std::string("config: missing section '") +
                                name + "'");
  }
  return doc.at(name);
}

template <typename T>
T field(const json& obj, const char* sec, const char* key) {
  if (!obj.contains(key)) {
    throw std::invalid_argument(std::string("config: missing field ") + sec +
                                "." + key);
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("config: field ") + sec + "." +
                                key + " has the wrong type");
  }
}

template <typename T>
T field_or(const json& obj, const char* sec, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  return field<T>(obj, sec, key);
}

ExperimentConfig parse(const json& doc) {
  ExperimentConfig cfg;

  const json& phys = section(doc, "physical");
  cfg.physical.diffusion_coeff = field<double>(phys, "physical", "diffusion_coeff");
  cfg.physical.flow_velocity = field<double>(phys, "physical", "flow_velocity");
  cfg.physical.binding_rate = field<double>(phys, "physical", "binding_rate");
  cfg.physical.unbinding_rate = field<double>(phys, "physical", "unbinding_rate");
  cfg.physical.receptor_conc = field<double>(phys, "physical", "receptor_conc");
  cfg.physical.spatial_step = field<double>(phys, "physical", "spatial_step");
  cfg.physical.time_step = field<double>(phys, "physical", "time_step");
  cfg.physical.num_states = field<int>(phys, "physical", "num_states");

  const json& sampling = section(doc, "sampling");
  cfg.symbol_interval = field<double>(sampling, "sampling", "symbol_interval");
  cfg.sampling_interval = field<double>(sampling, "sampling", "sampling_interval");

  const json& frame = section(doc, "frame");
  cfg.pilot_length = field<int>(frame, "frame", "pilot_length");
  cfg.data_length = field<int>(frame, "frame", "data_length");
  cfg.release_amplitude = field<double>(frame, "frame", "release_molecules");
  cfg.pilot_bits = field_or<std::vector<std::uint8_t>>(frame, "frame",
                                                       "pilot_bits", {});

  const json& receiver = section(doc, "receiver");
  cfg.candidates =
      field<std::vector<double>>(receiver, "receiver", "candidate_distances");
  cfg.memory_length = field<int>(receiver, "receiver", "memory_length");
  cfg.max_iterations = field<int>(receiver, "receiver", "max_iterations");

  const json& experiment = section(doc, "experiment");
  cfg.true_distance = field<double>(experiment, "experiment", "true_distance");
  cfg.mismatched_distance =
      field<double>(experiment, "experiment", "mismatched_distance");
  cfg.trials = field<int>(experiment, "experiment", "trials");
  cfg.master_seed = field<std::uint64_t>(experiment, "experiment", "master_seed");
  cfg.mode = detector_mode_from_string(
      field<std::string>(experiment, "experiment", "detector_mode"));
  cfg.noise_on = field_or<bool>(experiment, "experiment", "noise", true);
  cfg.cir_horizon =
      field_or<std::int64_t>(experiment, "experiment", "cir_horizon", 0);
  cfg.workers = field_or<int>(experiment, "experiment", "workers", 0);

  if (doc.contains("sweep")) {
    const json& sw = doc.at("sweep");
    cfg.ntx_sweep = field_or<std::vector<double>>(sw, "sweep", "ntx", {});
    cfg.pilot_sweep = field_or<std::vector<int>>(sw, "sweep", "pilot", {});
  }

  validate_config(cfg);
  return cfg;
}

}  // namespace

ExperimentConfig load_config_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  return parse(doc);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("config: cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_config_json(buffer.str());
}

}  // namespace molisac
