#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "molisac/io.hpp"

namespace py = pybind11;
using namespace molisac;

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Microfluidic molecular-communication ISAC simulator: distance-"
      "parameterized Markov channels, impulse responses, OOK observation "
      "synthesis, and the pilot-assisted joint receiver.";

  py::class_<PhysicalParams>(m, "PhysicalParams")
      .def(py::init<>())
      .def_readwrite("diffusion_coeff", &PhysicalParams::diffusion_coeff)
      .def_readwrite("flow_velocity", &PhysicalParams::flow_velocity)
      .def_readwrite("binding_rate", &PhysicalParams::binding_rate)
      .def_readwrite("unbinding_rate", &PhysicalParams::unbinding_rate)
      .def_readwrite("receptor_conc", &PhysicalParams::receptor_conc)
      .def_readwrite("spatial_step", &PhysicalParams::spatial_step)
      .def_readwrite("time_step", &PhysicalParams::time_step)
      .def_readwrite("num_states", &PhysicalParams::num_states);

  py::class_<ElementaryProbs>(m, "ElementaryProbs")
      .def_readonly("diffuse", &ElementaryProbs::diffuse)
      .def_readonly("advect", &ElementaryProbs::advect)
      .def_readonly("bind", &ElementaryProbs::bind)
      .def_readonly("unbind", &ElementaryProbs::unbind);

  m.def("elementary_probs", &elementary_probs, py::arg("params"));
  m.def("receiver_index", &receiver_index, py::arg("distance"),
        py::arg("spatial_step"));
  m.def("distance_of", &distance_of, py::arg("receiver_idx"),
        py::arg("spatial_step"));

  py::class_<SparseColMatrix>(m, "SparseColMatrix")
      .def_readonly("n", &SparseColMatrix::n)
      .def("coeff", &SparseColMatrix::coeff, py::arg("row"), py::arg("col"));

  py::class_<ChannelMatrix>(m, "ChannelMatrix")
      .def_readonly("Q", &ChannelMatrix::Q)
      .def_readonly("flow_out", &ChannelMatrix::flow_out)
      .def_readonly("receiver_idx", &ChannelMatrix::receiver_idx)
      .def_readonly("distance", &ChannelMatrix::distance)
      .def_readonly("dims", &ChannelMatrix::dims);

  m.def("build_transition", &build_transition, py::arg("params"),
        py::arg("distance"));

  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("name", &CheckResult::name)
      .def_readonly("passed", &CheckResult::passed)
      .def_readonly("detail", &CheckResult::detail);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("passed", &ValidationReport::passed)
      .def_readonly("checks", &ValidationReport::checks);

  m.def("validate", &validate, py::arg("channel_matrix"));

  py::class_<SamplingGrid>(m, "SamplingGrid")
      .def_readonly("symbol_interval", &SamplingGrid::symbol_interval)
      .def_readonly("sampling_interval", &SamplingGrid::sampling_interval)
      .def_readonly("steps_per_symbol", &SamplingGrid::steps_per_symbol)
      .def_readonly("decimation", &SamplingGrid::decimation)
      .def_readonly("samples_per_symbol", &SamplingGrid::samples_per_symbol);

  m.def("make_grid", &make_grid, py::arg("symbol_interval"),
        py::arg("sampling_interval"), py::arg("time_step"));

  py::class_<StateVector>(m, "StateVector")
      .def(py::init<>())
      .def_readwrite("x", &StateVector::x)
      .def_readwrite("step_index", &StateVector::step_index);

  m.def("propagate", &propagate, py::arg("channel_matrix"), py::arg("state"),
        py::arg("input"));

  py::class_<CirTable>(m, "CirTable")
      .def_readonly("distance", &CirTable::distance)
      .def_readonly("g", &CirTable::g)
      .def_readonly("horizon", &CirTable::horizon)
      .def_readonly("truncation_tail", &CirTable::truncation_tail);

  m.def("impulse_response", &impulse_response, py::arg("channel_matrix"),
        py::arg("horizon"), py::call_guard<py::gil_scoped_release>());
  m.def("block_response", &block_response, py::arg("cir"), py::arg("delay"),
        py::arg("grid"));
  m.def("simulate_particles", &simulate_particles, py::arg("channel_matrix"),
        py::arg("n_molecules"), py::arg("steps"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());
  m.def("mass_conservation_error", &mass_conservation_error,
        py::arg("channel_matrix"), py::arg("steps"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<SymbolFrame>(m, "SymbolFrame")
      .def(py::init<>())
      .def_readwrite("pilot", &SymbolFrame::pilot)
      .def_readwrite("data", &SymbolFrame::data)
      .def_readwrite("release_amplitude", &SymbolFrame::release_amplitude)
      .def("bits", &SymbolFrame::bits)
      .def("length", &SymbolFrame::length);

  py::class_<Impulse>(m, "Impulse")
      .def_readonly("step", &Impulse::step)
      .def_readonly("amplitude", &Impulse::amplitude);

  m.def("ook_input", &ook_input, py::arg("frame"), py::arg("grid"));
  m.def("noiseless_block_means", &noiseless_block_means, py::arg("cir"),
        py::arg("frame"), py::arg("grid"));
  m.def("noise_variance", &noise_variance, py::arg("cir"), py::arg("frame"),
        py::arg("grid"), py::arg("step"));

  py::class_<ObservationFrame>(m, "ObservationFrame")
      .def(py::init<>())
      .def_readwrite("blocks", &ObservationFrame::blocks)
      .def_readwrite("grid", &ObservationFrame::grid)
      .def_readwrite("true_distance", &ObservationFrame::true_distance)
      .def_readwrite("seed", &ObservationFrame::seed);

  m.def("generate_observations", &generate_observations, py::arg("cir"),
        py::arg("frame"), py::arg("grid"), py::arg("seed"),
        py::arg("noise_on") = true);

  py::class_<ReceiverConfig>(m, "ReceiverConfig")
      .def(py::init<>())
      .def_readwrite("candidates", &ReceiverConfig::candidates)
      .def_readwrite("memory_length", &ReceiverConfig::memory_length)
      .def_readwrite("max_iterations", &ReceiverConfig::max_iterations)
      .def_readwrite("pilot", &ReceiverConfig::pilot)
      .def_readwrite("combiner", &ReceiverConfig::combiner);

  m.def("uniform_combiner", &uniform_combiner, py::arg("samples"));

  py::class_<BankEntry>(m, "BankEntry")
      .def_readonly("distance", &BankEntry::distance)
      .def_readonly("block_cir", &BankEntry::block_cir)
      .def_readonly("compressed_cir", &BankEntry::compressed_cir)
      .def_readonly("pilot_templates", &BankEntry::pilot_templates);

  py::class_<TemplateBank>(m, "TemplateBank")
      .def_readonly("entries", &TemplateBank::entries)
      .def_readonly("release_amplitude", &TemplateBank::release_amplitude);

  m.def("build_bank_entry", &build_bank_entry, py::arg("cir"), py::arg("grid"),
        py::arg("config"), py::arg("release_amplitude"));
  m.def("build_bank", &build_bank, py::arg("cirs"), py::arg("grid"),
        py::arg("config"), py::arg("release_amplitude"));
  m.def("compress", &compress, py::arg("block"), py::arg("combiner"));
  m.def("pilot_distance_init", &pilot_distance_init, py::arg("observations"),
        py::arg("bank"), py::arg("config"));
  m.def("dfe_detect", &dfe_detect, py::arg("observations"), py::arg("entry"),
        py::arg("config"), py::arg("release_amplitude"));
  m.def("refine_distance", &refine_distance, py::arg("observations"),
        py::arg("reconstructed"), py::arg("bank"), py::arg("config"));

  py::class_<DetectionResult>(m, "DetectionResult")
      .def_readonly("distance_trajectory", &DetectionResult::distance_trajectory)
      .def_readonly("bits_per_iteration", &DetectionResult::bits_per_iteration)
      .def_readonly("iterations_used", &DetectionResult::iterations_used)
      .def_readonly("converged", &DetectionResult::converged);

  m.def("run_receiver", &run_receiver, py::arg("observations"),
        py::arg("config"), py::arg("bank"));

  py::enum_<DetectorMode>(m, "DetectorMode")
      .value("isac", DetectorMode::isac)
      .value("true_distance_dfe", DetectorMode::true_distance_dfe)
      .value("unaware_dfe", DetectorMode::unaware_dfe);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("physical", &ExperimentConfig::physical)
      .def_readwrite("symbol_interval", &ExperimentConfig::symbol_interval)
      .def_readwrite("sampling_interval", &ExperimentConfig::sampling_interval)
      .def_readwrite("pilot_length", &ExperimentConfig::pilot_length)
      .def_readwrite("data_length", &ExperimentConfig::data_length)
      .def_readwrite("pilot_bits", &ExperimentConfig::pilot_bits)
      .def_readwrite("release_amplitude", &ExperimentConfig::release_amplitude)
      .def_readwrite("candidates", &ExperimentConfig::candidates)
      .def_readwrite("memory_length", &ExperimentConfig::memory_length)
      .def_readwrite("max_iterations", &ExperimentConfig::max_iterations)
      .def_readwrite("true_distance", &ExperimentConfig::true_distance)
      .def_readwrite("mismatched_distance", &ExperimentConfig::mismatched_distance)
      .def_readwrite("trials", &ExperimentConfig::trials)
      .def_readwrite("master_seed", &ExperimentConfig::master_seed)
      .def_readwrite("mode", &ExperimentConfig::mode)
      .def_readwrite("noise_on", &ExperimentConfig::noise_on)
      .def_readwrite("cir_horizon", &ExperimentConfig::cir_horizon)
      .def_readwrite("workers", &ExperimentConfig::workers)
      .def_readwrite("ntx_sweep", &ExperimentConfig::ntx_sweep)
      .def_readwrite("pilot_sweep", &ExperimentConfig::pilot_sweep);

  m.def("load_config", &load_config, py::arg("path"));
  m.def("load_config_json", &load_config_json, py::arg("text"));
  m.def("validate_config", &validate_config, py::arg("config"));

  py::class_<TrialResult>(m, "TrialResult")
      .def_readonly("seed", &TrialResult::seed)
      .def_readonly("detection", &TrialResult::detection)
      .def_readonly("bit_errors", &TrialResult::bit_errors)
      .def_readonly("distance_correct", &TrialResult::distance_correct);

  m.def("run_trial",
        static_cast<TrialResult (*)(const ExperimentConfig&, int)>(&run_trial),
        py::arg("config"), py::arg("trial_index"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<IterationMetrics>(m, "IterationMetrics")
      .def_readonly("iteration", &IterationMetrics::iteration)
      .def_readonly("p_acc", &IterationMetrics::p_acc)
      .def_readonly("p_acc_lo", &IterationMetrics::p_acc_lo)
      .def_readonly("p_acc_hi", &IterationMetrics::p_acc_hi)
      .def_readonly("ber", &IterationMetrics::ber)
      .def_readonly("ber_lo", &IterationMetrics::ber_lo)
      .def_readonly("ber_hi", &IterationMetrics::ber_hi)
      .def_readonly("delta_ber", &IterationMetrics::delta_ber);

  py::class_<MetricsSummary>(m, "MetricsSummary")
      .def_readonly("per_iteration", &MetricsSummary::per_iteration)
      .def_readonly("trials", &MetricsSummary::trials)
      .def_readonly("data_length", &MetricsSummary::data_length);

  m.def("run_monte_carlo", &run_monte_carlo, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  py::enum_<SweepAxis>(m, "SweepAxis")
      .value("ntx", SweepAxis::ntx)
      .value("pilot", SweepAxis::pilot)
      .value("iteration", SweepAxis::iteration);

  py::class_<SweepPoint>(m, "SweepPoint")
      .def_readonly("value", &SweepPoint::value)
      .def_readonly("summary", &SweepPoint::summary);

  m.def("sweep", &sweep, py::arg("config"), py::arg("axis"),
        py::call_guard<py::gil_scoped_release>());

  m.def("metrics_json_text", &metrics_json_text, py::arg("config"),
        py::arg("summary"));
  m.def("sweep_csv_text", &sweep_csv_text, py::arg("axis"), py::arg("points"));
  m.def("wilson_interval",
        [](std::int64_t successes, std::int64_t n) {
          const WilsonInterval w = wilson_interval(successes, n);
          return std::make_pair(w.lo, w.hi);
        },
        py::arg("successes"), py::arg("n"));

  m.attr("__version__") = "0.1.0";
}
