#include "molisac/sampling.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace molisac {

namespace {

std::int64_t integral_ratio(double numerator, double denominator,
                            const char* what) {
  const double ratio = numerator / denominator;
  const double snapped = std::round(ratio);
  if (!(ratio > 0.0) ||
      std::abs(ratio - snapped) > 1e-9 * std::max(1.0, std::abs(ratio))) {
    throw std::invalid_argument(std::string("make_grid: ") + what +
                                " must be a positive integer, got " +
                                std::to_string(ratio));
  }
  return static_cast<std::int64_t>(snapped);
}

}  // namespace

SamplingGrid make_grid(double symbol_interval, double sampling_interval,
                       double time_step) {
  if (!(time_step > 0.0)) {
    throw std::invalid_argument("make_grid: time_step must be positive");
  }
  SamplingGrid grid;
  grid.symbol_interval = symbol_interval;
  grid.sampling_interval = sampling_interval;
  grid.steps_per_symbol = integral_ratio(symbol_interval, time_step, "T_b/dt");
  grid.decimation = integral_ratio(sampling_interval, time_step, "T_s/dt");
  if (grid.steps_per_symbol % grid.decimation != 0) {
    throw std::invalid_argument(
        "make_grid: N_s/M must be a positive integer (T_b not a multiple of T_s)");
  }
  grid.samples_per_symbol =
      static_cast<int>(grid.steps_per_symbol / grid.decimation);
  return grid;
}

}  // namespace molisac
