#pragma once

#include <cstdint>

namespace molisac {

/// Retained-sample layout within one symbol interval: N_s Markov steps per
/// symbol, every M-th step retained, X = N_s/M samples per symbol.
struct SamplingGrid {
  double symbol_interval = 0.0;    // T_b [s]
  double sampling_interval = 0.0;  // T_s [s]
  std::int64_t steps_per_symbol = 0;
  std::int64_t decimation = 0;
  int samples_per_symbol = 0;
};

/// Builds the grid from the symbol/sampling intervals and the Markov time
/// step; all three ratios must be integral.
SamplingGrid make_grid(double symbol_interval, double sampling_interval,
                       double time_step);

/// Markov step index of retained sample q (1-based) within symbol m (1-based).
inline std::int64_t retained_step(const SamplingGrid& grid, std::int64_t symbol,
                                  std::int64_t sample) {
  return (symbol - 1) * grid.steps_per_symbol + sample * grid.decimation;
}

}  // namespace molisac
