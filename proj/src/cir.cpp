#include "molisac/cir.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace molisac {

namespace {

// y = Q x. Zero source states are skipped, which keeps early impulse steps
// proportional to the occupied neighborhood.
void apply_transition(const ChannelMatrix& cm, const std::vector<double>& in,
                      std::vector<double>& out) {
  const auto& q = cm.Q;
  out.assign(in.size(), 0.0);
  for (int j = 0; j < q.n; ++j) {
    const double mass = in[j];
    if (mass == 0.0) continue;
    for (int e = q.col_start[j]; e < q.col_start[j + 1]; ++e) {
      out[q.rows[e] - 1] += q.vals[e] * mass;
    }
  }
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

StateVector propagate(const ChannelMatrix& cm, const StateVector& sv,
                      double input) {
  if (static_cast<int>(sv.x.size()) != cm.dims) {
    throw std::invalid_argument("propagate: state dimension mismatch");
  }
  if (!(input >= 0.0)) {
    throw std::invalid_argument("propagate: input must be nonnegative");
  }
  StateVector next;
  apply_transition(cm, sv.x, next.x);
  next.x[0] += input;
  next.step_index = sv.step_index + 1;
  return next;
}

CirTable impulse_response(const ChannelMatrix& cm, std::int64_t horizon) {
  if (horizon < 0) {
    throw std::invalid_argument("impulse_response: horizon must be >= 0");
  }
  CirTable table;
  table.distance = cm.distance;
  table.horizon = horizon;
  table.g.resize(static_cast<std::size_t>(horizon) + 1);

  std::vector<double> x(cm.dims, 0.0);
  std::vector<double> next(cm.dims, 0.0);
  x[0] = 1.0;  // unit release into the inlet
  const int bound = cm.dims - 1;
  table.g[0] = x[bound];
  for (std::int64_t i = 1; i <= horizon; ++i) {
    apply_transition(cm, x, next);
    x.swap(next);
    table.g[static_cast<std::size_t>(i)] = x[bound];
  }
  table.truncation_tail = table.g[static_cast<std::size_t>(horizon)];
  return table;
}

std::vector<double> block_response(const CirTable& cir, std::int64_t delay,
                                   const SamplingGrid& grid) {
  if (delay < 0) {
    throw std::invalid_argument("block_response: delay must be >= 0");
  }
  const std::int64_t last =
      delay * grid.steps_per_symbol +
      static_cast<std::int64_t>(grid.samples_per_symbol) * grid.decimation - 1;
  if (last > cir.horizon) {
    throw std::out_of_range(
        "block_response: CIR horizon " + std::to_string(cir.horizon) +
        " does not cover delay " + std::to_string(delay) + " (needs " +
        std::to_string(last) + ")");
  }
  std::vector<double> out(static_cast<std::size_t>(grid.samples_per_symbol));
  for (int q = 1; q <= grid.samples_per_symbol; ++q) {
    const std::int64_t lag = delay * grid.steps_per_symbol + q * grid.decimation - 1;
    out[static_cast<std::size_t>(q - 1)] = cir.g[static_cast<std::size_t>(lag)];
  }
  return out;
}

std::vector<std::int64_t> simulate_particles(const ChannelMatrix& cm,
                                             std::int64_t n_molecules,
                                             int steps, std::uint64_t seed) {
  if (n_molecules < 1) {
    throw std::invalid_argument("simulate_particles: need at least one molecule");
  }
  if (steps < 0) {
    throw std::invalid_argument("simulate_particles: steps must be >= 0");
  }
  std::vector<std::int64_t> counts(static_cast<std::size_t>(steps) + 1, 0);
  std::mt19937_64 rng(seed);
  const int bound = cm.dims;
  const auto& q = cm.Q;
  for (std::int64_t mol = 0; mol < n_molecules; ++mol) {
    int state = 1;  // released into the inlet; never bound at step 0
    for (int s = 1; s <= steps; ++s) {
      const double u = uniform01(rng);
      const int j = state - 1;
      double cum = 0.0;
      int next_state = state;  // roundoff remainder keeps the molecule in place
      bool moved = false;
      for (int e = q.col_start[j]; e < q.col_start[j + 1] && !moved; ++e) {
        cum += q.vals[e];
        if (u < cum) {
          next_state = q.rows[e];
          moved = true;
        }
      }
      if (!moved && u < cum + cm.flow_out[j]) {
        break;  // washed out through the absorbing sink
      }
      state = next_state;
      if (state == bound) ++counts[static_cast<std::size_t>(s)];
    }
  }
  return counts;
}

double mass_conservation_error(const ChannelMatrix& cm, std::int64_t steps) {
  std::vector<double> x(cm.dims, 0.0);
  std::vector<double> next(cm.dims, 0.0);
  x[0] = 1.0;
  double absorbed = 0.0;
  double worst = 0.0;
  for (std::int64_t k = 1; k <= steps; ++k) {
    for (int j = 0; j < cm.dims; ++j) absorbed += cm.flow_out[j] * x[j];
    apply_transition(cm, x, next);
    x.swap(next);
    double total = absorbed;
    for (double v : x) total += v;
    worst = std::max(worst, std::abs(total - 1.0));
  }
  return worst;
}

}  // namespace molisac
