#include "molisac/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

namespace molisac {

namespace {

constexpr double kStochasticTol = 1e-12;

std::string position(int row, int col) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "(%d,%d)", row, col);
  return buf;
}

}  // namespace

double SparseColMatrix::coeff(int row, int col) const {
  if (col < 1 || col > n || row < 1 || row > n) return 0.0;
  const int lo = col_start[col - 1];
  const int hi = col_start[col];
  const auto begin = rows.begin() + lo;
  const auto end = rows.begin() + hi;
  const auto it = std::lower_bound(begin, end, row);
  if (it == end || *it != row) return 0.0;
  return vals[static_cast<std::size_t>(it - rows.begin())];
}

ChannelMatrix build_transition(const PhysicalParams& params, double distance) {
  if (params.num_states < 3) {
    throw std::invalid_argument("build_transition: num_states must be >= 3");
  }
  const ElementaryProbs p = elementary_probs(params);
  const int n = params.num_states;
  const int r = receiver_index(distance, params.spatial_step);
  if (r > n - 1) {
    throw std::invalid_argument(
        "build_transition: receiver index lies beyond the outlet free state");
  }

  ChannelMatrix cm;
  cm.dims = n;
  cm.receiver_idx = r;
  cm.distance = distance;
  cm.flow_out.assign(n, 0.0);
  cm.Q.n = n;
  cm.Q.col_start.assign(n + 1, 0);
  cm.Q.rows.reserve(3 * n);
  cm.Q.vals.reserve(3 * n);

  const double forward = p.diffuse + p.advect;
  std::vector<std::pair<int, double>> column;  // (row, value), ascending rows
  for (int j = 1; j <= n; ++j) {
    column.clear();
    if (j == n) {
      // Bound state: unbinds back to the receiver-adjacent free state and
      // otherwise stays put (no advection or diffusion while bound).
      if (p.unbind > 0.0) column.emplace_back(r, p.unbind);
      const double stay = 1.0 - p.unbind;
      if (stay > 0.0) column.emplace_back(n, stay);
    } else {
      const double back = (j >= 2) ? p.diffuse : 0.0;        // inlet reflects
      const double ahead = (j <= n - 2) ? forward : 0.0;     // outlet exits instead
      const double bind = (j == r) ? p.bind : 0.0;
      const double out = (j == n - 1) ? forward : 0.0;       // irreversible flow-out
      double stay = 1.0 - (back + ahead + bind + out);
      if (stay < 0.0) {
        if (stay < -kStochasticTol) {
          throw std::invalid_argument(
              "build_transition: negative self-transition mass at state " +
              std::to_string(j));
        }
        stay = 0.0;
      }
      if (back > 0.0) column.emplace_back(j - 1, back);
      if (stay > 0.0) column.emplace_back(j, stay);
      if (ahead > 0.0) column.emplace_back(j + 1, ahead);
      if (bind > 0.0) column.emplace_back(n, bind);
      cm.flow_out[j - 1] = out;
    }
    for (const auto& [row, value] : column) {
      cm.Q.rows.push_back(row);
      cm.Q.vals.push_back(value);
    }
    cm.Q.col_start[j] = static_cast<int>(cm.Q.rows.size());
  }
  return cm;
}

const CheckResult* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ValidationReport validate(const ChannelMatrix& cm) {
  ValidationReport report;
  const int n = cm.dims;

  CheckResult shape{"shape", true, ""};
  if (n < 3 || cm.Q.n != n || static_cast<int>(cm.flow_out.size()) != n ||
      static_cast<int>(cm.Q.col_start.size()) != n + 1 ||
      cm.receiver_idx < 1 || cm.receiver_idx > n - 1) {
    shape.passed = false;
    shape.detail = "inconsistent dims/receiver index";
  }
  report.checks.push_back(shape);
  if (!shape.passed) {
    report.passed = false;
    return report;
  }

  CheckResult range{"entry-range", true, ""};
  for (int j = 1; j <= n; ++j) {
    for (int e = cm.Q.col_start[j - 1]; e < cm.Q.col_start[j]; ++e) {
      const double v = cm.Q.vals[e];
      if (!(v >= 0.0 && v <= 1.0)) {
        range.passed = false;
        range.detail += "Q" + position(cm.Q.rows[e], j) + "=" + std::to_string(v) + " ";
      }
    }
  }
  for (int j = 1; j <= n; ++j) {
    const double v = cm.flow_out[j - 1];
    if (!(v >= 0.0 && v <= 1.0)) {
      range.passed = false;
      range.detail += "psi[" + std::to_string(j) + "]=" + std::to_string(v) + " ";
    }
  }
  report.checks.push_back(range);

  CheckResult conservation{"column-conservation", true, ""};
  double worst = 0.0;
  for (int j = 1; j <= n; ++j) {
    double sum = cm.flow_out[j - 1];
    for (int e = cm.Q.col_start[j - 1]; e < cm.Q.col_start[j]; ++e) {
      sum += cm.Q.vals[e];
    }
    const double err = std::abs(sum - 1.0);
    worst = std::max(worst, err);
    if (err > kStochasticTol) {
      conservation.passed = false;
      conservation.detail +=
          "column " + std::to_string(j) + " sums to " + std::to_string(sum) + " ";
    }
  }
  if (conservation.passed) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "max |colsum+psi-1| = %.3g", worst);
    conservation.detail = buf;
  }
  report.checks.push_back(conservation);

  CheckResult support{"flow-out-support", true, ""};
  for (int j = 1; j <= n; ++j) {
    if (j != n - 1 && cm.flow_out[j - 1] != 0.0) {
      support.passed = false;
      support.detail += "psi[" + std::to_string(j) + "] nonzero ";
    }
  }
  report.checks.push_back(support);

  // Entries are confined to the free-chain band (diagonal + adjacent free
  // states) plus the bind/unbind coupling pair at (N, r) and (r, N).
  CheckResult structure{"structure", true, ""};
  const int r = cm.receiver_idx;
  for (int j = 1; j <= n; ++j) {
    for (int e = cm.Q.col_start[j - 1]; e < cm.Q.col_start[j]; ++e) {
      const int i = cm.Q.rows[e];
      const bool diagonal = (i == j);
      const bool band = (j <= n - 1 && i <= n - 1 && std::abs(i - j) == 1);
      const bool coupling = (i == n && j == r) || (i == r && j == n);
      if (!(diagonal || band || coupling)) {
        structure.passed = false;
        structure.detail += "Q" + position(i, j) + " outside structure ";
      }
    }
  }
  report.checks.push_back(structure);

  report.passed = true;
  for (const auto& c : report.checks) report.passed = report.passed && c.passed;
  return report;
}

}  // namespace molisac
