#pragma once

#include <string>
#include <vector>

#include "molisac/params.hpp"

namespace molisac {

/// Column-compressed sparse matrix with the convention used throughout:
/// entry (i, j) is the probability of moving from state j to state i in one
/// step. Row/column labels are 1-based; rows are ascending within a column.
struct SparseColMatrix {
  int n = 0;
  std::vector<int> col_start;  // n+1 offsets into rows/vals
  std::vector<int> rows;
  std::vector<double> vals;

  /// Entry lookup by 1-based labels; zero when the position is not stored.
  double coeff(int row, int col) const;
};

/// Transient block of the distance-parameterized transition matrix.
/// States 1..N-1 are free propagation states along the flow direction,
/// state N is the receiver-bound state; flow_out collects the transitions
/// into the absorbing outlet sink.
struct ChannelMatrix {
  SparseColMatrix Q;
  std::vector<double> flow_out;  // length N, nonzero only at the outlet
  int receiver_idx = 0;          // r, 1-based
  double distance = 0.0;         // m
  int dims = 0;                  // N
};

/// Assembles Q(d) and the flow-out vector for one candidate distance:
/// free states advance with diffuse+advect, retreat with diffuse, and keep
/// the residual mass; the inlet reflects, the outlet feeds the sink, and
/// the receiver-adjacent state couples to the bound state with bind/unbind.
ChannelMatrix build_transition(const PhysicalParams& params, double distance);

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct ValidationReport {
  bool passed = true;
  std::vector<CheckResult> checks;

  const CheckResult* find(const std::string& name) const;
};

/// Report-only invariant audit: entry ranges, column conservation at 1e-12,
/// flow-out support, and confinement of Q to the free-chain band plus the
/// two receiver coupling entries.
ValidationReport validate(const ChannelMatrix& cm);

}  // namespace molisac
