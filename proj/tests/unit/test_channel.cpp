#include <random>

#include "doctest.h"
#include "test_helpers.hpp"

using namespace molisac;
using namespace testsupport;

TEST_CASE("elementary probabilities from the production constants") {
  const ElementaryProbs p = elementary_probs(table_params());
  CHECK(close(p.diffuse, 0.04, 1e-12));
  CHECK(close(p.advect, 0.008, 1e-12));
  CHECK(close(p.bind, 4.8e-3, 1e-12));
  CHECK(close(p.unbind, 2.4e-3, 1e-12));
}

TEST_CASE("zero rates give zero probabilities") {
  PhysicalParams params = table_params();
  params.diffusion_coeff = 0.0;
  params.flow_velocity = 0.0;
  params.binding_rate = 0.0;
  params.unbinding_rate = 0.0;
  const ElementaryProbs p = elementary_probs(params);
  CHECK(p.diffuse == 0.0);
  CHECK(p.advect == 0.0);
  CHECK(p.bind == 0.0);
  CHECK(p.unbind == 0.0);
}

TEST_CASE("parameter sets with negative or super-unit mass are rejected") {
  PhysicalParams params = table_params();
  params.diffusion_coeff = -1e-11;
  CHECK_THROWS_AS(elementary_probs(params), std::invalid_argument);

  params = table_params();
  params.time_step = 1.5e-2;  // 2*p_diff alone exceeds one
  CHECK_THROWS_AS(elementary_probs(params), std::invalid_argument);

  params = table_params();
  params.unbinding_rate = 2e3;  // p_unbind > 1
  CHECK_THROWS_AS(elementary_probs(params), std::invalid_argument);

  params = table_params();
  params.spatial_step = 0.0;
  CHECK_THROWS_AS(elementary_probs(params), std::invalid_argument);
}

TEST_CASE("rejection boundary is deterministic under random scaling") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(0.1, 0.9);
  for (int i = 0; i < 50; ++i) {
    PhysicalParams params = table_params();
    // Scale D so that 2*p_diff + p_flow + p_bind lands above 1.
    const double target = 1.0 + unif(rng);
    const ElementaryProbs base = elementary_probs(table_params());
    const double excess = target - base.advect - base.bind;
    params.diffusion_coeff = 0.5 * excess * params.spatial_step *
                             params.spatial_step / params.time_step;
    CHECK_THROWS_AS(elementary_probs(params), std::invalid_argument);
    CHECK_THROWS_AS(build_transition(params, 150e-6), std::invalid_argument);
  }
}

TEST_CASE("receiver index mapping and round trip") {
  CHECK(receiver_index(150e-6, 1e-6) == 151);
  CHECK(receiver_index(0.0, 1e-6) == 1);
  CHECK(receiver_index(130e-6, 1e-6) == 131);
  CHECK(close(distance_of(131, 1e-6), 130e-6, 1e-18));
  for (int r = 1; r <= 300; ++r) {
    CHECK(receiver_index(distance_of(r, 1e-6), 1e-6) == r);
  }
  CHECK_THROWS_AS(receiver_index(150.5e-6, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(receiver_index(-1e-6, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(distance_of(0, 1e-6), std::invalid_argument);
}

TEST_CASE("transition structure at the production geometry") {
  const PhysicalParams params = table_params();
  const ElementaryProbs p = elementary_probs(params);
  const ChannelMatrix cm = build_transition(params, 150e-6);
  const int n = params.num_states;

  CHECK(cm.receiver_idx == 151);
  CHECK(cm.dims == n);

  const ValidationReport report = validate(cm);
  CHECK(report.passed);

  int nonzero_out = 0;
  for (int j = 1; j <= n; ++j) {
    if (cm.flow_out[j - 1] != 0.0) ++nonzero_out;
  }
  CHECK(nonzero_out == 1);
  CHECK(close(cm.flow_out[n - 2], p.diffuse + p.advect, 1e-15));

  // Receiver coupling pair.
  CHECK(close(cm.Q.coeff(n, 151), 4.8e-3, 1e-12));
  CHECK(close(cm.Q.coeff(151, n), 2.4e-3, 1e-12));
  // Reflecting inlet.
  CHECK(close(cm.Q.coeff(1, 1), 0.952, 1e-12));
  CHECK(close(cm.Q.coeff(2, 1), 0.048, 1e-12));
  // Interior free state.
  CHECK(close(cm.Q.coeff(49, 50), p.diffuse, 1e-15));
  CHECK(close(cm.Q.coeff(51, 50), p.diffuse + p.advect, 1e-15));
  CHECK(close(cm.Q.coeff(50, 50), 1.0 - 2.0 * p.diffuse - p.advect, 1e-15));
  // Bound state keeps its mass apart from unbinding.
  CHECK(close(cm.Q.coeff(n, n), 1.0 - p.unbind, 1e-15));
}

TEST_CASE("column conservation holds for every candidate distance") {
  const PhysicalParams params = table_params();
  for (double d : {130e-6, 135e-6, 140e-6, 145e-6, 150e-6, 155e-6, 160e-6}) {
    const ChannelMatrix cm = build_transition(params, d);
    for (int j = 1; j <= cm.dims; ++j) {
      double sum = cm.flow_out[j - 1];
      for (int e = cm.Q.col_start[j - 1]; e < cm.Q.col_start[j]; ++e) {
        sum += cm.Q.vals[e];
      }
      CHECK(close(sum, 1.0, 1e-12));
    }
  }
}

TEST_CASE("two distances differ only around the receiver locations") {
  const PhysicalParams params = table_params();
  const ChannelMatrix a = build_transition(params, 130e-6);
  const ChannelMatrix b = build_transition(params, 160e-6);
  const int n = params.num_states;
  const int r1 = a.receiver_idx;
  const int r2 = b.receiver_idx;
  const auto touched = [&](int idx) { return idx == r1 || idx == r2 || idx == n; };
  for (int j = 1; j <= n; ++j) {
    for (int i : {j - 1, j, j + 1, n, r1, r2}) {
      if (i < 1 || i > n) continue;
      if (touched(i) || touched(j)) continue;
      CHECK(a.Q.coeff(i, j) == b.Q.coeff(i, j));
    }
    CHECK(a.flow_out[j - 1] == b.flow_out[j - 1]);
  }
}

TEST_CASE("validate flags broken matrices with their location") {
  const ChannelMatrix good = build_transition(table_params(), 150e-6);

  SUBCASE("deficient column sum") {
    ChannelMatrix cm = good;
    for (int e = cm.Q.col_start[4]; e < cm.Q.col_start[5]; ++e) {
      cm.Q.vals[e] *= 0.999;
    }
    const ValidationReport report = validate(cm);
    CHECK_FALSE(report.passed);
    const CheckResult* check = report.find("column-conservation");
    REQUIRE(check != nullptr);
    CHECK_FALSE(check->passed);
    CHECK(check->detail.find("column 5") != std::string::npos);
  }

  SUBCASE("negative entry") {
    ChannelMatrix cm = good;
    cm.Q.vals[cm.Q.col_start[9]] = -0.1;
    const ValidationReport report = validate(cm);
    CHECK_FALSE(report.passed);
    const CheckResult* check = report.find("entry-range");
    REQUIRE(check != nullptr);
    CHECK_FALSE(check->passed);
  }

  SUBCASE("flow-out away from the outlet") {
    ChannelMatrix cm = good;
    cm.flow_out[2] = 0.1;
    const ValidationReport report = validate(cm);
    CHECK_FALSE(report.passed);
    const CheckResult* check = report.find("flow-out-support");
    REQUIRE(check != nullptr);
    CHECK_FALSE(check->passed);
  }

  SUBCASE("entry outside the band") {
    ChannelMatrix cm = good;
    cm.Q.rows[cm.Q.col_start[9]] = 40;  // far off-band jump
    const ValidationReport report = validate(cm);
    CHECK_FALSE(report.passed);
    const CheckResult* check = report.find("structure");
    REQUIRE(check != nullptr);
    CHECK_FALSE(check->passed);
  }
}

TEST_CASE("receiver must sit on a free propagation state") {
  const PhysicalParams params = table_params();
  CHECK_THROWS_AS(build_transition(params, 300e-6), std::invalid_argument);
  CHECK_NOTHROW(build_transition(params, 299e-6));  // outlet state itself
  PhysicalParams tiny = params;
  tiny.num_states = 2;
  CHECK_THROWS_AS(build_transition(tiny, 0.0), std::invalid_argument);
}
