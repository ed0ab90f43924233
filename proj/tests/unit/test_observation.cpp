#include <random>

#include "doctest.h"
#include "test_helpers.hpp"

using namespace molisac;
using namespace testsupport;

namespace {

CirTable small_cir(double distance, std::int64_t horizon = 2000) {
  return impulse_response(build_transition(small_params(), distance), horizon);
}

}  // namespace

TEST_CASE("grid derivation from the production intervals") {
  const SamplingGrid grid = table_grid();
  CHECK(grid.steps_per_symbol == 15000);
  CHECK(grid.decimation == 3000);
  CHECK(grid.samples_per_symbol == 5);

  CHECK_THROWS_AS(make_grid(12.001, 2.4, 8e-4), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(12.0, 5.0, 8e-4), std::invalid_argument);  // X not integral
  CHECK_THROWS_AS(make_grid(12.0, 2.4, 0.0), std::invalid_argument);
}

TEST_CASE("ook input places impulses at the symbol starts") {
  const SamplingGrid grid = table_grid();

  SymbolFrame one;
  one.data = {1};
  one.release_amplitude = 2400.0;
  const auto single = ook_input(one, grid);
  REQUIRE(single.size() == 1);
  CHECK(single[0].step == 0);
  CHECK(single[0].amplitude == 2400.0);

  SymbolFrame gap;
  gap.data = {1, 0, 1};
  gap.release_amplitude = 800.0;
  const auto two = ook_input(gap, grid);
  REQUIRE(two.size() == 2);
  CHECK(two[0].step == 0);
  CHECK(two[1].step == 30000);

  SymbolFrame silent;
  silent.data = {0, 0, 0};
  silent.release_amplitude = 800.0;
  CHECK(ook_input(silent, grid).empty());
}

TEST_CASE("noiseless block means superpose shifted block responses") {
  const CirTable cir = small_cir(12e-6);
  const SamplingGrid grid = small_grid();
  const double ntx = 150.0;
  const auto g0 = block_response(cir, 0, grid);
  const auto g1 = block_response(cir, 1, grid);

  SymbolFrame single;
  single.data = {1};
  single.release_amplitude = ntx;
  const auto mono = noiseless_block_means(cir, single, grid);
  REQUIRE(mono.size() == 1);
  for (int q = 0; q < grid.samples_per_symbol; ++q) {
    CHECK(close(mono[0][q], ntx * g0[q], 1e-12 * ntx));
  }

  SymbolFrame pair;
  pair.data = {1, 1};
  pair.release_amplitude = ntx;
  const auto both = noiseless_block_means(cir, pair, grid);
  REQUIRE(both.size() == 2);
  for (int q = 0; q < grid.samples_per_symbol; ++q) {
    CHECK(close(both[1][q], ntx * (g0[q] + g1[q]), 1e-12 * ntx));
  }

  SymbolFrame isi_only;
  isi_only.data = {1, 0};
  isi_only.release_amplitude = ntx;
  const auto tail = noiseless_block_means(cir, isi_only, grid);
  for (int q = 0; q < grid.samples_per_symbol; ++q) {
    CHECK(close(tail[1][q], ntx * g1[q], 1e-12 * ntx));
  }
}

TEST_CASE("means are additive over frames with disjoint support") {
  const CirTable cir = small_cir(10e-6);
  const SamplingGrid grid = small_grid();
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t k = 12;
    SymbolFrame a, b, sum;
    a.release_amplitude = b.release_amplitude = sum.release_amplitude = 90.0;
    a.data.assign(k, 0);
    b.data.assign(k, 0);
    sum.data.assign(k, 0);
    for (std::size_t m = 0; m < k; ++m) {
      const auto roll = rng() % 3;
      if (roll == 1) a.data[m] = 1;
      if (roll == 2) b.data[m] = 1;
      sum.data[m] = a.data[m] | b.data[m];
    }
    const auto ma = noiseless_block_means(cir, a, grid);
    const auto mb = noiseless_block_means(cir, b, grid);
    const auto ms = noiseless_block_means(cir, sum, grid);
    for (std::size_t m = 0; m < k; ++m) {
      for (int q = 0; q < grid.samples_per_symbol; ++q) {
        CHECK(close(ms[m][q], ma[m][q] + mb[m][q], 1e-10));
      }
    }
  }
}

TEST_CASE("noise variance follows the binomial factor") {
  const CirTable cir = small_cir(12e-6);
  const SamplingGrid grid = small_grid();

  SymbolFrame silent;
  silent.data = {0, 0, 0};
  silent.release_amplitude = 500.0;
  for (std::int64_t k : {1, 200, 700, 1400}) {
    CHECK(noise_variance(cir, silent, grid, k) == 0.0);
  }

  SymbolFrame single;
  single.data = {1};
  single.release_amplitude = 500.0;
  for (std::int64_t k : {14, 100, 350}) {
    const double g = cir.g[static_cast<std::size_t>(k - 1)];
    CHECK(close(noise_variance(cir, single, grid, k), 500.0 * g * (1.0 - g),
                1e-12));
  }

  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    SymbolFrame frame;
    frame.pilot = {1, 1};
    frame.data = random_bits(15, rng());
    frame.release_amplitude = 1.0 + static_cast<double>(rng() % 5000);
    const std::int64_t k = 1 + static_cast<std::int64_t>(
                                   rng() % (17 * grid.steps_per_symbol));
    CHECK(noise_variance(cir, frame, grid, k) >= 0.0);
  }

  // A saturated response (g = 1) contributes no counting noise.
  CirTable saturated;
  saturated.distance = 1e-6;
  saturated.g = {0.0, 1.0, 0.5};
  saturated.horizon = 2;
  SymbolFrame frame;
  frame.data = {1};
  frame.release_amplitude = 100.0;
  const SamplingGrid unit = make_grid(2 * 8e-4, 8e-4, 8e-4);
  CHECK(noise_variance(saturated, frame, unit, 2) == 0.0);
}

TEST_CASE("frame invariants are enforced") {
  const CirTable cir = small_cir(12e-6);
  const SamplingGrid grid = small_grid();
  SymbolFrame bad;
  bad.release_amplitude = 100.0;
  CHECK_THROWS_AS(ook_input(bad, grid), std::invalid_argument);  // empty frame
  bad.data = {1, 0};
  bad.release_amplitude = 0.0;
  CHECK_THROWS_AS(noiseless_block_means(cir, bad, grid), std::invalid_argument);
  bad.release_amplitude = 100.0;
  bad.data = {1, 2};
  CHECK_THROWS_AS(generate_observations(cir, bad, grid, 1, true),
                  std::invalid_argument);
}

TEST_CASE("observation synthesis is exact with noise off and reproducible") {
  const CirTable cir = small_cir(12e-6);
  const SamplingGrid grid = small_grid();
  SymbolFrame frame;
  frame.pilot = {1, 1};
  frame.data = random_bits(20, 3);
  frame.release_amplitude = 120.0;

  const auto means = noiseless_block_means(cir, frame, grid);
  const ObservationFrame quiet = generate_observations(cir, frame, grid, 5, false);
  REQUIRE(quiet.blocks.size() == frame.length());
  for (std::size_t m = 0; m < means.size(); ++m) {
    for (int q = 0; q < grid.samples_per_symbol; ++q) {
      CHECK(quiet.blocks[m][q] == means[m][q]);
    }
  }
  CHECK(quiet.true_distance == cir.distance);

  const ObservationFrame a = generate_observations(cir, frame, grid, 5, true);
  const ObservationFrame b = generate_observations(cir, frame, grid, 5, true);
  CHECK(a.blocks == b.blocks);
  const ObservationFrame c = generate_observations(cir, frame, grid, 6, true);
  CHECK(a.blocks != c.blocks);

  // Gaussian synthesis may go negative; no clipping is applied.
  bool saw_negative = false;
  for (const auto& block : a.blocks) {
    for (double z : block) saw_negative = saw_negative || z < 0.0;
  }
  CHECK(saw_negative);
}

TEST_CASE("zero-variance samples stay exactly at the mean under noise") {
  const CirTable cir = small_cir(12e-6);
  const SamplingGrid grid = small_grid();
  SymbolFrame silent;
  silent.pilot = {0};
  silent.data = {0, 0};
  silent.release_amplitude = 500.0;
  const ObservationFrame obs = generate_observations(cir, silent, grid, 17, true);
  for (const auto& block : obs.blocks) {
    for (double z : block) CHECK(z == 0.0);
  }
}

TEST_CASE("empirical moments match the model across seeds") {
  const CirTable cir = small_cir(12e-6);
  const SamplingGrid grid = small_grid();
  SymbolFrame frame;
  frame.pilot = {1, 1};
  frame.data = {1};
  frame.release_amplitude = 200.0;

  const std::size_t symbol = 1;  // second block: current response plus ISI
  const int sample = 3;
  const auto means = noiseless_block_means(cir, frame, grid);
  const double mu = means[symbol][sample];
  const std::int64_t k =
      retained_step(grid, static_cast<std::int64_t>(symbol) + 1, sample + 1);
  const double sigma2 = noise_variance(cir, frame, grid, k);
  REQUIRE(sigma2 > 0.0);

  const int n = 10000;
  double sum = 0.0, sum_sq = 0.0;
  for (int seed = 0; seed < n; ++seed) {
    const ObservationFrame obs = generate_observations(
        cir, frame, grid, static_cast<std::uint64_t>(seed) + 1000, true);
    const double z = obs.blocks[symbol][sample];
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  const double sigma = std::sqrt(sigma2);
  CHECK(close(mean, mu, 4.0 * sigma / std::sqrt(static_cast<double>(n))));
  CHECK(close(var, sigma2, 4.0 * sigma2 * std::sqrt(2.0 / (n - 1.0))));
}

TEST_CASE("block means agree with the full state-space simulation") {
  // Horizon covers the whole frame, so the comparison is exact up to
  // floating-point noise rather than truncation.
  const CirTable cir = small_cir(12e-6, 10000);
  const SamplingGrid grid = small_grid();
  const ChannelMatrix cm = build_transition(small_params(), 12e-6);

  SymbolFrame frame;
  frame.pilot = {1, 1};
  frame.data = random_bits(18, 21);
  frame.release_amplitude = 120.0;

  const ObservationFrame obs = generate_observations(cir, frame, grid, 0, false);

  std::vector<double> input(frame.length() * grid.steps_per_symbol, 0.0);
  for (const Impulse& imp : ook_input(frame, grid)) {
    input[static_cast<std::size_t>(imp.step)] = imp.amplitude;
  }
  StateVector sv;
  sv.x.assign(cm.dims, 0.0);
  std::size_t checked = 0;
  for (std::int64_t k = 1;
       k <= static_cast<std::int64_t>(frame.length()) * grid.steps_per_symbol;
       ++k) {
    sv = propagate(cm, sv, input[static_cast<std::size_t>(k - 1)]);
    if (k % grid.decimation != 0) continue;
    const std::int64_t m = (k - 1) / grid.steps_per_symbol;
    const std::int64_t q = (k - m * grid.steps_per_symbol) / grid.decimation;
    const double reference = sv.x[cm.dims - 1];
    CHECK(close(obs.blocks[static_cast<std::size_t>(m)][static_cast<std::size_t>(q - 1)],
                reference, 1e-10));
    ++checked;
  }
  CHECK(checked == frame.length() * static_cast<std::size_t>(grid.samples_per_symbol));
}
