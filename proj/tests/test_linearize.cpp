#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "jerkplan/linearize.hpp"
#include "support.hpp"

using namespace jerkplan;

TEST_CASE("eta on a small profile") {
  const Instance inst = Instance::from_bounds(3.0, {0.0, 2.0, 2.0, 0.0}, 10.0, 10.0);
  const LinearizedModel m = linearize(std::vector<double>{0.0, 1.0, 1.0, 0.0}, inst, LinearizationMode::kEta);
  CHECK(m.eta[1] == doctest::Approx(0.25));
  CHECK(m.eta[2] == doctest::Approx(0.25));
  CHECK(m.masked_rows() == 0);
  CHECK(m.par[1] == m.eta[1]);
}

TEST_CASE("rows with zero neighbours are masked") {
  const Instance inst = Instance::from_bounds(4.0, {0.0, 2.0, 2.0, 2.0, 0.0}, 10.0, 10.0);
  const LinearizedModel m = linearize(std::vector<double>{0.0, 0.0, 1.0, 0.0, 0.0}, inst);
  CHECK(m.active[1] == 1);
  CHECK(m.active[2] == 0);
  CHECK(m.active[3] == 1);
  CHECK(m.masked_rows() == 1);
}

TEST_CASE("eta, theta and beta tend to 1/2 as h shrinks") {
  for (std::size_t n : {101u, 1001u, 10001u}) {
    std::vector<double> u(n, 0.0), w(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double s = static_cast<double>(i) / static_cast<double>(n - 1);
      w[i] = 10.0 * std::sin(3.141592653589793 * s) * std::sin(3.141592653589793 * s);
      u[i] = 20.0;
    }
    const Instance inst = Instance::from_bounds(100.0, u, 1e6, 1.0);
    const LinearizedModel m = linearize(w, inst);
    const std::size_t mid = n / 2;
    const double gap = std::abs(m.eta[mid] - 0.5);
    CHECK(gap < 5.0 / static_cast<double>(n * n) + 1e-12);
    CHECK(m.theta[mid] - 0.5 < 1e3 / static_cast<double>(n * n));
    CHECK(0.5 - m.beta[mid] < 1e3 / static_cast<double>(n * n));
  }
}

TEST_CASE("right-hand sides are nonnegative and the ordering holds at random feasible points") {
  SplitMix64 rng(2024);
  for (int t = 0; t < 500; ++t) {
    const auto fp = support::random_feasible_point(rng);
    for (auto mode : {LinearizationMode::kThetaBeta, LinearizationMode::kEta}) {
      const LinearizedModel m = linearize(fp.w, fp.inst, mode);
      CHECK(rhs_nonnegative(m, 1e-12));
      CHECK(m.min_raw_rhs >= -1e-12 * std::max(1.0, fp.inst.max_bound()));
      for (std::size_t i = 1; i + 1 < m.n; ++i) {
        if (!m.active[i]) continue;
        CHECK(m.beta[i] <= m.eta[i] + 1e-15);
        CHECK(m.eta[i] <= m.theta[i] + 1e-15);
      }
    }
  }
}

TEST_CASE("delta = 0 satisfies every model row") {
  SplitMix64 rng(99);
  for (int t = 0; t < 200; ++t) {
    const auto fp = support::random_feasible_point(rng);
    const LinearizedModel m = linearize(fp.w, fp.inst);
    for (std::size_t i = 0; i < m.n; ++i) CHECK(m.lB[i] <= 0.0);
    for (std::size_t i = 0; i < m.n; ++i) CHECK(m.uB[i] >= 0.0);
    for (std::size_t i = 1; i + 1 < m.n; ++i)
      if (m.active[i]) {
        CHECK(m.bP[i] >= 0.0);
        CHECK(m.bN[i] >= 0.0);
      }
  }
}

TEST_CASE("infeasible points are rejected with the violated family") {
  const Instance inst = Instance::from_bounds(3.0, {0.0, 100.0, 100.0, 0.0}, 1.0, 1e6);
  try {
    linearize(std::vector<double>{0.0, 50.0, 50.0, 0.0}, inst);
    FAIL("expected domain_error");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("acceleration") != std::string::npos);
  }
  CHECK_THROWS_AS(linearize(std::vector<double>{0.0, 200.0, 1.0, 0.0},
                            Instance::from_bounds(3.0, {0.0, 100.0, 100.0, 0.0}, 1e6, 1e6)),
                  std::domain_error);
  CHECK_THROWS_AS(linearize(std::vector<double>{0.0, 1.0}, inst), std::invalid_argument);
}
