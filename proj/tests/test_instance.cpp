#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "jerkplan/instance.hpp"
#include "jerkplan/instance_io.hpp"

using namespace jerkplan;

namespace {

PathSpec flat_path(std::size_t n, double k) {
  PathSpec p;
  p.length = 10.0;
  p.v_max = 15.0;
  p.normal_accel = 1.0;
  p.curvature.assign(n, k);
  return p;
}

// Number of maximal runs of equal interior values.
std::size_t plateau_count(const std::vector<double>& u) {
  std::size_t runs = 0;
  for (std::size_t i = 1; i + 1 < u.size(); ++i)
    if (i == 1 || u[i] != u[i - 1]) ++runs;
  return runs;
}

void check_generator_invariants(const Instance& inst, double cap) {
  CHECK(inst.u.front() == 0.0);
  CHECK(inst.u.back() == 0.0);
  for (double ui : inst.u) {
    CHECK(ui >= 0.0);
    CHECK(ui <= cap * (1.0 + 1e-15));
  }
}

}  // namespace

TEST_CASE("build_upper_bound uses min(v_max^2, A_N/|k|) with zero endpoints") {
  auto u = build_upper_bound(flat_path(5, 0.0));
  CHECK(u[0] == 0.0);
  CHECK(u[4] == 0.0);
  CHECK(u[2] == doctest::Approx(225.0));

  u = build_upper_bound(flat_path(5, 0.2));
  CHECK(u[2] == doctest::Approx(5.0));
  u = build_upper_bound(flat_path(5, -0.2));
  CHECK(u[2] == doctest::Approx(5.0));
}

TEST_CASE("build_upper_bound is monotone in |k|") {
  PathSpec p = flat_path(20, 0.0);
  PathSpec q = p;
  for (std::size_t i = 0; i < 20; ++i) {
    p.curvature[i] = 0.01 * static_cast<double>(i);
    q.curvature[i] = 0.02 * static_cast<double>(i);
  }
  const auto up = build_upper_bound(p);
  const auto uq = build_upper_bound(q);
  for (std::size_t i = 0; i < 20; ++i) CHECK(uq[i] <= up[i]);
}

TEST_CASE("PathSpec validation") {
  PathSpec p = flat_path(1, 0.0);
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = flat_path(4, 0.0);
  p.v_max = 0.0;
  CHECK_THROWS_AS(build_upper_bound(p), std::invalid_argument);
}

TEST_CASE("experiment 1 parameters, plateaus and determinism") {
  const Instance a = gen_experiment1(7, 100);
  const Instance b = gen_experiment1(7, 100);
  CHECK(a.u == b.u);
  CHECK(a.accel == 2.78);
  CHECK(a.jerk == 0.5);
  CHECK(a.length() == doctest::Approx(60.0));
  CHECK(plateau_count(a.u) == 7);
  check_generator_invariants(a, 100.0);
  CHECK(gen_experiment1(8, 100).u != a.u);
  CHECK(plateau_count(gen_experiment1(1, kMinExperiment1Size).u) == 7);
  CHECK_THROWS_AS(gen_experiment1(1, 8), std::invalid_argument);
}

TEST_CASE("experiment 2 parameters and continuity") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const GeneratedPath g = gen_experiment2(seed, 200);
    CHECK(g.instance.jerk == 0.025);
    CHECK(g.instance.accel == 0.25);
    CHECK(g.instance.length() == doctest::Approx(1000.0));
    check_generator_invariants(g.instance, 192.93);
    const double h = g.instance.h;
    for (std::size_t i = 0; i + 1 < g.path.size(); ++i)
      CHECK(std::abs(g.path.curvature[i + 1] - g.path.curvature[i]) <=
            g.max_curvature_slope * h * (1.0 + 1e-9) + 1e-15);
  }
  PathSpec straight = gen_experiment2(1, 50).path;
  std::fill(straight.curvature.begin(), straight.curvature.end(), 0.0);
  const auto u = build_upper_bound(straight);
  for (std::size_t i = 1; i + 1 < u.size(); ++i) CHECK(u[i] == doctest::Approx(192.93));
}

TEST_CASE("sine path") {
  const GeneratedPath g = gen_sine_path(100);
  CHECK(g.instance.accel == 1.39);
  CHECK(g.instance.jerk == 0.5);
  CHECK(g.path.curvature[0] == 0.0);
  check_generator_invariants(g.instance, 192.93);

  PathSpec peak = g.path;
  peak.curvature.assign(3, std::sin(5.0 * std::numbers::pi / 10.0) / 5.0);
  CHECK(build_upper_bound(peak)[1] == doctest::Approx(std::min(192.93, 24.5)));
  CHECK(gen_sine_path(100).instance.u == g.instance.u);
}

TEST_CASE("clothoid path has one interior minimum plateau at A_N/k") {
  const GeneratedPath g = gen_clothoid_path(100);
  CHECK(g.instance.accel == 1.5);
  CHECK(g.instance.jerk == 1.0);
  CHECK(g.path.v_max == 15.0);
  CHECK(g.instance.length() == doctest::Approx(90.0));
  check_generator_invariants(g.instance, 225.0);
  const auto& u = g.instance.u;
  double lo = 1e300;
  for (std::size_t i = 1; i + 1 < u.size(); ++i) lo = std::min(lo, u[i]);
  CHECK(lo == doctest::Approx(kClothoidPlateauBound));
  std::size_t runs = 0;
  for (std::size_t i = 1; i + 1 < u.size(); ++i)
    if (u[i] == lo && !(u[i - 1] == lo)) ++runs;
  CHECK(runs == 1);
  CHECK_THROWS_AS(gen_clothoid_path(9), std::invalid_argument);
}

TEST_CASE("config space bound") {
  ConfigSpaceLimits lim{50.0, 5.0, 1.0, 2.5, 0.5};
  CHECK(config_space_bound(0.0, 0.0, lim) == doctest::Approx(2500.0));

  ConfigSpaceLimits unit{100.0, 2.0, 1.0, 1.0, 0.5};
  CHECK(solve_chi(1.0, 0.0, unit) == doctest::Approx(1.0 / 36.0).epsilon(1e-12));

  for (double k : {0.01, 0.1, 1.0}) {
    for (double k2 : {0.0, 0.001, 0.05}) {
      const double chi = solve_chi(k, k2, lim);
      const double lhs = 3.0 * k * lim.accel * std::sqrt(chi) + lim.jerk + k2 * chi * std::sqrt(chi);
      CHECK(std::abs(lhs - lim.j_hat) <= 1e-10 * lim.j_hat);
      CHECK(config_space_bound(k, k2, lim) > 0.0);
    }
  }
  ConfigSpaceLimits bad = lim;
  bad.accel = 6.0;
  CHECK_THROWS_AS(config_space_bound(0.1, 0.0, bad), std::invalid_argument);
  bad = lim;
  bad.jerk = 1.0;
  CHECK_THROWS_AS(config_space_bound(0.1, 0.0, bad), std::invalid_argument);
}

TEST_CASE("instance JSON round trip and schema errors") {
  const Instance a = gen_experiment1(3, 30);
  const Instance b = instance_from_json(instance_to_json(a, "exp1"));
  CHECK(b.u == a.u);
  CHECK(b.h == a.h);
  CHECK(b.accel == a.accel);
  CHECK(b.jerk == a.jerk);

  const Instance c = instance_from_json(
      R"({"version": 1, "s_f": 10.0, "n": 4, "A": 1.0, "J": 1.0,
          "curvature": [0, 0.2, 0, 0], "v_max": 15.0, "A_N": 1.0})");
  CHECK(c.u[1] == doctest::Approx(5.0));
  CHECK(c.u[2] == doctest::Approx(225.0));

  CHECK_THROWS_AS(instance_from_json(R"({"version": 2, "s_f": 1, "n": 2, "A": 1, "J": 1, "u": [0, 0]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(instance_from_json(R"({"version": 1, "s_f": 1, "n": 3, "A": 1, "J": 1, "u": [0, 0]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(instance_from_json("not json"), std::invalid_argument);
}
