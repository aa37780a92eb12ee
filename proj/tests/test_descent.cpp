#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "jerkplan/descent.hpp"
#include "jerkplan/lp.hpp"
#include "jerkplan/objective.hpp"
#include "jerkplan/sca.hpp"
#include "support.hpp"

using namespace jerkplan;

namespace {

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("F at y = 0 and at the box corner") {
  SplitMix64 rng(6);
  const auto fp = support::random_feasible_point(rng);
  const LinearizedModel m = linearize(fp.w, fp.inst);
  const FEvaluation f0 = eval_F(std::vector<double>(m.n, 0.0), m);
  CHECK(inf_norm(f0.delta) == 0.0);
  CHECK(f0.value == travel_time(fp.w, fp.inst.h));

  const Instance loose = Instance::from_bounds(4.0, {0.0, 9.0, 9.0, 9.0, 0.0}, 1e6, 1e6);
  const std::vector<double> w{0.0, 1.0, 2.0, 1.0, 0.0};
  const LinearizedModel ml = linearize(w, loose);
  const FEvaluation fu = eval_F(ml.uB, ml);
  for (std::size_t i = 0; i < 5; ++i) CHECK(fu.delta[i] == doctest::Approx(ml.uB[i]));
  CHECK(fu.value.value() == doctest::Approx(travel_time(loose.u, loose.h).value()));
}

TEST_CASE("F is convex along random segments") {
  SplitMix64 rng(41);
  AccNarOptions opts;
  opts.epsilon = 1e-13;
  int finite_pairs = 0;
  for (int t = 0; t < 100; ++t) {
    const auto fp = support::random_feasible_point(rng, 5, 30);
    const LinearizedModel m = linearize(fp.w, fp.inst);
    const auto y1 = support::random_y(rng, m);
    const auto y2 = support::random_y(rng, m);
    std::vector<double> mid(m.n);
    for (std::size_t i = 0; i < m.n; ++i) mid[i] = 0.5 * (y1[i] + y2[i]);
    const ExtendedReal a = eval_F(y1, m, opts, false).value;
    const ExtendedReal b = eval_F(y2, m, opts, false).value;
    const ExtendedReal c = eval_F(mid, m, opts, false).value;
    if (!a.is_finite() || !b.is_finite()) continue;
    ++finite_pairs;
    REQUIRE(c.is_finite());
    CHECK(c.value() <= 0.5 * (a.value() + b.value()) + 1e-10 * std::abs(a.value()));
  }
  CHECK(finite_pairs > 50);
}

TEST_CASE("heuristic returns the box corner when no PAR row is violated") {
  const std::size_t n = 6;
  std::vector<double> nu{0, 1, 1, 1, 1, 0}, coeff(n, 0.5), phi(n, 10.0), lower(n, -1.0), upper(n, 1.0);
  std::vector<unsigned char> active(n, 1);
  lower[0] = lower[n - 1] = upper[0] = upper[n - 1] = 0.0;
  const HeuristicResult h = heuristic_direction({nu, coeff, phi, active, lower, upper});
  REQUIRE(h.success);
  CHECK(h.d == upper);
  CHECK(h.repairs == 0);

  std::vector<double> zero(n, 0.0);
  CHECK_FALSE(heuristic_direction({zero, coeff, phi, active, lower, upper}).success);
}

TEST_CASE("heuristic repair of a single critical point is close to the LP optimum") {
  const std::size_t n = 10;
  std::vector<double> nu(n, 1.0), coeff(n, 0.55), phi(n, 1.0), lower(n, -2.0), upper(n, 2.0);
  std::vector<unsigned char> active(n, 1);
  nu[0] = nu[n - 1] = 0.0;
  lower[0] = lower[n - 1] = upper[0] = upper[n - 1] = 0.0;
  // Only row 5 is critical at the corner: its neighbours are high, it is low.
  upper[5] = 0.0;
  phi[4] = phi[6] = 10.0;
  const DirectionProblem prob{nu, coeff, phi, active, lower, upper};
  CHECK(par_violation(prob, upper) > 0.0);
  const HeuristicResult h = heuristic_direction(prob);
  REQUIRE(h.success);
  CHECK(par_violation(prob, h.d) <= 1e-12);
  const LpResult lp = solve_lp(direction_lp(nu, coeff, phi, active, lower, upper));
  REQUIRE(lp.status == LpStatus::kOptimal);
  const double heur = -dot(nu, h.d);
  CHECK(heur < 0.0);
  CHECK(std::abs(heur - lp.objective) <= 0.05 * std::abs(lp.objective));
}

TEST_CASE("trust-region defaults") {
  const TrustRegionConfig cfg;
  CHECK(cfg.rho == 4.0);
  CHECK(cfg.tau == 0.25);
  CHECK(cfg.eps1 == 1e-6);
}

TEST_CASE("update at a converged point is negligible") {
  const Instance inst = gen_experiment1(12, 40);
  const SolveReport sol = solve(inst);
  REQUIRE(sol.certified());
  const LinearizedModel m = linearize(sol.w, inst);
  const UpdateResult upd = compute_update(m);
  CHECK(inf_norm(upd.delta) <= 1e-6);
}

TEST_CASE("accepted bounds satisfy the PAR rows") {
  SplitMix64 rng(15);
  for (int t = 0; t < 30; ++t) {
    const auto fp = support::random_feasible_point(rng, 8, 40);
    const LinearizedModel m = linearize(fp.w, fp.inst);
    const UpdateResult upd = compute_update(m);
    CHECK(upd.stats.max_par_violation <= 1e-9);
    CHECK(upd.objective <= travel_time(fp.w, fp.inst.h));
    for (std::size_t i = 0; i < m.n; ++i) {
      CHECK(upd.delta[i] >= m.lB[i]);
      CHECK(upd.delta[i] <= m.uB[i]);
    }
  }
}

TEST_CASE("restricted model caps the neighbours of the listed rows") {
  const Instance inst = Instance::from_bounds(4.0, {0.0, 50.0, 50.0, 50.0, 0.0}, 1e6, 1e6);
  const LinearizedModel m = linearize(std::vector<double>{0.0, 1.0, 2.0, 3.0, 0.0}, inst);
  const std::vector<std::size_t> rows{2};
  const LinearizedModel r = restricted_model(m, rows);
  CHECK(r.uB[1] == doctest::Approx(1.0 + 2.0));
  CHECK(r.uB[3] == doctest::Approx(3.0 + 2.0));
  CHECK(r.uB[2] == m.uB[2]);

  std::vector<double> delta{0.0, 5.0, 0.0, 5.0, 0.0};
  const auto bad = restriction_violations(m, delta);
  CHECK(std::find(bad.begin(), bad.end(), 2) != bad.end());
}

TEST_CASE("a jerk-infeasible step triggers the restricted re-solve") {
  // A point where the unrestricted step more than doubles some neighbour
  // sums and breaks a jerk row.
  const std::vector<double> w{0, 0, 8.3944796153644319, 9.1831876347378412, 0, 12.609849298205924,
                              13.783364311730862, 14.825291664345464, 15.717731464025521,
                              16.450510320755011, 15.177438035509237, 14.513163107297984, 0};
  const Instance inst = Instance::from_bounds(
      141.87563360880159,
      {0, 35.085831364418979, 42.377334054502924, 27.527715222436925, 0, 39.932502342349153,
       38.70659660038001, 58.707549726603034, 21.495213042292907, 26.657699899978937, 47.858306934338074,
       59.488953650569819, 0},
      2.3256581575998894, 0.25732293882630675);
  const std::size_t n = inst.n;
  const LinearizedModel m = linearize(w, inst);
  TrustRegionConfig loose;
  loose.enforce_restriction = false;
  const UpdateResult free_step = compute_update(m, loose);
  CHECK_FALSE(free_step.stats.assumption_held);
  std::vector<double> raw(n);
  for (std::size_t i = 0; i < n; ++i) raw[i] = w[i] + free_step.delta[i];
  CHECK_FALSE(check_feasibility(raw, inst, 1e-8).feasible);

  const UpdateResult upd = compute_update(m);
  CHECK(upd.stats.restricted);
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) next[i] = w[i] + upd.delta[i];
  CHECK(check_feasibility(next, inst, 1e-8).feasible);

  // The re-solve gets its own iteration budget.
  TrustRegionConfig short_budget;
  short_budget.max_iterations = free_step.stats.iterations;
  const UpdateResult capped = compute_update(m, short_budget);
  CHECK(capped.stats.restricted);
  CHECK(inf_norm(capped.delta) > 0.0);
}
