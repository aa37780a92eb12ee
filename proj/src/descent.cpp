#include "jerkplan/descent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "jerkplan/objective.hpp"

namespace jerkplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double violation_at(const DirectionProblem& P, std::span<const double> d, std::size_t p) {
  return P.coeff[p] * (d[p - 1] + d[p + 1]) - d[p] - P.phi[p];
}

bool row_on(const DirectionProblem& P, std::size_t i) { return P.active.empty() || P.active[i] != 0; }

// One side of the propagation. Moving outwards from `near` (already lowered to
// z_near) past `far_in` (the unchanged neighbour on the inner side), each row
// whose outer neighbour at its current value would leave it violated is made
// active by lowering that neighbour. Returns the added loss sum nu_j (d_j - z_j)
// or +inf when a lowered entry leaves the box.
double propagate_side(const DirectionProblem& P, std::span<const double> d, std::size_t near,
                      double z_near, double z_inner, int step, double tol,
                      std::vector<std::pair<std::size_t, double>>& changed) {
  const auto n = static_cast<long>(d.size());
  double loss = 0.0;
  long r = static_cast<long>(near);
  double zr = z_near;
  double zin = z_inner;
  while (true) {
    const long j = r + step;  // entry possibly lowered to keep row r satisfied
    if (r <= 0 || r >= n - 1 || j < 0 || j >= n) break;
    const auto ru = static_cast<std::size_t>(r);
    const auto ju = static_cast<std::size_t>(j);
    if (!row_on(P, ru)) break;
    const double c = P.coeff[ru];
    if (c * (d[ju] + zin) - zr <= P.phi[ru] + tol) break;
    if (c <= 0.0) return kInf;
    const double zj = (P.phi[ru] + zr) / c - zin;
    if (zj < P.lower[ju] - tol) return kInf;
    loss += P.nu[ju] * (d[ju] - zj);
    changed.emplace_back(ju, zj);
    zin = zr;
    zr = zj;
    r = j;
  }
  return loss;
}

struct Propagation {
  double loss = kInf;
  std::vector<std::pair<std::size_t, double>> changed;
};

Propagation propagate(const DirectionProblem& P, std::span<const double> d, std::size_t p,
                      double violation, double alpha, double tol) {
  Propagation out;
  const double c = P.coeff[p];
  if (!(c > 0.0)) return out;
  const double cut = violation / c;
  const double zl = d[p - 1] - alpha * cut;
  const double zr = d[p + 1] - (1.0 - alpha) * cut;
  if (zl < P.lower[p - 1] - tol || zr < P.lower[p + 1] - tol) return out;
  double loss = P.nu[p - 1] * (d[p - 1] - zl) + P.nu[p + 1] * (d[p + 1] - zr);
  out.changed.emplace_back(p - 1, zl);
  out.changed.emplace_back(p + 1, zr);
  loss += propagate_side(P, d, p - 1, zl, d[p], -1, tol, out.changed);
  if (std::isfinite(loss)) loss += propagate_side(P, d, p + 1, zr, d[p], +1, tol, out.changed);
  out.loss = loss;
  return out;
}

}  // namespace

FEvaluation eval_F(std::span<const double> y, const LinearizedModel& model,
                   const AccNarOptions& options, bool with_multipliers) {
  AccNarResult sol = solve_accnar(y, model, options);
  FEvaluation ev;
  ev.value = sol.objective;
  ev.feasible = sol.feasible;
  ev.rounds = sol.rounds;
  ev.delta = std::move(sol.delta);
  if (with_multipliers && ev.value.is_finite()) ev.dual = extract_multipliers(ev.delta, y, model);
  return ev;
}

double par_violation(const DirectionProblem& P, std::span<const double> d) {
  double worst = 0.0;
  for (std::size_t p = 1; p + 1 < d.size(); ++p)
    if (row_on(P, p)) worst = std::max(worst, violation_at(P, d, p));
  return worst;
}

HeuristicResult heuristic_direction(const DirectionProblem& P, std::size_t max_repairs) {
  const std::size_t n = P.upper.size();
  HeuristicResult out;
  out.d.assign(P.upper.begin(), P.upper.end());
  if (max_repairs == 0) max_repairs = 4 * n + 16;
  // Violations left inside tol accumulate over accepted steps, so the
  // tolerance follows the trust-region radius; the phi term covers rounding.
  double radius = 0.0;
  double phi_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    radius = std::max({radius, std::abs(P.upper[i]), std::abs(P.lower[i])});
    phi_max = std::max(phi_max, std::abs(P.phi[i]));
  }
  const double tol = 1e-12 * radius + 1e-15 * phi_max;

  std::vector<char> dropped(n, 0);
  while (true) {
    std::size_t p = n;
    double worst = tol;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (!row_on(P, i) || dropped[i]) continue;
      const double v = violation_at(P, out.d, i);
      if (v > worst) {
        worst = v;
        p = i;
      }
    }
    if (p == n) break;
    if (out.repairs >= max_repairs) {
      out.failure = "repair budget exhausted";
      return out;
    }

    // Coarse scan, then ternary search around the best finite sample.
    double best_alpha = -1.0;
    double best_loss = kInf;
    for (int k = 0; k < kCoarseScanPoints; ++k) {
      const double a = static_cast<double>(k) / (kCoarseScanPoints - 1);
      const double loss = propagate(P, out.d, p, worst, a, tol).loss;
      if (loss < best_loss) {
        best_loss = loss;
        best_alpha = a;
      }
    }
    if (best_alpha < 0.0) {
      dropped[p] = 1;
      continue;
    }
    const double width = 1.0 / (kCoarseScanPoints - 1);
    double lo = std::max(0.0, best_alpha - width);
    double hi = std::min(1.0, best_alpha + width);
    for (int it = 0; it < kTernaryIterations; ++it) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      if (propagate(P, out.d, p, worst, m1, tol).loss > propagate(P, out.d, p, worst, m2, tol).loss) lo = m1;
      else hi = m2;
    }
    const double mid = 0.5 * (lo + hi);
    Propagation chosen = propagate(P, out.d, p, worst, mid, tol);
    if (!(chosen.loss <= best_loss)) chosen = propagate(P, out.d, p, worst, best_alpha, tol);
    for (const auto& [j, v] : chosen.changed) out.d[j] = v;
    ++out.repairs;
    std::fill(dropped.begin(), dropped.end(), 0);
  }

  for (std::size_t i = 1; i + 1 < n; ++i)
    if (row_on(P, i) && violation_at(P, out.d, i) > tol) {
      out.failure = "critical points remain";
      return out;
    }
  double gain = 0.0;
  for (std::size_t i = 0; i < n; ++i) gain += P.nu[i] * out.d[i];
  if (!(gain > 0.0)) {
    out.failure = "not a descent direction";
    return out;
  }
  out.success = true;
  return out;
}

std::vector<std::size_t> restriction_violations(const LinearizedModel& model,
                                                std::span<const double> delta, double tol) {
  std::vector<std::size_t> rows;
  for (std::size_t j = 1; j + 1 < model.n; ++j) {
    if (!model.active[j]) continue;
    const double x = model.w[j - 1] + model.w[j + 1];
    if (delta[j - 1] + delta[j + 1] > 2.0 * x + tol * (1.0 + x)) rows.push_back(j);
  }
  return rows;
}

LinearizedModel restricted_model(const LinearizedModel& model, std::span<const std::size_t> rows) {
  LinearizedModel out = model;
  for (std::size_t j : rows) {
    const double half = 0.5 * (model.w[j - 1] + model.w[j + 1]);
    for (std::size_t k : {j - 1, j + 1}) out.uB[k] = std::min(out.uB[k], model.w[k] + half);
  }
  return out;
}

namespace {

struct TrustRegionOutcome {
  std::vector<double> y;
  FEvaluation at_y;
};

TrustRegionOutcome trust_region(const LinearizedModel& model, const TrustRegionConfig& cfg,
                                UpdateStats& st) {
  const std::size_t n = model.n;
  TrustRegionOutcome out;
  out.y.assign(n, 0.0);
  out.at_y = eval_F(out.y, model, cfg.accnar);
  ++st.f_evaluations;

  std::vector<double> nu(n), phi(n, 0.0), lower(n), upper(n), trial(n);
  double sigma = cfg.sigma0;
  for (std::size_t used = 0; sigma >= cfg.eps1; ++used) {
    if (used >= cfg.max_iterations) {
      st.budget_exhausted = true;
      break;
    }
    ++st.iterations;
    if (out.at_y.value.is_finite()) {
      nu = out.at_y.dual.nu;
    } else {
      std::fill(nu.begin(), nu.end(), 0.0);
      for (std::size_t i = 1; i + 1 < n; ++i) nu[i] = 1.0;
    }
    for (std::size_t i = 1; i + 1 < n; ++i)
      if (model.active[i])
        phi[i] = std::max(0.0, model.bP[i] - model.par[i] * (out.y[i - 1] + out.y[i + 1]) + out.y[i]);
    for (std::size_t i = 0; i < n; ++i) {
      lower[i] = std::min(0.0, std::max(model.lB[i] - out.y[i], -sigma));
      upper[i] = std::max(0.0, std::min(model.uB[i] - out.y[i], sigma));
      // Lowering a bound with no multiplier below the current solution buys
      // nothing to first order and only moves y away from the step.
      if (out.at_y.value.is_finite() && nu[i] <= 0.0)
        lower[i] = std::max(lower[i], std::min(0.0, out.at_y.delta[i] - out.y[i]));
    }
    const DirectionProblem problem{nu, model.par, phi, model.active, lower, upper};

    std::vector<double> d;
    bool exact = false;
    if (cfg.method == DirectionMethod::kHeuristic) {
      ++st.heuristic_calls;
      HeuristicResult h = heuristic_direction(problem);
      if (h.success) d = std::move(h.d);
      else ++st.heuristic_failures;
    }
    if (d.empty()) {
      ++st.lp_calls;
      LpResult lp = solve_lp(direction_lp(nu, model.par, phi, model.active, lower, upper), cfg.lp);
      exact = lp.status == LpStatus::kOptimal;
      d = std::move(lp.x);
      if (d.size() != n) d.assign(n, 0.0);
    }

    double gain = 0.0;
    for (std::size_t i = 0; i < n; ++i) gain += nu[i] * d[i];
    if (!(gain > 0.0)) {
      // An exact optimum with no first-order gain rules out descent for
      // every smaller radius as well.
      if (exact) break;
      sigma *= cfg.tau;
      ++st.rejected;
      continue;
    }

    for (std::size_t i = 0; i < n; ++i) trial[i] = out.y[i] + d[i];
    FEvaluation cand = eval_F(trial, model, cfg.accnar, false);
    ++st.f_evaluations;
    bool better = cand.value < out.at_y.value;
    if (better && out.at_y.value.is_finite()) {
      const double f0 = out.at_y.value.value();
      better = cand.value.value() < f0 - 1e-14 * std::abs(f0);
    }
    if (better) {
      out.y = trial;
      cand.dual = extract_multipliers(cand.delta, out.y, model);
      if (cand.dual.fallback) ++st.dual_fallbacks;
      out.at_y = std::move(cand);
      st.max_par_violation = std::max(st.max_par_violation, par_violation(
          DirectionProblem{nu, model.par, model.bP, model.active, lower, upper}, out.y));
      ++st.accepted;
      sigma *= cfg.rho;
      if (cfg.inexact) break;
    } else {
      sigma *= cfg.tau;
      ++st.rejected;
    }
  }
  return out;
}

bool jerk_feasible(const LinearizedModel& model, std::span<const double> delta, double tol) {
  const std::vector<double> p = shifted_point(model, delta);
  for (std::size_t i = 1; i + 1 < model.n; ++i) {
    const double x = p[i - 1] + p[i + 1];
    const double D = p[i - 1] - 2.0 * p[i] + p[i + 1];
    if (std::abs(D) * std::sqrt(0.5 * x) > model.jerk_rhs + tol) return false;
  }
  return true;
}

std::vector<double> final_step(const LinearizedModel& model, const TrustRegionOutcome& tr,
                               const TrustRegionConfig& cfg) {
  if (!tr.at_y.value.is_finite()) return std::vector<double>(model.n, 0.0);
  AccNarOptions tight = cfg.accnar;
  tight.epsilon = std::min(cfg.accnar.epsilon, cfg.final_epsilon);
  AccNarResult sol = solve_accnar(tr.y, model, tight);
  if (!sol.feasible) return std::vector<double>(model.n, 0.0);
  for (std::size_t i = 0; i < model.n; ++i) sol.delta[i] = std::clamp(sol.delta[i], model.lB[i], model.uB[i]);
  return sol.delta;
}

}  // namespace

UpdateResult compute_update(const LinearizedModel& model, const TrustRegionConfig& config) {
  if (!(config.eps1 > 0.0) || !(config.tau > 0.0 && config.tau < 1.0) || !(config.rho > 1.0))
    throw std::invalid_argument("compute_update: need eps1 > 0 and 0 < tau < 1 < rho");
  UpdateResult res;
  TrustRegionOutcome tr = trust_region(model, config, res.stats);
  std::vector<double> delta = final_step(model, tr, config);

  std::vector<std::size_t> bad = restriction_violations(model, delta);
  res.stats.assumption_held = bad.empty();
  if (!bad.empty() && config.enforce_restriction && !jerk_feasible(model, delta, 1e-9)) {
    // Cap the neighbours of every offending row and solve again; repeat while
    // new offending rows appear.
    LinearizedModel capped = model;
    for (int round = 0; round < 8 && !bad.empty(); ++round) {
      capped = restricted_model(capped, bad);
      tr = trust_region(capped, config, res.stats);
      delta = final_step(capped, tr, config);
      bad = restriction_violations(model, delta);
    }
    res.stats.restricted = true;
    res.stats.assumption_held = bad.empty();
  }

  res.delta = std::move(delta);
  res.y = std::move(tr.y);
  res.objective = travel_time(shifted_point(model, res.delta), model.h);
  return res;
}

}  // namespace jerkplan
