#include "jerkplan/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "jerkplan/stationarity.hpp"

namespace jerkplan {

ExtendedReal travel_time(std::span<const double> w, double h) {
  double total = 0.0;
  for (double v : w)
    if (v < 0.0 || std::isnan(v)) throw std::domain_error("travel_time: negative squared speed");
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const double denom = std::sqrt(w[i + 1]) + std::sqrt(w[i]);
    if (denom == 0.0) return ExtendedReal::infinity();
    total += 2.0 * h / denom;
  }
  return ExtendedReal(total);
}

std::vector<double> travel_time_gradient(std::span<const double> w, double h) {
  const std::size_t n = w.size();
  std::vector<double> g(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(w[i] > 0.0)) throw std::domain_error("travel_time_gradient: interior entry is not positive");
    const double r = std::sqrt(w[i]);
    const double left = std::sqrt(w[i - 1]) + r;
    const double right = std::sqrt(w[i + 1]) + r;
    g[i] = -h / (r * left * left) - h / (r * right * right);
  }
  return g;
}

const char* to_string(ConstraintFamily family) {
  switch (family) {
    case ConstraintFamily::kNone: return "none";
    case ConstraintFamily::kBound: return "bound";
    case ConstraintFamily::kAcceleration: return "acceleration";
    case ConstraintFamily::kJerk: return "jerk";
  }
  return "unknown";
}

double FeasibilityReport::max_violation() const { return std::max({bound, acceleration, jerk}); }

FeasibilityReport check_feasibility(std::span<const double> w, const Instance& inst, double tol) {
  const std::size_t n = inst.n;
  if (w.size() != n) throw std::invalid_argument("check_feasibility: size mismatch");
  const double two_hA = 2.0 * inst.h * inst.accel;
  const double jerk_rhs = 2.0 * inst.h * inst.h * inst.jerk;
  FeasibilityReport rep;
  double worst = 0.0;
  const auto note = [&](double v, double& slot, ConstraintFamily family, std::size_t i) {
    if (v > slot) slot = v;
    if (v > worst) {
      worst = v;
      rep.worst_family = family;
      rep.worst_index = i;
    }
  };
  for (std::size_t i = 0; i < n; ++i) note(std::max(-w[i], w[i] - inst.u[i]), rep.bound, ConstraintFamily::kBound, i);
  for (std::size_t i = 0; i + 1 < n; ++i)
    note(std::abs(w[i + 1] - w[i]) - two_hA, rep.acceleration, ConstraintFamily::kAcceleration, i);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double x = std::max(w[i - 1] + w[i + 1], 0.0);
    const double D = w[i - 1] - 2.0 * w[i] + w[i + 1];
    note(std::abs(D) * std::sqrt(0.5 * x) - jerk_rhs, rep.jerk, ConstraintFamily::kJerk, i);
  }
  rep.feasible = rep.max_violation() <= tol;
  return rep;
}

KktReport kkt_report(std::span<const double> w, const Instance& inst) {
  const std::size_t n = inst.n;
  if (w.size() != n) throw std::invalid_argument("kkt_residual: size mismatch");
  KktReport rep;
  if (n < 3) return rep;
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (!(w[i] > 0.0)) {
      rep.residual = std::numeric_limits<double>::infinity();
      return rep;
    }
  const std::vector<double> grad = travel_time_gradient(w, inst.h);
  const double two_hA = 2.0 * inst.h * inst.accel;
  const double jerk_rhs = 2.0 * inst.h * inst.h * inst.jerk;
  const auto is_active = [](double slack, double rhs) { return slack <= kActiveTolerance * (1.0 + std::abs(rhs)); };

  // Interior variable i maps to row i-1; each active constraint is a column
  // holding its gradient.
  std::vector<Triplet> entries;
  std::size_t col = 0;
  const auto put = [&](std::size_t var, double value) {
    if (var >= 1 && var + 1 < n && value != 0.0) entries.push_back({var - 1, col, value});
  };
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (is_active(inst.u[i] - w[i], inst.u[i])) {
      put(i, 1.0);
      ++col;
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double diff = w[i + 1] - w[i];
    if (is_active(two_hA - diff, two_hA)) {
      put(i + 1, 1.0);
      put(i, -1.0);
      ++col;
    }
    if (is_active(two_hA + diff, two_hA)) {
      put(i, 1.0);
      put(i + 1, -1.0);
      ++col;
    }
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double x = w[i - 1] + w[i + 1];
    const double r = std::sqrt(0.5 * x);
    if (!(r > 0.0)) continue;
    const double D = w[i - 1] - 2.0 * w[i] + w[i + 1];
    const double g = D * r;
    const double side = r + D / (4.0 * r);
    for (double sign : {1.0, -1.0}) {
      if (!is_active(jerk_rhs - sign * g, jerk_rhs)) continue;
      put(i - 1, sign * side);
      put(i, sign * -2.0 * r);
      put(i + 1, sign * side);
      ++col;
    }
  }
  rep.active_rows = col;

  std::vector<double> rhs(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    rhs[i - 1] = -grad[i];
    rep.gradient_norm = std::max(rep.gradient_norm, std::abs(grad[i]));
  }
  const NnlsResult sol = block_nnls(n - 2, col, entries, rhs);
  rep.residual = sol.residual_inf;
  return rep;
}

double kkt_residual(std::span<const double> w, const Instance& inst) { return kkt_report(w, inst).residual; }

}  // namespace jerkplan
