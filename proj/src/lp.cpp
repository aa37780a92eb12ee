#include "jerkplan/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace jerkplan {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotFloor = 1e-11;
}  // namespace

double LinearProgram::violation(std::span<const double> x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < variables(); ++j)
    worst = std::max({worst, lower[j] - x[j], x[j] - upper[j]});
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double lhs = 0.0;
    for (const auto& [j, v] : rows[r]) lhs += v * x[j];
    worst = std::max(worst, lhs - rhs[r]);
  }
  return worst;
}

double LinearProgram::objective(std::span<const double> x) const {
  double total = 0.0;
  for (std::size_t j = 0; j < variables(); ++j) total += cost[j] * x[j];
  return total;
}

LinearProgram direction_lp(std::span<const double> nu, std::span<const double> coeff,
                           std::span<const double> phi, std::span<const unsigned char> active,
                           std::span<const double> lower, std::span<const double> upper) {
  const std::size_t n = nu.size();
  LinearProgram lp;
  lp.cost.resize(n);
  for (std::size_t i = 0; i < n; ++i) lp.cost[i] = -nu[i];
  lp.lower.assign(lower.begin(), lower.end());
  lp.upper.assign(upper.begin(), upper.end());
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!active.empty() && !active[i]) continue;
    lp.rows.push_back({{i - 1, coeff[i]}, {i, -1.0}, {i + 1, coeff[i]}});
    lp.rhs.push_back(phi[i]);
  }
  return lp;
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kPivotLimit: return "pivot-limit";
    case LpStatus::kBadStart: return "bad-start";
  }
  return "unknown";
}

LpResult solve_lp(const LinearProgram& lp, const LpOptions& options) {
  const std::size_t nx = lp.variables();
  const std::size_t m = lp.rows.size();
  if (lp.lower.size() != nx || lp.upper.size() != nx || lp.rhs.size() != m)
    throw std::invalid_argument("solve_lp: inconsistent dimensions");
  const std::size_t nv = nx + m;  // structurals then one slack per row

  LpResult out;
  for (std::size_t j = 0; j < nx; ++j)
    if (lp.lower[j] > 0.0 || lp.upper[j] < 0.0) {
      out.status = LpStatus::kBadStart;
      return out;
    }
  double rhs_scale = 1.0;
  for (double b : lp.rhs) rhs_scale = std::max(rhs_scale, std::abs(b));
  for (double b : lp.rhs)
    if (b < -1e-12 * rhs_scale) {
      out.status = LpStatus::kBadStart;
      return out;
    }

  // Column-wise copy of the structural part.
  std::vector<std::vector<std::pair<std::size_t, double>>> cols(nx);
  for (std::size_t r = 0; r < m; ++r)
    for (const auto& [j, v] : lp.rows[r]) cols[j].push_back({r, v});

  std::vector<double> lo(nv, 0.0), hi(nv, kInf), cost(nv, 0.0), value(nv, 0.0);
  for (std::size_t j = 0; j < nx; ++j) {
    lo[j] = lp.lower[j];
    hi[j] = lp.upper[j];
    cost[j] = lp.cost[j];
  }
  std::vector<std::size_t> basis(m);
  std::vector<long> position(nv, -1);
  for (std::size_t r = 0; r < m; ++r) {
    basis[r] = nx + r;
    position[nx + r] = static_cast<long>(r);
    value[nx + r] = std::max(lp.rhs[r], 0.0);
  }
  Eigen::MatrixXd binv = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));

  double cost_scale = 0.0;
  for (double c : cost) cost_scale = std::max(cost_scale, std::abs(c));
  const double dual_tol = 1e-12 * std::max(1.0, cost_scale);

  const auto column_dot = [&](std::size_t j, const Eigen::VectorXd& v) {
    if (j >= nx) return v[static_cast<Eigen::Index>(j - nx)];
    double s = 0.0;
    for (const auto& [r, a] : cols[j]) s += a * v[static_cast<Eigen::Index>(r)];
    return s;
  };
  const auto refactor = [&]() {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t r = 0; r < m; ++r) {
      const std::size_t j = basis[r];
      if (j >= nx) B(static_cast<Eigen::Index>(j - nx), static_cast<Eigen::Index>(r)) = 1.0;
      else
        for (const auto& [row, a] : cols[j]) B(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(r)) = a;
    }
    binv = B.partialPivLu().inverse();
    Eigen::VectorXd resid(static_cast<Eigen::Index>(m));
    for (std::size_t r = 0; r < m; ++r) resid[static_cast<Eigen::Index>(r)] = lp.rhs[r];
    for (std::size_t j = 0; j < nv; ++j) {
      if (position[j] >= 0 || value[j] == 0.0) continue;
      if (j >= nx) resid[static_cast<Eigen::Index>(j - nx)] -= value[j];
      else
        for (const auto& [row, a] : cols[j]) resid[static_cast<Eigen::Index>(row)] -= a * value[j];
    }
    const Eigen::VectorXd xb = binv * resid;
    for (std::size_t r = 0; r < m; ++r) value[basis[r]] = xb[static_cast<Eigen::Index>(r)];
  };

  std::size_t degenerate_run = 0;
  std::size_t since_refactor = 0;
  Eigen::VectorXd cb(static_cast<Eigen::Index>(m)), alpha(static_cast<Eigen::Index>(m));
  while (true) {
    for (std::size_t r = 0; r < m; ++r) cb[static_cast<Eigen::Index>(r)] = cost[basis[r]];
    const Eigen::VectorXd pi = binv.transpose() * cb;

    // Pricing.
    std::size_t enter = nv;
    int dir = 0;
    double best = 0.0;
    for (std::size_t j = 0; j < nv; ++j) {
      if (position[j] >= 0) continue;
      const double d = cost[j] - column_dot(j, pi);
      int want = 0;
      if (d < -dual_tol && value[j] < hi[j]) want = 1;
      else if (d > dual_tol && value[j] > lo[j]) want = -1;
      if (want == 0) continue;
      if (out.bland) {
        enter = j;
        dir = want;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        enter = j;
        dir = want;
      }
    }
    if (enter == nv) break;
    if (out.pivots + out.bound_flips >= options.max_pivots) {
      out.status = LpStatus::kPivotLimit;
      break;
    }

    alpha.setZero();
    if (enter >= nx) alpha = binv.col(static_cast<Eigen::Index>(enter - nx));
    else
      for (const auto& [r, a] : cols[enter]) alpha += a * binv.col(static_cast<Eigen::Index>(r));

    // Ratio test: basic r moves by -dir * t * alpha_r.
    double step = dir > 0 ? hi[enter] - value[enter] : value[enter] - lo[enter];
    long leave = -1;
    double leave_target = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      const double a = dir * alpha[static_cast<Eigen::Index>(r)];
      const std::size_t b = basis[r];
      double limit = kInf;
      double target = 0.0;
      if (a > kPivotFloor) {
        limit = (value[b] - lo[b]) / a;
        target = lo[b];
      } else if (a < -kPivotFloor && hi[b] < kInf) {
        limit = (hi[b] - value[b]) / -a;
        target = hi[b];
      } else {
        continue;
      }
      limit = std::max(limit, 0.0);
      bool take = limit < step;
      if (!take && limit == step && leave >= 0) {
        const std::size_t cur = basis[static_cast<std::size_t>(leave)];
        take = out.bland ? b < cur : std::abs(a) > std::abs(alpha[leave]);
      }
      if (take) {
        step = limit;
        leave = static_cast<long>(r);
        leave_target = target;
      }
    }
    if (!std::isfinite(step)) {
      out.status = LpStatus::kUnbounded;
      break;
    }

    value[enter] += dir * step;
    for (std::size_t r = 0; r < m; ++r) value[basis[r]] -= dir * step * alpha[static_cast<Eigen::Index>(r)];

    if (step <= options.degenerate_tolerance) {
      ++out.degenerate_pivots;
      if (++degenerate_run >= options.bland_after) out.bland = true;
    } else {
      degenerate_run = 0;
    }

    if (leave < 0) {
      ++out.bound_flips;
      value[enter] = dir > 0 ? hi[enter] : lo[enter];
      continue;
    }
    const auto lr = static_cast<std::size_t>(leave);
    const std::size_t leaving = basis[lr];
    value[leaving] = leave_target;
    position[leaving] = -1;
    basis[lr] = enter;
    position[enter] = leave;
    ++out.pivots;

    const double piv = alpha[leave];
    binv.row(leave) /= piv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == lr) continue;
      const double f = alpha[static_cast<Eigen::Index>(r)];
      if (f != 0.0) binv.row(static_cast<Eigen::Index>(r)) -= f * binv.row(leave);
    }
    if (++since_refactor >= options.refactor_every) {
      refactor();
      since_refactor = 0;
    }
  }

  out.x.assign(value.begin(), value.begin() + static_cast<long>(nx));
  for (std::size_t j = 0; j < nx; ++j) out.x[j] = std::clamp(out.x[j], lo[j], hi[j]);
  out.objective = lp.objective(out.x);
  return out;
}

}  // namespace jerkplan
