#include "jerkplan/accnar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jerkplan/acc.hpp"
#include "jerkplan/objective.hpp"
#include "jerkplan/stationarity.hpp"

namespace jerkplan {

namespace {

double feasibility_slack(const LinearizedModel& model) {
  double scale = 1.0;
  for (std::size_t i = 0; i < model.n; ++i) scale = std::max(scale, model.w[i] + model.uB[i]);
  return 1e-9 * scale;
}

}  // namespace

std::vector<double> shifted_point(const LinearizedModel& model, std::span<const double> delta) {
  std::vector<double> p(model.n);
  for (std::size_t i = 0; i < model.n; ++i) p[i] = std::max(model.w[i] + delta[i], 0.0);
  return p;
}

AccNarResult solve_accnar(std::span<const double> y, const LinearizedModel& model,
                          const AccNarOptions& options, NarStats* stats) {
  const std::size_t n = model.n;
  if (y.size() != n) throw std::invalid_argument("solve_accnar: y has wrong length");
  AccNarResult out;
  NarOptions nar_options;
  nar_options.skip = options.skip;
  nar_options.floor = *std::min_element(y.begin(), y.end()) >= 0.0 ? 0.0 : kNoFloor;

  std::vector<double> x(y.begin(), y.end());
  std::vector<double> prev;
  while (true) {
    solve_acc_inplace(x, model.bA, model.bD);
    prev = x;
    solve_nar_inplace(x, model.nar, model.bN, model.active, nar_options, stats);
    ++out.rounds;
    double gap = 0.0;
    for (std::size_t i = 0; i < n; ++i) gap = std::max(gap, prev[i] - x[i]);
    if (gap <= options.epsilon || out.rounds >= options.max_rounds) break;
  }

  const double slack = feasibility_slack(model);
  for (std::size_t i = 0; i < n && out.feasible; ++i)
    if (x[i] < model.lB[i] - slack) out.feasible = false;
  for (std::size_t i = 1; i + 1 < n && out.feasible; ++i) {
    if (!model.active[i]) continue;
    const double lhs = x[i] - model.nar[i] * (x[i - 1] + x[i + 1]);
    if (lhs > model.bN[i] + slack) out.feasible = false;
  }
  out.delta = std::move(x);
  out.objective = out.feasible ? travel_time(shifted_point(model, out.delta), model.h)
                               : ExtendedReal::infinity();
  return out;
}

DualCertificate extract_multipliers(std::span<const double> delta, std::span<const double> y,
                                    const LinearizedModel& model) {
  const std::size_t n = model.n;
  if (delta.size() != n || y.size() != n) throw std::invalid_argument("extract_multipliers: size mismatch");
  DualCertificate cert;
  cert.nu.assign(n, 0.0);
  cert.lambda_acc.assign(n - 1, 0.0);
  cert.lambda_dec.assign(n - 1, 0.0);
  cert.lambda_nar.assign(n, 0.0);
  if (n < 3) return cert;

  const auto is_active = [](double slack, double rhs) { return slack <= kActiveTolerance * (1.0 + std::abs(rhs)); };
  std::vector<char> bound_active(n, 0);
  for (std::size_t i = 1; i + 1 < n; ++i) bound_active[i] = is_active(y[i] - delta[i], y[i]);

  const std::vector<double> p = shifted_point(model, delta);
  bool interior_positive = true;
  for (std::size_t i = 1; i + 1 < n; ++i) interior_positive = interior_positive && p[i] > 0.0;
  if (!interior_positive) {
    // The derivative of f is unbounded at a zero speed, so raising those
    // bounds outranks every other coordinate.
    for (std::size_t i = 1; i + 1 < n; ++i)
      if (bound_active[i]) cert.nu[i] = p[i] > 0.0 ? 1.0 : kZeroSpeedWeight;
    cert.fallback = true;
    return cert;
  }
  const std::vector<double> grad = travel_time_gradient(p, model.h);

  enum Kind { kBoundRow, kAccRow, kDecRow, kNarRow };
  struct Column {
    Kind kind;
    std::size_t index;
  };
  std::vector<Column> columns;
  std::vector<Triplet> entries;
  const auto put = [&](std::size_t var, double value) {
    if (var >= 1 && var + 1 < n && value != 0.0) entries.push_back({var - 1, columns.size(), value});
  };
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (bound_active[i]) {
      put(i, 1.0);
      columns.push_back({kBoundRow, i});
    }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double diff = delta[i + 1] - delta[i];
    if (is_active(model.bA[i] - diff, model.bA[i])) {
      put(i + 1, 1.0);
      put(i, -1.0);
      columns.push_back({kAccRow, i});
    }
    if (is_active(model.bD[i] + diff, model.bD[i])) {
      put(i, 1.0);
      put(i + 1, -1.0);
      columns.push_back({kDecRow, i});
    }
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!model.active[i]) continue;
    const double c = model.nar[i];
    const double lhs = delta[i] - c * (delta[i - 1] + delta[i + 1]);
    if (!is_active(model.bN[i] - lhs, model.bN[i])) continue;
    put(i - 1, -c);
    put(i, 1.0);
    put(i + 1, -c);
    columns.push_back({kNarRow, i});
  }

  std::vector<double> rhs(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    rhs[i - 1] = -grad[i];
    cert.gradient_norm = std::max(cert.gradient_norm, std::abs(grad[i]));
  }
  const NnlsResult sol = block_nnls(n - 2, columns.size(), entries, rhs);
  cert.residual = sol.residual_inf;
  if (sol.residual_inf > kDualTolerance * cert.gradient_norm) {
    cert.fallback = true;
    for (std::size_t i = 1; i + 1 < n; ++i) cert.nu[i] = bound_active[i] ? std::max(0.0, -grad[i]) : 0.0;
    return cert;
  }
  for (std::size_t k = 0; k < columns.size(); ++k) {
    const double v = sol.x[k];
    switch (columns[k].kind) {
      case kBoundRow: cert.nu[columns[k].index] = v; break;
      case kAccRow: cert.lambda_acc[columns[k].index] = v; break;
      case kDecRow: cert.lambda_dec[columns[k].index] = v; break;
      case kNarRow: cert.lambda_nar[columns[k].index] = v; break;
    }
  }
  return cert;
}

}  // namespace jerkplan
