#include "jerkplan/linearize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace jerkplan {

std::size_t LinearizedModel::masked_rows() const {
  std::size_t count = 0;
  for (std::size_t i = 1; i + 1 < n; ++i) count += active[i] == 0;
  return count;
}

namespace {

double checked_rhs(double value, double slack, const char* family, std::size_t index,
                   double& min_raw) {
  min_raw = std::min(min_raw, value);
  if (value >= 0.0) return value;
  if (value >= -slack) return 0.0;
  throw std::domain_error(std::string("linearize: point violates ") + family + " constraint at index " +
                          std::to_string(index) + " (rhs " + std::to_string(value) + ")");
}

}  // namespace

LinearizedModel linearize(std::span<const double> w, const Instance& inst, LinearizationMode mode) {
  const std::size_t n = inst.n;
  if (w.size() != n) throw std::invalid_argument("linearize: w has wrong length");
  const double scale = std::max(1.0, inst.max_bound());
  const double slack = kRhsSlack * scale;
  const double mask_tol = kMaskTolerance * scale;
  const double h = inst.h;
  const double two_hA = 2.0 * h * inst.accel;
  const double C = 2.0 * std::sqrt(2.0) * h * h * inst.jerk;

  LinearizedModel m;
  m.mode = mode;
  m.n = n;
  m.h = h;
  m.two_hA = two_hA;
  m.jerk_rhs = 2.0 * h * h * inst.jerk;
  m.w.assign(w.begin(), w.end());
  m.lB.resize(n);
  m.uB.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] < -slack || w[i] > inst.u[i] + slack)
      throw std::domain_error("linearize: point violates bound constraint at index " + std::to_string(i));
    m.lB[i] = -w[i];
    m.uB[i] = std::max(inst.u[i] - w[i], 0.0);
    if (m.lB[i] > 0.0) m.lB[i] = 0.0;
  }
  m.min_raw_rhs = std::numeric_limits<double>::infinity();
  m.bA.resize(n - 1);
  m.bD.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    m.bA[i] = checked_rhs(two_hA - w[i + 1] + w[i], slack, "acceleration", i, m.min_raw_rhs);
    m.bD[i] = checked_rhs(two_hA - w[i] + w[i + 1], slack, "deceleration", i, m.min_raw_rhs);
  }

  m.eta.assign(n, 0.0);
  m.theta.assign(n, 0.0);
  m.beta.assign(n, 0.0);
  m.bP.assign(n, 0.0);
  m.bN.assign(n, 0.0);
  m.active.assign(n, 0);
  m.nar.assign(n, 0.0);
  m.par.assign(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double x = w[i - 1] + w[i + 1];
    if (x <= mask_tol) continue;
    m.active[i] = 1;
    const double D = w[i - 1] - 2.0 * w[i] + w[i + 1];
    const double rx = std::sqrt(x);
    const double tilt = 0.25 * C / (x * rx);
    m.eta[i] = (3.0 * x - 2.0 * w[i]) / (4.0 * x);
    m.theta[i] = 0.5 + tilt;
    m.beta[i] = 0.5 - tilt;
    m.bP[i] = checked_rhs(0.5 * C / rx - 0.5 * D, slack, "PAR jerk", i, m.min_raw_rhs);
    m.bN[i] = checked_rhs(0.5 * C / rx + 0.5 * D, slack, "NAR jerk", i, m.min_raw_rhs);
    if (mode == LinearizationMode::kThetaBeta) {
      m.nar[i] = std::max(m.beta[i], 0.0);
      m.par[i] = m.theta[i];
    } else {
      m.nar[i] = std::max(m.eta[i], 0.0);
      m.par[i] = m.eta[i];
    }
  }
  return m;
}

bool rhs_nonnegative(const LinearizedModel& model, double tol) {
  for (std::size_t i = 0; i + 1 < model.n; ++i)
    if (model.bA[i] < -tol || model.bD[i] < -tol) return false;
  for (std::size_t i = 1; i + 1 < model.n; ++i)
    if (model.active[i] && (model.bP[i] < -tol || model.bN[i] < -tol)) return false;
  return true;
}

}  // namespace jerkplan
