#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "jerkplan/extended_real.hpp"
#include "jerkplan/instance.hpp"

namespace jerkplan {

/// Travel time sum_i 2h / (sqrt(w_{i+1}) + sqrt(w_i)); +infinity as soon as
/// two neighbouring entries are both zero. Throws on negative entries.
ExtendedReal travel_time(std::span<const double> w, double h);

/// Analytic gradient of travel_time. Endpoint components are 0 (endpoints are
/// fixed); throws std::domain_error if an interior entry is not positive.
std::vector<double> travel_time_gradient(std::span<const double> w, double h);

enum class ConstraintFamily { kNone, kBound, kAcceleration, kJerk };

const char* to_string(ConstraintFamily family);

struct FeasibilityReport {
  double bound = 0.0;         ///< max(-w_i, w_i - u_i), clamped at 0
  double acceleration = 0.0;  ///< max |w_{i+1} - w_i| - 2hA, clamped at 0
  double jerk = 0.0;          ///< max |w_{i-1} - 2w_i + w_{i+1}| sqrt((w_{i-1}+w_{i+1})/2) - 2h^2 J
  ConstraintFamily worst_family = ConstraintFamily::kNone;
  std::size_t worst_index = 0;
  bool feasible = true;

  double max_violation() const;
};

FeasibilityReport check_feasibility(std::span<const double> w, const Instance& inst, double tol);

/// Slack below which a row counts as active: slack <= kActiveTolerance (1 + |rhs|).
inline constexpr double kActiveTolerance = 1e-7;

struct KktReport {
  double residual = 0.0;        ///< ||grad f + C_active^T lambda||_inf at the NNLS optimum
  double gradient_norm = 0.0;   ///< ||grad f||_inf
  std::size_t active_rows = 0;
};

/// Stationarity residual of the discretized problem at w over the interior
/// variables, with nonnegative multipliers on the active rows (bounds,
/// acceleration, both jerk signs). +inf when an interior entry is zero.
KktReport kkt_report(std::span<const double> w, const Instance& inst);
double kkt_residual(std::span<const double> w, const Instance& inst);

}  // namespace jerkplan
