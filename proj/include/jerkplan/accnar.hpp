#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jerkplan/extended_real.hpp"
#include "jerkplan/linearize.hpp"
#include "jerkplan/nar.hpp"

namespace jerkplan {

struct AccNarOptions {
  double epsilon = 1e-8;          ///< stop when ||x_NAR - x_ACC||_inf <= epsilon
  std::size_t max_rounds = 1000000;
  bool skip = true;               ///< skip rule inside the NAR solver
};

struct AccNarResult {
  std::vector<double> delta;
  /// False when the component-wise maximum drops below the lower bound lB or
  /// cannot satisfy the rows; the objective is then +infinity.
  bool feasible = true;
  std::size_t rounds = 0;
  ExtendedReal objective;  ///< f(w + delta)
};

/// Component-wise maximum of {x <= y : acceleration, deceleration and NAR rows
/// of the model}, by alternating the ACC and NAR solvers from y.
AccNarResult solve_accnar(std::span<const double> y, const LinearizedModel& model,
                          const AccNarOptions& options = {}, NarStats* stats = nullptr);

/// Multipliers of the upper-bound rows (nu) and of the acceleration,
/// deceleration and NAR rows at a solution of the box+ACC+NAR problem.
struct DualCertificate {
  std::vector<double> nu;          ///< n entries
  std::vector<double> lambda_acc;  ///< n-1 entries
  std::vector<double> lambda_dec;  ///< n-1 entries
  std::vector<double> lambda_nar;  ///< n entries
  double residual = 0.0;           ///< ||grad f + C^T [lambda; nu]||_inf
  double gradient_norm = 0.0;
  /// True when the NNLS residual exceeded kDualTolerance * ||grad f||_inf and
  /// nu was replaced by max(0, -grad f) on the active bounds, or, when an
  /// interior speed is zero, by 1 (kZeroSpeedWeight at the zero speeds).
  bool fallback = false;
};

inline constexpr double kDualTolerance = 1e-6;
/// Fallback multiplier of an active bound whose shifted speed is zero.
inline constexpr double kZeroSpeedWeight = 1e3;

DualCertificate extract_multipliers(std::span<const double> delta, std::span<const double> y,
                                    const LinearizedModel& model);

/// Point w + delta with rounding-level negatives cleared.
std::vector<double> shifted_point(const LinearizedModel& model, std::span<const double> delta);

}  // namespace jerkplan
