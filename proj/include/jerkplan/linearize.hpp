#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jerkplan/instance.hpp"

namespace jerkplan {

enum class LinearizationMode {
  kEta,        ///< first-order expansion of the jerk rows, one coefficient eta
  kThetaBeta,  ///< tighter expansion of the rewritten rows: theta (PAR), beta (NAR)
};

/// Coefficients of the convex direction problem built around a feasible w.
/// Row arrays have n entries indexed by grid point; rows 0 and n-1 are unused
/// and so is every row with active[i] == 0 (w_{i-1} + w_{i+1} numerically 0).
struct LinearizedModel {
  LinearizationMode mode = LinearizationMode::kThetaBeta;
  std::size_t n = 0;
  double h = 0.0;
  double two_hA = 0.0;    ///< 2hA, acceleration row bound of the original problem
  double jerk_rhs = 0.0;  ///< 2h^2 J, jerk row bound of the original problem
  std::vector<double> w;   ///< linearization point
  std::vector<double> lB;  ///< -w
  std::vector<double> uB;  ///< u - w
  std::vector<double> bA;  ///< n-1 entries, 2hA - w_{i+1} + w_i
  std::vector<double> bD;  ///< n-1 entries, 2hA - w_i + w_{i+1}
  std::vector<double> eta;
  std::vector<double> theta;
  std::vector<double> beta;
  std::vector<double> bP;
  std::vector<double> bN;
  std::vector<unsigned char> active;
  /// Coefficient used in the NAR rows x_i - c_i (x_{i-1} + x_{i+1}) <= bN_i:
  /// beta (ThetaBeta) or eta (Eta), clamped at 0 so the rows keep the
  /// monotone sign pattern.
  std::vector<double> nar;
  /// Coefficient used in the PAR rows c_i (x_{i-1} + x_{i+1}) - x_i <= bP_i:
  /// theta (ThetaBeta) or eta (Eta).
  std::vector<double> par;
  /// Smallest right-hand side seen before rounding up to 0.
  double min_raw_rhs = 0.0;

  std::size_t masked_rows() const;
};

/// Relative threshold below which w_{i-1} + w_{i+1} counts as zero.
inline constexpr double kMaskTolerance = 1e-12;
/// Negative right-hand sides down to -kRhsSlack * max(1, max u) are rounded up
/// to 0 (iterates are feasible only up to rounding); anything lower is reported.
inline constexpr double kRhsSlack = 1e-7;

/// Builds the model at w. Throws std::domain_error naming the violated
/// constraint family and index when w is infeasible beyond kRhsSlack.
LinearizedModel linearize(std::span<const double> w, const Instance& inst,
                          LinearizationMode mode = LinearizationMode::kThetaBeta);

/// True when every right-hand side is nonnegative and every row coefficient
/// is finite; used by tests.
bool rhs_nonnegative(const LinearizedModel& model, double tol);

}  // namespace jerkplan
