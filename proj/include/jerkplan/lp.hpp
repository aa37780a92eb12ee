#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace jerkplan {

/// min c^T x subject to sparse rows G x <= rhs and lower <= x <= upper.
/// The solver starts from x = 0, so it requires lower <= 0 <= upper and
/// rhs >= 0 (both hold for the direction problem at a feasible point).
struct LinearProgram {
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;
  std::vector<double> rhs;

  std::size_t variables() const { return cost.size(); }
  /// Largest violation of rows and box at x (0 when feasible).
  double violation(std::span<const double> x) const;
  double objective(std::span<const double> x) const;
};

/// Direction problem: min -nu^T d subject to
/// coeff_i (d_{i-1} + d_{i+1}) - d_i <= phi_i on interior rows with
/// active[i] != 0, and lower <= d <= upper.
LinearProgram direction_lp(std::span<const double> nu, std::span<const double> coeff,
                           std::span<const double> phi, std::span<const unsigned char> active,
                           std::span<const double> lower, std::span<const double> upper);

enum class LpStatus { kOptimal, kUnbounded, kPivotLimit, kBadStart };

const char* to_string(LpStatus status);

struct LpOptions {
  std::size_t max_pivots = 10000;
  double degenerate_tolerance = 1e-10;
  /// Consecutive degenerate pivots after which Bland's rule takes over.
  std::size_t bland_after = 50;
  /// Basis inverse is rebuilt from scratch this often.
  std::size_t refactor_every = 64;
};

struct LpResult {
  LpStatus status = LpStatus::kOptimal;
  std::vector<double> x;
  double objective = 0.0;
  std::size_t pivots = 0;
  std::size_t bound_flips = 0;
  std::size_t degenerate_pivots = 0;
  bool bland = false;
};

/// Revised bounded-variable primal simplex with a dense basis inverse and
/// sparse columns. Dantzig pricing; Bland's smallest-index rule once a run of
/// degenerate pivots appears.
LpResult solve_lp(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace jerkplan
