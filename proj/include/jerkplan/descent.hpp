#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "jerkplan/accnar.hpp"
#include "jerkplan/extended_real.hpp"
#include "jerkplan/linearize.hpp"
#include "jerkplan/lp.hpp"

namespace jerkplan {

/// Value of the optimal-value function F at y with its minimizer and the
/// multipliers of the upper-bound rows.
struct FEvaluation {
  ExtendedReal value;
  std::vector<double> delta;
  DualCertificate dual;
  bool feasible = true;
  std::size_t rounds = 0;
};

/// F(y) = min { f(w + x) : x <= y, ACC and NAR rows }. Multipliers are only
/// computed when requested and F(y) is finite.
FEvaluation eval_F(std::span<const double> y, const LinearizedModel& model,
                   const AccNarOptions& options = {}, bool with_multipliers = true);

/// Data of the trust-region direction problem
///   min -nu^T d  s.t.  coeff_i (d_{i-1} + d_{i+1}) - d_i <= phi_i, lower <= d <= upper.
struct DirectionProblem {
  std::span<const double> nu;
  std::span<const double> coeff;
  std::span<const double> phi;
  std::span<const unsigned char> active;
  std::span<const double> lower;
  std::span<const double> upper;
};

struct HeuristicResult {
  bool success = false;
  std::vector<double> d;
  std::size_t repairs = 0;
  std::string failure;  ///< empty on success
};

/// Number of ternary-search refinements after the coarse scan.
inline constexpr int kTernaryIterations = 60;
/// Points of the coarse scan over alpha in [0, 1].
inline constexpr int kCoarseScanPoints = 11;

/// Starts at d = upper and repairs the most violated PAR row (lowest index on
/// ties) by lowering its neighbours and propagating the tightened rows
/// outwards until the original vector already satisfies them, choosing the
/// split alpha by a search on -nu^T d. Fails when a violation cannot be
/// repaired inside the box or the result is not a descent direction.
HeuristicResult heuristic_direction(const DirectionProblem& problem, std::size_t max_repairs = 0);

/// Largest violation of the PAR rows at d (0 when none).
double par_violation(const DirectionProblem& problem, std::span<const double> d);

enum class DirectionMethod { kHeuristic, kLp };

struct TrustRegionConfig {
  double rho = 4.0;      ///< radius growth after an accepted step
  double tau = 0.25;     ///< radius shrink after a rejected step
  double eps1 = 1e-6;    ///< stop once the radius drops below this
  double sigma0 = 1.0;   ///< initial radius
  DirectionMethod method = DirectionMethod::kHeuristic;
  AccNarOptions accnar;  ///< used for every F evaluation
  /// Tolerance of the final solve that turns y* into the step.
  double final_epsilon = 1e-12;
  /// Iteration budget of one trust-region descent.
  std::size_t max_iterations = 2000;
  /// Stop after the first accepted step (inexact early iterations).
  bool inexact = false;
  /// Re-solve with capped bounds when the sufficient condition for
  /// feasibility of the step fails.
  bool enforce_restriction = true;
  LpOptions lp;
};

struct UpdateStats {
  std::size_t iterations = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t f_evaluations = 0;
  std::size_t heuristic_calls = 0;
  std::size_t heuristic_failures = 0;
  std::size_t lp_calls = 0;
  std::size_t dual_fallbacks = 0;
  /// Whether delta_{j-1} + delta_{j+1} <= 2 (w_{j-1} + w_{j+1}) held on
  /// every unmasked row of the returned step.
  bool assumption_held = true;
  /// Whether the capped re-solve was used.
  bool restricted = false;
  /// The trust-region loop hit its iteration budget.
  bool budget_exhausted = false;
  /// Largest PAR-row violation over accepted y.
  double max_par_violation = 0.0;
};

struct UpdateResult {
  std::vector<double> delta;
  std::vector<double> y;
  ExtendedReal objective;
  UpdateStats stats;
};

/// Trust-region descent on F from y = 0 followed by the final solve at y*.
UpdateResult compute_update(const LinearizedModel& model, const TrustRegionConfig& config = {});

/// Rows j (unmasked) where delta_{j-1} + delta_{j+1} > 2 (w_{j-1} + w_{j+1}) + tol.
std::vector<std::size_t> restriction_violations(const LinearizedModel& model,
                                                std::span<const double> delta, double tol = 1e-12);

/// Copy of the model whose upper bounds at j-1, j+1 are capped at
/// w_{j+-1} + (w_{j-1} + w_{j+1}) / 2 for every listed row j.
LinearizedModel restricted_model(const LinearizedModel& model, std::span<const std::size_t> rows);

struct InteriorPointOptions {
  std::size_t max_iterations = 200;
  /// Stop once the average complementarity gap falls below gap_tolerance and
  /// the residuals below residual_tolerance, relative to max(1, max u) and
  /// max(1, ||grad f||_inf).
  double gap_tolerance = 1e-14;
  double residual_tolerance = 1e-10;
  /// Fraction of the distance to the boundary a step may cover.
  double step_fraction = 0.995;
};

struct InteriorPointResult {
  std::vector<double> delta;
  bool converged = false;
  std::size_t iterations = 0;
  double gap = 0.0;          ///< final average complementarity s^T lambda / m
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

/// Solves the linearized problem min f(w + delta) over the box, acceleration,
/// PAR and NAR rows of the model with a primal-dual interior-point method
/// (Mehrotra predictor-corrector, banded normal equations). Used to refine an
/// iterate once the trust-region descent on F stalls. Returns delta = 0 with
/// converged = false when the method breaks down.
InteriorPointResult interior_point_update(const LinearizedModel& model,
                                          const InteriorPointOptions& options = {});

}  // namespace jerkplan
