#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "jerkplan/descent.hpp"
#include "jerkplan/extended_real.hpp"
#include "jerkplan/instance.hpp"
#include "jerkplan/linearize.hpp"

namespace jerkplan {

struct SolverConfig {
  LinearizationMode mode = LinearizationMode::kThetaBeta;
  DirectionMethod direction = DirectionMethod::kHeuristic;
  double epsilon = 1e-8;   ///< ACC/NAR alternation tolerance
  double eps1 = 1e-6;      ///< trust-region radius floor
  double rho = 4.0;
  double tau = 0.25;
  std::size_t max_iterations = 500;
  /// Stop when ||alpha delta||_inf <= step_tolerance * max(1, max u).
  double step_tolerance = 1e-7;
  /// Stop when the KKT residual drops to this value (<= 0 disables).
  double kkt_target = 1e-4;
  /// Feasibility tolerance every iterate is held to.
  double feasibility_tolerance = 1e-8;
  /// Trust-region loops of the first `inexact_iterations` outer iterations
  /// stop after their first accepted step.
  std::size_t inexact_iterations = 0;
  /// Once the trust-region step stalls short of the KKT target, continue
  /// with interior-point solves of the same linearized subproblem. The same
  /// solver replaces a trust-region descent that runs out of iterations.
  bool polish = true;
  bool enforce_restriction = true;

  void validate() const;
};

enum class Termination {
  kStepTolerance,   ///< update fell below the step tolerance
  kKktTolerance,    ///< KKT residual reached the target
  kIterationLimit,  ///< outer iteration budget exhausted
  kStalled,         ///< no feasible step could be taken
  kDegenerate,      ///< all bounds are zero
};

const char* to_string(Termination reason);

struct IterationRecord {
  double objective = 0.0;     ///< travel time after the step
  double alpha = 1.0;         ///< step length taken
  double step_norm = 0.0;     ///< ||alpha delta||_inf
  double kkt = 0.0;           ///< KKT residual after the step
  double seconds = 0.0;       ///< wall time of the iteration
  std::size_t masked_rows = 0;
  bool backtracked = false;   ///< alpha = 1 was infeasible
  bool assumption_held = true;
  bool restricted = false;
  double max_violation = 0.0; ///< feasibility of the new iterate
  bool polishing = false;     ///< step came from the interior-point solver
  UpdateStats update;
};

struct SolveReport {
  std::vector<double> w;
  ExtendedReal objective = ExtendedReal::infinity();
  std::vector<IterationRecord> iterations;
  double kkt_residual = 0.0;
  Termination reason = Termination::kIterationLimit;
  double seconds = 0.0;

  /// Travel times after every step (the start point w = 0 has infinite time).
  std::vector<double> objective_trail() const;
  bool certified() const {
    return reason == Termination::kKktTolerance || reason == Termination::kStepTolerance;
  }
};

/// Sequential convex algorithm from w = 0.
SolveReport solve(const Instance& inst, const SolverConfig& config = {});

struct LineSearchResult {
  double alpha = 0.0;
  bool stalled = false;  ///< no trial step down to 2^-30 was feasible
};

/// Largest alpha in {1, 1/2, ..., 2^-30} with w + alpha delta feasible at tol.
LineSearchResult line_search(std::span<const double> w, std::span<const double> delta,
                             const Instance& inst, double tol = 1e-10);

inline constexpr int kLineSearchHalvings = 30;

}  // namespace jerkplan
