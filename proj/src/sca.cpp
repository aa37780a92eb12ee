#include "jerkplan/sca.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "jerkplan/objective.hpp"

namespace jerkplan {

void SolverConfig::validate() const {
  if (!(epsilon > 0.0) || !(eps1 > 0.0)) throw std::invalid_argument("SolverConfig: epsilon and eps1 must be positive");
  if (!(tau > 0.0 && tau < 1.0 && rho > 1.0)) throw std::invalid_argument("SolverConfig: need 0 < tau < 1 < rho");
  if (max_iterations == 0) throw std::invalid_argument("SolverConfig: max_iterations must be positive");
}

const char* to_string(Termination reason) {
  switch (reason) {
    case Termination::kStepTolerance: return "step-tolerance";
    case Termination::kKktTolerance: return "kkt-tolerance";
    case Termination::kIterationLimit: return "iteration-limit";
    case Termination::kStalled: return "stalled";
    case Termination::kDegenerate: return "degenerate";
  }
  return "unknown";
}

std::vector<double> SolveReport::objective_trail() const {
  std::vector<double> trail;
  trail.reserve(iterations.size());
  for (const auto& it : iterations) trail.push_back(it.objective);
  return trail;
}

namespace {

constexpr double kPolishStepTolerance = 1e-12;

std::vector<double> step_point(std::span<const double> w, std::span<const double> delta, double alpha,
                               const Instance& inst) {
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = std::clamp(w[i] + alpha * delta[i], 0.0, inst.u[i]);
  return out;
}

}  // namespace

LineSearchResult line_search(std::span<const double> w, std::span<const double> delta,
                             const Instance& inst, double tol) {
  LineSearchResult res;
  double alpha = 1.0;
  for (int k = 0; k <= kLineSearchHalvings; ++k, alpha *= 0.5) {
    if (check_feasibility(step_point(w, delta, alpha, inst), inst, tol).feasible) {
      res.alpha = alpha;
      return res;
    }
  }
  res.stalled = true;
  return res;
}

SolveReport solve(const Instance& inst, const SolverConfig& config) {
  config.validate();
  inst.validate();
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  SolveReport report;
  report.w.assign(inst.n, 0.0);
  const double scale = std::max(1.0, inst.max_bound());
  if (inst.max_bound() == 0.0) {
    report.reason = Termination::kDegenerate;
    report.objective = travel_time(report.w, inst.h);
    return report;
  }

  TrustRegionConfig tr;
  tr.rho = config.rho;
  tr.tau = config.tau;
  tr.eps1 = config.eps1;
  tr.method = config.direction;
  tr.accnar.epsilon = config.epsilon;
  tr.enforce_restriction = config.enforce_restriction;
  tr.sigma0 = 1.0;
  const double line_tol = config.mode == LinearizationMode::kEta ? 1e-10 : config.feasibility_tolerance;

  std::vector<double>& w = report.w;
  ExtendedReal current = travel_time(w, inst.h);
  report.reason = Termination::kIterationLimit;
  bool polishing = false;
  for (std::size_t k = 0; k < config.max_iterations; ++k) {
    const auto t0 = Clock::now();
    const LinearizedModel model = linearize(w, inst, config.mode);
    tr.inexact = k < config.inexact_iterations;
    UpdateResult upd;
    bool interior = polishing;
    if (polishing) {
      InteriorPointResult ip = interior_point_update(model);
      if (!ip.converged) {
        report.reason = Termination::kStepTolerance;
        break;
      }
      upd.delta = std::move(ip.delta);
      upd.stats.assumption_held = restriction_violations(model, upd.delta).empty();
    } else {
      upd = compute_update(model, tr);
      if (upd.stats.budget_exhausted && config.polish) {
        // The descent on F can zigzag between two radii at a kink; solve the
        // same subproblem with interior-point steps instead.
        InteriorPointResult ip = interior_point_update(model);
        if (ip.converged && restriction_violations(model, ip.delta).empty()) {
          upd.delta = std::move(ip.delta);
          interior = true;
        }
      }
    }

    IterationRecord rec;
    rec.masked_rows = model.masked_rows();
    rec.update = upd.stats;
    rec.assumption_held = upd.stats.assumption_held;
    rec.restricted = upd.stats.restricted;
    rec.polishing = interior;

    double alpha = 1.0;
    std::vector<double> next = step_point(w, upd.delta, 1.0, inst);
    FeasibilityReport feas = check_feasibility(next, inst, line_tol);
    if (config.mode == LinearizationMode::kEta || !feas.feasible) {
      const LineSearchResult ls = line_search(w, upd.delta, inst, line_tol);
      rec.backtracked = ls.alpha < 1.0;
      if (ls.stalled) {
        report.reason = Termination::kStalled;
        break;
      }
      alpha = ls.alpha;
      next = step_point(w, upd.delta, alpha, inst);
      feas = check_feasibility(next, inst, line_tol);
    }
    const ExtendedReal value = travel_time(next, inst.h);
    if (current.is_finite() && value > current) {
      // Rounding-level increase: keep the current point.
      report.reason = Termination::kStalled;
      break;
    }

    double step = 0.0;
    for (std::size_t i = 0; i < inst.n; ++i) step = std::max(step, std::abs(next[i] - w[i]));
    w = std::move(next);
    current = value;
    rec.alpha = alpha;
    rec.step_norm = step;
    rec.objective = value.to_double();
    rec.max_violation = feas.max_violation();
    rec.kkt = kkt_residual(w, inst);
    rec.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    report.iterations.push_back(rec);
    tr.sigma0 = std::max(step, 1e-9);

    if (config.kkt_target > 0.0 && rec.kkt <= config.kkt_target) {
      report.reason = Termination::kKktTolerance;
      break;
    }
    if (polishing ? step <= kPolishStepTolerance * scale : step <= config.step_tolerance * scale) {
      // The trust-region descent on F can stall at a kink of F slightly short
      // of the KKT point; finish on the same subproblem with interior-point
      // steps.
      if (!polishing && config.polish && config.kkt_target > 0.0) {
        polishing = true;
        continue;
      }
      report.reason = Termination::kStepTolerance;
      break;
    }
  }

  report.objective = current;
  report.kkt_residual = kkt_residual(w, inst);
  report.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

}  // namespace jerkplan
