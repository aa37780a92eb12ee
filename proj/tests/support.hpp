#pragma once

// Random problem generators shared by the unit tests and the acceptance run.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "jerkplan/instance.hpp"
#include "jerkplan/linearize.hpp"
#include "jerkplan/objective.hpp"
#include "jerkplan/rng.hpp"

namespace support {

struct FeasiblePoint {
  jerkplan::Instance inst;
  std::vector<double> w;
};

/// Largest acceleration and jerk row values of w (original constraint form).
inline void row_maxima(const std::vector<double>& w, double& acc, double& jerk) {
  acc = 0.0;
  jerk = 0.0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) acc = std::max(acc, std::abs(w[i + 1] - w[i]));
  for (std::size_t i = 1; i + 1 < w.size(); ++i) {
    const double x = w[i - 1] + w[i + 1];
    jerk = std::max(jerk, std::abs(w[i - 1] - 2.0 * w[i] + w[i + 1]) * std::sqrt(0.5 * x));
  }
}

/// A random feasible instance and point: a random positive profile, optionally with
/// zero runs, scaled so that its tightest acceleration or jerk row is met
/// (with probability 1/2 exactly, otherwise with slack). Bounds sit on or
/// above the profile.
inline FeasiblePoint random_feasible_point(jerkplan::SplitMix64& rng, std::size_t n_min = 5,
                                           std::size_t n_max = 60) {
  const std::size_t n = n_min + rng.below(n_max - n_min + 1);
  const double length = rng.uniform(10.0, 200.0);
  const double accel = rng.uniform(0.2, 3.0);
  const double jerk = rng.uniform(0.02, 2.0);
  const double h = length / static_cast<double>(n - 1);

  std::vector<double> w(n, 0.0);
  double level = rng.uniform(1.0, 100.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    level = std::max(0.5, level + rng.uniform(-10.0, 10.0));
    w[i] = rng.below(12) == 0 ? 0.0 : level;
  }
  if (rng.below(4) == 0) {
    // A zero run masks the jerk rows around it.
    const std::size_t start = 1 + rng.below(n - 2);
    const std::size_t len = 1 + rng.below(3);
    for (std::size_t i = start; i < std::min(n - 1, start + len); ++i) w[i] = 0.0;
  }
  double acc_max = 0.0;
  double jerk_max = 0.0;
  row_maxima(w, acc_max, jerk_max);
  double t = 1.0;
  if (acc_max > 0.0) t = std::min(t, 2.0 * h * accel / acc_max);
  if (jerk_max > 0.0) t = std::min(t, std::pow(2.0 * h * h * jerk / jerk_max, 2.0 / 3.0));
  if (rng.below(2) == 0) t *= rng.uniform(0.5, 1.0);
  // Scaling is exact up to rounding; a relative shave keeps the point
  // feasible to machine precision.
  t *= 1.0 - 1e-14;
  for (double& v : w) v *= t;

  std::vector<double> u(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i)
    u[i] = rng.below(3) == 0 ? w[i] : w[i] + rng.uniform(0.0, 50.0);
  FeasiblePoint fp;
  fp.inst = jerkplan::Instance::from_bounds(length, std::move(u), accel, jerk);
  fp.w = std::move(w);
  return fp;
}

/// Random upper-bound vector for F: y in [lower, upper] of the model box,
/// with some coordinates at 0 and some at the box corner.
inline std::vector<double> random_y(jerkplan::SplitMix64& rng, const jerkplan::LinearizedModel& m,
                                    bool allow_negative = false) {
  std::vector<double> y(m.n, 0.0);
  for (std::size_t i = 1; i + 1 < m.n; ++i) {
    const double lo = allow_negative ? m.lB[i] : 0.0;
    switch (rng.below(4)) {
      case 0: y[i] = m.uB[i]; break;
      case 1: y[i] = 0.0; break;
      default: y[i] = rng.uniform(lo, m.uB[i]); break;
    }
  }
  return y;
}

}  // namespace support
