#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace jerkplan {

/// Curvature data sampled on the uniform grid s_i = (i-1) s_f / (n-1).
struct PathSpec {
  double length = 0.0;              ///< s_f [m]
  std::vector<double> curvature;    ///< k(s_i) [1/m]
  std::vector<double> curvature2;   ///< optional k2(s_i) [1/m^2], may be empty
  double v_max = 0.0;               ///< speed cap [m/s]
  double normal_accel = 0.0;        ///< A_N [m/s^2]

  std::size_t size() const { return curvature.size(); }
  /// Throws std::invalid_argument on n < 2, non-positive length/v_max/A_N.
  void validate() const;
};

/// Discretized problem: squared-speed caps u on n grid points with spacing h,
/// symmetric tangential acceleration bound A and jerk bound J.
struct Instance {
  std::size_t n = 0;
  double h = 0.0;
  std::vector<double> u;
  double accel = 0.0;
  double jerk = 0.0;

  double length() const { return h * static_cast<double>(n - 1); }
  double max_bound() const;
  /// Grid abscissa of point i (0-based).
  double abscissa(std::size_t i) const { return h * static_cast<double>(i); }

  /// Builds an instance over [0, length]; u must already have zero endpoints.
  static Instance from_bounds(double length, std::vector<double> u, double accel,
                              double jerk);
  void validate() const;
};

/// u_i = min(v_max^2, A_N/|k_i|) with A_N/0 = +inf; endpoints forced to 0.
std::vector<double> build_upper_bound(const PathSpec& path);

/// Instance plus the path data it was derived from.
struct GeneratedPath {
  Instance instance;
  PathSpec path;
  /// Largest |dk/ds| over the linear curvature pieces (0 if none).
  double max_curvature_slope = 0.0;
};

// Instance recipes. Vehicle and path parameters are fixed; only the
// grid size and (for random families) the seed vary.

/// Seven constant plateaus over a random partition of the interior points,
/// plateau values uniform in (0, 100]; s_f = 60, A = 2.78, J = 0.5.
Instance gen_experiment1(std::uint64_t seed, std::size_t n);

/// Road-like curvature: up to five pieces that are zero, constant or linear,
/// joined continuously; s_f = 1000, A = 0.25, J = 0.025, A_N = 4.9,
/// v_max^2 = 192.93.
GeneratedPath gen_experiment2(std::uint64_t seed, std::size_t n);

/// k(s) = sin(s/10)/5 on s_f = 60; A = 1.39, A_N = 4.9, J = 0.5.
GeneratedPath gen_sine_path(std::size_t n);

/// Line / clothoid / circle / clothoid / line with lengths 25/15/10/15/25 m;
/// v_max = 15, A = 1.5, A_N = 1, J = 1, circle curvature A_N/25.
GeneratedPath gen_clothoid_path(std::size_t n);

inline constexpr std::size_t kMinExperiment1Size = 9;
inline constexpr std::size_t kMinExperiment2Size = 7;
inline constexpr std::size_t kMinClothoidSize = 10;
inline constexpr double kClothoidSegments[5] = {25.0, 15.0, 10.0, 15.0, 25.0};
inline constexpr double kClothoidPlateauBound = 25.0;

/// Bounds a trajectory in a general configuration space must respect.
struct ConfigSpaceLimits {
  double v_hat = 0.0;   ///< speed limit
  double a_hat = 0.0;   ///< acceleration-norm limit
  double j_hat = 0.0;   ///< jerk-norm limit
  double accel = 0.0;   ///< tangential bound A handed to the planner, 0 < A < a_hat
  double jerk = 0.0;    ///< jerk bound J handed to the planner, 0 < J < j_hat
};

/// Positive root chi of 3 k A sqrt(chi) + J + k2 chi^{3/2} = j_hat, found by
/// bisection. Returns +inf when k = k2 = 0.
double solve_chi(double k, double k2, const ConfigSpaceLimits& limits);

/// Squared-speed cap min{v_hat^2, (a_hat - A)/k, chi} at one grid point.
double config_space_bound(double k, double k2, const ConfigSpaceLimits& limits);

}  // namespace jerkplan
