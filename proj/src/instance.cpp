#include "jerkplan/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "jerkplan/rng.hpp"

namespace jerkplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> uniform_abscissae(double length, std::size_t n) {
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i)
    s[i] = length * static_cast<double>(i) / static_cast<double>(n - 1);
  return s;
}

GeneratedPath finish(PathSpec path, double accel, double jerk, double slope) {
  GeneratedPath out;
  out.instance = Instance::from_bounds(path.length, build_upper_bound(path), accel, jerk);
  out.path = std::move(path);
  out.max_curvature_slope = slope;
  return out;
}

}  // namespace

void PathSpec::validate() const {
  if (curvature.size() < 2) throw std::invalid_argument("PathSpec: need at least 2 grid points");
  if (!(length > 0.0)) throw std::invalid_argument("PathSpec: path length must be positive");
  if (!(v_max > 0.0)) throw std::invalid_argument("PathSpec: v_max must be positive");
  if (!(normal_accel > 0.0)) throw std::invalid_argument("PathSpec: A_N must be positive");
  if (!curvature2.empty() && curvature2.size() != curvature.size())
    throw std::invalid_argument("PathSpec: curvature2 length differs from curvature");
}

double Instance::max_bound() const {
  return u.empty() ? 0.0 : *std::max_element(u.begin(), u.end());
}

Instance Instance::from_bounds(double length, std::vector<double> u, double accel,
                               double jerk) {
  if (u.size() < 2) throw std::invalid_argument("Instance: need at least 2 grid points");
  Instance inst;
  inst.n = u.size();
  inst.h = length / static_cast<double>(inst.n - 1);
  inst.u = std::move(u);
  inst.accel = accel;
  inst.jerk = jerk;
  inst.validate();
  return inst;
}

void Instance::validate() const {
  if (n < 2 || u.size() != n) throw std::invalid_argument("Instance: bad size");
  if (!(h > 0.0)) throw std::invalid_argument("Instance: grid step must be positive");
  if (!(accel > 0.0)) throw std::invalid_argument("Instance: A must be positive");
  if (!(jerk > 0.0)) throw std::invalid_argument("Instance: J must be positive");
  if (u.front() != 0.0 || u.back() != 0.0)
    throw std::invalid_argument("Instance: endpoint bounds must be zero");
  for (double ui : u)
    if (!(ui >= 0.0) || !std::isfinite(ui))
      throw std::invalid_argument("Instance: bounds must be finite and nonnegative");
}

std::vector<double> build_upper_bound(const PathSpec& path) {
  path.validate();
  const std::size_t n = path.size();
  const double cap = path.v_max * path.v_max;
  std::vector<double> u(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double k = std::abs(path.curvature[i]);
    const double lateral = k > 0.0 ? path.normal_accel / k : kInf;
    u[i] = std::min(cap, lateral);
  }
  return u;
}

Instance gen_experiment1(std::uint64_t seed, std::size_t n) {
  if (n < kMinExperiment1Size)
    throw std::invalid_argument("experiment 1 needs n >= 9 (seven nonempty plateaus), got " +
                                std::to_string(n));
  constexpr double kLength = 60.0;
  constexpr double kMaxBound = 100.0;
  constexpr int kPlateaus = 7;

  SplitMix64 rng(seed);
  // Interior points are 1..n-2 (m of them). Draw six distinct cut positions in
  // 1..m-1 by partial Fisher-Yates; plateau j covers [cut_{j-1}, cut_j).
  const std::size_t m = n - 2;
  std::vector<std::size_t> pool(m - 1);
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i + 1;
  for (int c = 0; c < kPlateaus - 1; ++c) {
    const std::size_t pick = c + rng.below(pool.size() - c);
    std::swap(pool[c], pool[pick]);
  }
  std::vector<std::size_t> cuts(pool.begin(), pool.begin() + (kPlateaus - 1));
  std::sort(cuts.begin(), cuts.end());
  cuts.insert(cuts.begin(), 0);
  cuts.push_back(m);

  std::vector<double> u(n, 0.0);
  for (int j = 0; j < kPlateaus; ++j) {
    const double level = kMaxBound * rng.uniform_open_closed();
    for (std::size_t k = cuts[j]; k < cuts[j + 1]; ++k) u[k + 1] = level;
  }
  return Instance::from_bounds(kLength, std::move(u), 2.78, 0.5);
}

GeneratedPath gen_experiment2(std::uint64_t seed, std::size_t n) {
  if (n < kMinExperiment2Size)
    throw std::invalid_argument("experiment 2 needs n >= 7, got " + std::to_string(n));
  constexpr double kLength = 1000.0;
  constexpr double kMaxCurvature = 0.1;
  constexpr double kMinPiece = 0.05;  // fraction of s_f

  SplitMix64 rng(seed);
  const int pieces = 1 + static_cast<int>(rng.below(5));

  // Piece lengths: random weights, each piece at least kMinPiece of s_f.
  std::vector<double> weight(pieces);
  double total = 0.0;
  for (auto& w : weight) total += (w = rng.uniform_open_closed());
  std::vector<double> knot(pieces + 1, 0.0);
  const double free_length = kLength * (1.0 - kMinPiece * pieces);
  for (int p = 0; p < pieces; ++p)
    knot[p + 1] = knot[p] + kLength * kMinPiece + free_length * weight[p] / total;
  knot[pieces] = kLength;

  // Curvature at each knot. A zero piece needs zero at both ends, a constant
  // piece repeats its entry value, a linear piece ramps to a fresh target.
  enum Kind { kZero, kConstant, kLinear };
  std::vector<double> kval(pieces + 1, 0.0);
  double slope = 0.0;
  for (int p = 0; p < pieces; ++p) {
    const double entry = kval[p];
    const Kind kind = (entry == 0.0) ? (rng.below(2) == 0 ? kZero : kLinear)
                                     : (rng.below(2) == 0 ? kConstant : kLinear);
    double exit = entry;
    if (kind == kZero) exit = 0.0;
    if (kind == kLinear) exit = rng.uniform(-kMaxCurvature, kMaxCurvature);
    kval[p + 1] = exit;
    slope = std::max(slope, std::abs(exit - entry) / (knot[p + 1] - knot[p]));
  }

  PathSpec path;
  path.length = kLength;
  path.v_max = std::sqrt(192.93);
  path.normal_accel = 4.9;
  path.curvature.resize(n);
  const auto s = uniform_abscissae(kLength, n);
  int p = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (p + 1 < pieces && s[i] > knot[p + 1]) ++p;
    const double t = (s[i] - knot[p]) / (knot[p + 1] - knot[p]);
    path.curvature[i] = kval[p] + std::clamp(t, 0.0, 1.0) * (kval[p + 1] - kval[p]);
  }
  return finish(std::move(path), 0.25, 0.025, slope);
}

GeneratedPath gen_sine_path(std::size_t n) {
  if (n < 2) throw std::invalid_argument("sine path needs n >= 2");
  constexpr double kLength = 60.0;
  PathSpec path;
  path.length = kLength;
  path.v_max = std::sqrt(192.93);
  path.normal_accel = 4.9;
  path.curvature.resize(n);
  const auto s = uniform_abscissae(kLength, n);
  for (std::size_t i = 0; i < n; ++i) path.curvature[i] = std::sin(s[i] / 10.0) / 5.0;
  return finish(std::move(path), 1.39, 0.5, 0.02);
}

GeneratedPath gen_clothoid_path(std::size_t n) {
  if (n < kMinClothoidSize)
    throw std::invalid_argument("clothoid path needs n >= 10, got " + std::to_string(n));
  constexpr double kNormalAccel = 1.0;
  const double circle = kNormalAccel / kClothoidPlateauBound;

  double knot[6] = {0.0};
  for (int p = 0; p < 5; ++p) knot[p + 1] = knot[p] + kClothoidSegments[p];
  const double length = knot[5];

  PathSpec path;
  path.length = length;
  path.v_max = 15.0;
  path.normal_accel = kNormalAccel;
  path.curvature.resize(n);
  const auto s = uniform_abscissae(length, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double si = s[i];
    double k = 0.0;
    if (si <= knot[1] || si >= knot[4]) {
      k = 0.0;
    } else if (si < knot[2]) {
      k = circle * (si - knot[1]) / kClothoidSegments[1];
    } else if (si <= knot[3]) {
      k = circle;
    } else {
      k = circle * (knot[4] - si) / kClothoidSegments[3];
    }
    path.curvature[i] = k;
  }
  return finish(std::move(path), 1.5, 1.0, circle / kClothoidSegments[1]);
}

double solve_chi(double k, double k2, const ConfigSpaceLimits& limits) {
  if (!(limits.accel > 0.0 && limits.accel < limits.a_hat))
    throw std::invalid_argument("config_space_bound: need 0 < A < A_hat");
  if (!(limits.jerk > 0.0 && limits.jerk < limits.j_hat))
    throw std::invalid_argument("config_space_bound: need 0 < J < J_hat");
  if (k < 0.0 || k2 < 0.0) throw std::invalid_argument("config_space_bound: negative curvature norm");
  if (k == 0.0 && k2 == 0.0) return kInf;

  const auto lhs = [&](double chi) {
    const double r = std::sqrt(chi);
    return 3.0 * k * limits.accel * r + limits.jerk + k2 * chi * r;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (lhs(hi) < limits.j_hat) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (lhs(mid) < limits.j_hat ? lo : hi) = mid;
  }
  // Return whichever bracket end has the smaller residual.
  return std::abs(lhs(lo) - limits.j_hat) <= std::abs(lhs(hi) - limits.j_hat) ? lo : hi;
}

double config_space_bound(double k, double k2, const ConfigSpaceLimits& limits) {
  const double chi = solve_chi(k, k2, limits);
  const double lateral = k > 0.0 ? (limits.a_hat - limits.accel) / k : kInf;
  return std::min({limits.v_hat * limits.v_hat, lateral, chi});
}

}  // namespace jerkplan
