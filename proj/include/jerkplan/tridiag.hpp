#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace jerkplan {

/// Forward pivots with magnitude at or below this are treated as a breakdown.
inline constexpr double kPivotTolerance = 1e-14;

/// Solves T x = d for the tridiagonal T with sub-diagonal a (a[0] unused),
/// diagonal b and super-diagonal c (c[m-1] unused) by the Thomas algorithm.
/// Returns nullopt on pivot breakdown.
std::optional<std::vector<double>> thomas_solve(std::span<const double> a,
                                                std::span<const double> b,
                                                std::span<const double> c,
                                                std::span<const double> d);

/// Cached forward phase of the Thomas algorithm. The forward coefficients of
/// row i depend only on rows 0..i, so one factorization serves every leading
/// principal subsystem; valid_rows() is the length of the longest prefix whose
/// pivots are all usable.
///
/// With pivots p_i and psi_i = c_i / p_i the back substitution reads
/// x_{m-1} = alpha_{m-1}, x_i = alpha_i - psi_i x_{i+1}.
class TriFactor {
 public:
  TriFactor() = default;
  static TriFactor factor(std::span<const double> a, std::span<const double> b,
                          std::span<const double> c);

  std::size_t size() const { return pivot_.size(); }
  std::size_t valid_rows() const { return valid_; }
  bool ok() const { return valid_ == pivot_.size(); }

  double pivot(std::size_t i) const { return pivot_[i]; }
  double psi(std::size_t i) const { return psi_[i]; }
  /// Multiplier that eliminates row i-1 from row i (0 for i = 0).
  double elimination(std::size_t i) const { return ell_[i]; }

  /// Forward-eliminated right-hand side g (alpha_i = g_i / pivot_i) of the
  /// first `rows` rows.
  std::vector<double> eliminate(std::span<const double> d, std::size_t rows) const;

  /// Full solve of the factored system; requires ok().
  std::vector<double> back_solve(std::span<const double> d) const;

  /// m_{i,r} = prod_{s=i}^{r-1} psi_s, with m_{i,i} = 1.
  double prefix_product(std::size_t i, std::size_t r) const;

  /// dx_i / dx_r in the back substitution, prod_{s=i}^{r-1} (-psi_s).
  double influence(std::size_t i, std::size_t r) const;

 private:
  std::vector<double> pivot_;
  std::vector<double> psi_;
  std::vector<double> ell_;
  std::size_t valid_ = 0;
};

}  // namespace jerkplan
