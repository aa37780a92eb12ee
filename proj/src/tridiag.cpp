#include "jerkplan/tridiag.hpp"

#include <cmath>
#include <stdexcept>

namespace jerkplan {

std::optional<std::vector<double>> thomas_solve(std::span<const double> a,
                                                std::span<const double> b,
                                                std::span<const double> c,
                                                std::span<const double> d) {
  const std::size_t m = b.size();
  if (a.size() != m || c.size() != m || d.size() != m)
    throw std::invalid_argument("thomas_solve: size mismatch");
  std::vector<double> x(m);
  if (m == 0) return x;

  std::vector<double> cp(m);
  double pivot = b[0];
  if (std::abs(pivot) <= kPivotTolerance) return std::nullopt;
  cp[0] = (m > 1 ? c[0] : 0.0) / pivot;
  x[0] = d[0] / pivot;
  for (std::size_t i = 1; i < m; ++i) {
    pivot = b[i] - a[i] * cp[i - 1];
    if (std::abs(pivot) <= kPivotTolerance) return std::nullopt;
    cp[i] = (i + 1 < m ? c[i] : 0.0) / pivot;
    x[i] = (d[i] - a[i] * x[i - 1]) / pivot;
  }
  for (std::size_t i = m - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
  return x;
}

TriFactor TriFactor::factor(std::span<const double> a, std::span<const double> b,
                            std::span<const double> c) {
  const std::size_t m = b.size();
  if (a.size() != m || c.size() != m) throw std::invalid_argument("TriFactor: size mismatch");
  TriFactor f;
  f.pivot_.assign(m, 0.0);
  f.psi_.assign(m, 0.0);
  f.ell_.assign(m, 0.0);
  f.valid_ = m;
  for (std::size_t i = 0; i < m; ++i) {
    double p = b[i];
    if (i > 0) {
      f.ell_[i] = a[i] / f.pivot_[i - 1];
      p -= f.ell_[i] * c[i - 1];
    }
    f.pivot_[i] = p;
    if (std::abs(p) <= kPivotTolerance) {
      f.valid_ = i;
      break;
    }
    f.psi_[i] = (i + 1 < m ? c[i] : 0.0) / p;
  }
  return f;
}

std::vector<double> TriFactor::eliminate(std::span<const double> d, std::size_t rows) const {
  if (rows > valid_) throw std::invalid_argument("TriFactor::eliminate: rows beyond valid prefix");
  std::vector<double> g(rows);
  for (std::size_t i = 0; i < rows; ++i) g[i] = d[i] - (i > 0 ? ell_[i] * g[i - 1] : 0.0);
  return g;
}

std::vector<double> TriFactor::back_solve(std::span<const double> d) const {
  if (!ok()) throw std::domain_error("TriFactor::back_solve: factorization broke down");
  const std::size_t m = size();
  if (d.size() != m) throw std::invalid_argument("TriFactor::back_solve: size mismatch");
  std::vector<double> x = eliminate(d, m);
  for (std::size_t i = 0; i < m; ++i) x[i] /= pivot_[i];
  for (std::size_t i = m; i-- > 1;) x[i - 1] -= psi_[i - 1] * x[i];
  return x;
}

double TriFactor::prefix_product(std::size_t i, std::size_t r) const {
  double m = 1.0;
  for (std::size_t s = i; s < r; ++s) m *= psi_[s];
  return m;
}

double TriFactor::influence(std::size_t i, std::size_t r) const {
  double m = 1.0;
  for (std::size_t s = i; s < r; ++s) m *= -psi_[s];
  return m;
}

}  // namespace jerkplan
