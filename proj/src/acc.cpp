#include "jerkplan/acc.hpp"

#include <algorithm>
#include <stdexcept>

namespace jerkplan {

void solve_acc_inplace(std::vector<double>& x, std::span<const double> bA,
                       std::span<const double> bD) {
  const std::size_t n = x.size();
  if (n == 0) return;
  if (bA.size() + 1 != n || bD.size() + 1 != n)
    throw std::invalid_argument("solve_acc: bA/bD must have n-1 entries");
  for (std::size_t i = 0; i + 1 < n; ++i) x[i + 1] = std::min(x[i + 1], x[i] + bA[i]);
  for (std::size_t i = n - 1; i-- > 0;) x[i] = std::min(x[i], x[i + 1] + bD[i]);
}

std::vector<double> solve_acc(std::span<const double> y, std::span<const double> bA,
                              std::span<const double> bD) {
  std::vector<double> x(y.begin(), y.end());
  solve_acc_inplace(x, bA, bD);
  return x;
}

}  // namespace jerkplan
