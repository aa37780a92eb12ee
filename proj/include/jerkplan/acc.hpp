#pragma once

#include <span>
#include <vector>

namespace jerkplan {

/// Component-wise maximum of {x : x <= y, x_{i+1} - x_i <= bA_i,
/// x_i - x_{i+1} <= bD_i}: one forward sweep for the acceleration rows and one
/// backward sweep for the deceleration rows. bA and bD have n-1 entries.
std::vector<double> solve_acc(std::span<const double> y, std::span<const double> bA,
                              std::span<const double> bD);

/// In-place variant used inside the alternating solver.
void solve_acc_inplace(std::vector<double>& x, std::span<const double> bA,
                       std::span<const double> bD);

}  // namespace jerkplan
