#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace jerkplan {

/// One nonzero of a sparse matrix.
struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

struct NnlsResult {
  std::vector<double> x;         ///< nonnegative coefficients
  std::vector<double> residual;  ///< M x - b
  double residual_inf = 0.0;
  bool converged = true;
};

/// Lawson-Hanson active-set NNLS: min ||M x - b||_2 subject to x >= 0.
NnlsResult lawson_hanson(const Eigen::MatrixXd& M, const Eigen::VectorXd& b,
                         std::size_t max_iterations = 0);

/// NNLS for a sparse M (rows x cols) given as triplets. Columns are grouped
/// into independent blocks (no shared rows); each block first tries a plain
/// least-squares solve and only runs Lawson-Hanson when that solution has a
/// negative entry.
NnlsResult block_nnls(std::size_t rows, std::size_t cols, std::span<const Triplet> entries,
                      std::span<const double> b);

}  // namespace jerkplan
