#include "jerkplan/stationarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/SparseCore>
#include <Eigen/SparseQR>
#include <Eigen/OrderingMethods>

namespace jerkplan {

namespace {

Eigen::VectorXd passive_least_squares(const Eigen::MatrixXd& M, const Eigen::VectorXd& b,
                                      const std::vector<Eigen::Index>& passive) {
  Eigen::MatrixXd sub(M.rows(), static_cast<Eigen::Index>(passive.size()));
  for (std::size_t k = 0; k < passive.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = M.col(passive[k]);
  return sub.colPivHouseholderQr().solve(b);
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

NnlsResult lawson_hanson(const Eigen::MatrixXd& M, const Eigen::VectorXd& b,
                         std::size_t max_iterations) {
  const Eigen::Index m = M.rows();
  const Eigen::Index n = M.cols();
  if (b.size() != m) throw std::invalid_argument("lawson_hanson: size mismatch");
  if (max_iterations == 0) max_iterations = 3 * static_cast<std::size_t>(n) + 10;

  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     std::max<double>(1.0, M.cwiseAbs().maxCoeff()) *
                     static_cast<double>(std::max(m, n)) * std::max(1.0, b.cwiseAbs().maxCoeff());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<char> in_passive(static_cast<std::size_t>(n), 0);
  NnlsResult out;
  std::size_t iterations = 0;

  Eigen::VectorXd grad = M.transpose() * (b - M * x);
  while (true) {
    Eigen::Index enter = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!in_passive[j] && grad[j] > best) {
        best = grad[j];
        enter = j;
      }
    if (enter < 0) break;
    if (++iterations > max_iterations) {
      out.converged = false;
      break;
    }
    in_passive[enter] = 1;

    while (true) {
      std::vector<Eigen::Index> passive;
      for (Eigen::Index j = 0; j < n; ++j)
        if (in_passive[j]) passive.push_back(j);
      const Eigen::VectorXd z = passive_least_squares(M, b, passive);
      double alpha = 1.0;
      bool all_positive = true;
      for (std::size_t k = 0; k < passive.size(); ++k) {
        const Eigen::Index j = passive[k];
        if (z[static_cast<Eigen::Index>(k)] <= tol) {
          all_positive = false;
          const double denom = x[j] - z[static_cast<Eigen::Index>(k)];
          if (denom > 0.0) alpha = std::min(alpha, x[j] / denom);
        }
      }
      if (all_positive) {
        for (std::size_t k = 0; k < passive.size(); ++k) x[passive[k]] = z[static_cast<Eigen::Index>(k)];
        break;
      }
      for (std::size_t k = 0; k < passive.size(); ++k) {
        const Eigen::Index j = passive[k];
        x[j] += alpha * (z[static_cast<Eigen::Index>(k)] - x[j]);
        if (x[j] <= tol) {
          x[j] = 0.0;
          in_passive[j] = 0;
        }
      }
      if (std::none_of(in_passive.begin(), in_passive.end(), [](char c) { return c != 0; })) break;
    }
    grad = M.transpose() * (b - M * x);
  }

  out.x.assign(x.data(), x.data() + n);
  const Eigen::VectorXd r = M * x - b;
  out.residual.assign(r.data(), r.data() + m);
  out.residual_inf = m > 0 ? r.cwiseAbs().maxCoeff() : 0.0;
  return out;
}

NnlsResult block_nnls(std::size_t rows, std::size_t cols, std::span<const Triplet> entries,
                      std::span<const double> b) {
  if (b.size() != rows) throw std::invalid_argument("block_nnls: rhs length mismatch");
  NnlsResult out;
  out.x.assign(cols, 0.0);

  // Columns sharing a row belong to the same block.
  DisjointSets sets(cols);
  std::vector<std::size_t> first_col(rows, cols);
  for (const auto& e : entries) {
    if (e.row >= rows || e.col >= cols) throw std::invalid_argument("block_nnls: entry out of range");
    if (first_col[e.row] == cols) first_col[e.row] = e.col;
    else sets.unite(first_col[e.row], e.col);
  }

  std::vector<std::vector<std::size_t>> block_cols(cols);
  for (std::size_t c = 0; c < cols; ++c) block_cols[sets.find(c)].push_back(c);
  std::vector<std::vector<const Triplet*>> block_entries(cols);
  for (const auto& e : entries) block_entries[sets.find(e.col)].push_back(&e);

  std::vector<std::size_t> local_row(rows, 0), local_col(cols, 0);
  std::vector<std::size_t> row_stamp(rows, cols);
  for (std::size_t root = 0; root < cols; ++root) {
    const auto& bc = block_cols[root];
    if (bc.empty()) continue;
    std::vector<std::size_t> brows;
    for (const Triplet* e : block_entries[root])
      if (row_stamp[e->row] != root) {
        row_stamp[e->row] = root;
        local_row[e->row] = brows.size();
        brows.push_back(e->row);
      }
    for (std::size_t k = 0; k < bc.size(); ++k) local_col[bc[k]] = k;
    const auto br = static_cast<Eigen::Index>(brows.size());
    const auto bn = static_cast<Eigen::Index>(bc.size());
    Eigen::VectorXd rhs(br);
    for (Eigen::Index r = 0; r < br; ++r) rhs[r] = b[brows[static_cast<std::size_t>(r)]];

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(block_entries[root].size());
    for (const Triplet* e : block_entries[root])
      trip.emplace_back(static_cast<int>(local_row[e->row]), static_cast<int>(local_col[e->col]), e->value);

    Eigen::VectorXd sol;
    bool solved = false;
    if (br >= bn) {
      Eigen::SparseMatrix<double> S(br, bn);
      S.setFromTriplets(trip.begin(), trip.end());
      S.makeCompressed();
      Eigen::SparseQR<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> qr;
      qr.compute(S);
      if (qr.info() == Eigen::Success && qr.rank() == bn) {
        sol = qr.solve(rhs);
        solved = qr.info() == Eigen::Success && (sol.array() >= 0.0).all() && sol.allFinite();
      }
    }
    if (!solved) {
      Eigen::MatrixXd D = Eigen::MatrixXd::Zero(br, bn);
      for (const auto& t : trip) D(t.row(), t.col()) += t.value();
      NnlsResult sub = lawson_hanson(D, rhs);
      out.converged = out.converged && sub.converged;
      sol = Eigen::Map<Eigen::VectorXd>(sub.x.data(), bn);
    }
    for (std::size_t k = 0; k < bc.size(); ++k) out.x[bc[k]] = sol[static_cast<Eigen::Index>(k)];
  }

  out.residual.assign(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) out.residual[r] = -b[r];
  for (const auto& e : entries) out.residual[e.row] += e.value * out.x[e.col];
  out.residual_inf = 0.0;
  for (double r : out.residual) out.residual_inf = std::max(out.residual_inf, std::abs(r));
  return out;
}

}  // namespace jerkplan
