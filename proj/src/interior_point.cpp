#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "jerkplan/descent.hpp"

namespace jerkplan {

namespace {

// One inequality row g^T z <= b over the interior unknowns z_k = delta_{k+1}.
// Rows touch at most three consecutive unknowns.
struct Row {
  int first;      // index of the first touched unknown (may be -1)
  double c[3];    // coefficients of z_first, z_first+1, z_first+2
  double b;
};

struct RowSet {
  std::vector<Row> rows;
  int m = 0;  // number of unknowns

  void add(int first, double c0, double c1, double c2, double b) { rows.push_back({first, {c0, c1, c2}, b}); }

  double apply(const Row& r, const Eigen::VectorXd& z) const {
    double v = 0.0;
    for (int t = 0; t < 3; ++t) {
      const int k = r.first + t;
      if (k >= 0 && k < m) v += r.c[t] * z[k];
    }
    return v;
  }
};

RowSet build_rows(const LinearizedModel& model) {
  const int n = static_cast<int>(model.n);
  RowSet set;
  set.m = n - 2;
  // Unknown k corresponds to delta_{k+1}; delta_0 and delta_{n-1} are fixed at 0.
  for (int i = 1; i + 1 < n; ++i) set.add(i - 1, 1.0, 0.0, 0.0, model.uB[i]);
  for (int i = 0; i + 1 < n; ++i) {
    // delta_{i+1} - delta_i <= bA_i and delta_i - delta_{i+1} <= bD_i.
    set.add(i - 1, -1.0, 1.0, 0.0, model.bA[i]);
    set.add(i - 1, 1.0, -1.0, 0.0, model.bD[i]);
  }
  for (int i = 1; i + 1 < n; ++i) {
    if (!model.active[i]) continue;
    const double p = model.par[i];
    const double c = model.nar[i];
    set.add(i - 2, p, -1.0, p, model.bP[i]);
    set.add(i - 2, -c, 1.0, -c, model.bN[i]);
  }
  // Drop rows that touch no unknown (e.g. the acceleration rows between
  // the two fixed endpoints of a 2-point grid).
  std::erase_if(set.rows, [&](const Row& r) {
    for (int t = 0; t < 3; ++t) {
      const int k = r.first + t;
      if (k >= 0 && k < set.m && r.c[t] != 0.0) return false;
    }
    return true;
  });
  return set;
}

// Travel time of x = w + delta with its gradient and (tridiagonal) Hessian
// with respect to the interior unknowns.
struct Model2 {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::VectorXd diag;  // H_kk
  Eigen::VectorXd off;   // H_{k,k+1}
};

Model2 second_order(const std::vector<double>& x, double h) {
  const int n = static_cast<int>(x.size());
  const int m = n - 2;
  Model2 out;
  out.grad = Eigen::VectorXd::Zero(m);
  out.diag = Eigen::VectorXd::Zero(m);
  out.off = Eigen::VectorXd::Zero(std::max(m - 1, 0));
  for (int i = 0; i + 1 < n; ++i) {
    const double p = x[i], q = x[i + 1];
    const double rp = std::sqrt(p), rq = std::sqrt(q);
    const double S = rp + rq;
    out.value += 2.0 * h / S;
    // Unknown index of grid points i and i+1.
    const int kp = i - 1, kq = i;
    if (kp >= 0 && kp < m) {
      out.grad[kp] += -h / (S * S * rp);
      out.diag[kp] += h * (1.0 / (S * S * S * p) + 0.5 / (S * S * p * rp));
    }
    if (kq >= 0 && kq < m) {
      out.grad[kq] += -h / (S * S * rq);
      out.diag[kq] += h * (1.0 / (S * S * S * q) + 0.5 / (S * S * q * rq));
    }
    if (kp >= 0 && kq < m) out.off[kp] += h / (S * S * S * rp * rq);
  }
  return out;
}

}  // namespace

InteriorPointResult interior_point_update(const LinearizedModel& model, const InteriorPointOptions& options) {
  const std::size_t n = model.n;
  InteriorPointResult res;
  res.delta.assign(n, 0.0);
  if (n < 3) {
    res.converged = true;
    return res;
  }
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (!(model.w[i] > 0.0)) return res;

  const RowSet set = build_rows(model);
  const int m = set.m;
  const int r = static_cast<int>(set.rows.size());
  double scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, model.w[i] + model.uB[i]);

  Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd s(r), lambda(r);
  std::vector<double> x(model.w.begin(), model.w.end());
  auto point = [&](const Eigen::VectorXd& zz) {
    for (int k = 0; k < m; ++k) x[k + 1] = model.w[k + 1] + zz[k];
    return second_order(x, model.h);
  };

  Model2 f = point(z);
  const double grad_scale = std::max(1.0, f.grad.lpNorm<Eigen::Infinity>());
  // Start slightly inside every row; rows active at w start with a small slack.
  const double s0 = 1e-4 * scale;
  for (int j = 0; j < r; ++j) {
    s[j] = std::max(set.rows[j].b, s0);
    lambda[j] = grad_scale / s[j] * 1e-4 * scale;
  }

  Eigen::VectorXd rd(m), rp(r), gz(r);
  auto residuals = [&]() {
    rd = f.grad;
    for (int j = 0; j < r; ++j) {
      const Row& row = set.rows[j];
      for (int t = 0; t < 3; ++t) {
        const int k = row.first + t;
        if (k >= 0 && k < m) rd[k] += row.c[t] * lambda[j];
      }
      gz[j] = set.apply(row, z);
      rp[j] = gz[j] + s[j] - row.b;
    }
  };

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::SparseMatrix<double> K(m, m);

  // Newton direction for a given complementarity target vector rc = S Lambda e - target.
  Eigen::VectorXd dz(m), ds(r), dl(r);
  auto direction = [&](const Eigen::VectorXd& rc) {
    // (H + G^T S^{-1} Lambda G) dz = -rd - G^T S^{-1} (-rc + Lambda rp)
    Eigen::VectorXd rhs = -rd;
    for (int j = 0; j < r; ++j) {
      const Row& row = set.rows[j];
      const double coef = (-rc[j] + lambda[j] * rp[j]) / s[j];
      for (int t = 0; t < 3; ++t) {
        const int k = row.first + t;
        if (k >= 0 && k < m) rhs[k] -= row.c[t] * coef;
      }
    }
    dz = solver.solve(rhs);
    if (solver.info() != Eigen::Success) return false;
    for (int j = 0; j < r; ++j) {
      ds[j] = -rp[j] - set.apply(set.rows[j], dz);
      dl[j] = (-rc[j] - lambda[j] * ds[j]) / s[j];
    }
    return true;
  };

  auto max_step = [&](const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
    double a = 1.0;
    for (int j = 0; j < v.size(); ++j)
      if (dv[j] < 0.0) a = std::min(a, -v[j] / dv[j]);
    return a;
  };
  auto max_step_x = [&](const Eigen::VectorXd& dzz) {
    double a = 1.0;
    for (int k = 0; k < m; ++k)
      if (dzz[k] < 0.0) a = std::min(a, -x[k + 1] / dzz[k]);
    return a;
  };

  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    res.iterations = it;
    residuals();
    const double mu = s.dot(lambda) / r;
    res.gap = mu;
    res.primal_residual = rp.lpNorm<Eigen::Infinity>();
    res.dual_residual = rd.lpNorm<Eigen::Infinity>();
    if (mu <= options.gap_tolerance * scale * grad_scale &&
        res.primal_residual <= options.residual_tolerance * scale &&
        res.dual_residual <= options.residual_tolerance * grad_scale) {
      res.converged = true;
      break;
    }
    // A vanishing gap with a residual stuck above tolerance does not recover.
    if (mu <= 1e-6 * options.gap_tolerance * scale * grad_scale) break;

    trip.clear();
    for (int k = 0; k < m; ++k) {
      trip.emplace_back(k, k, f.diag[k]);
      if (k + 1 < m) {
        trip.emplace_back(k, k + 1, f.off[k]);
        trip.emplace_back(k + 1, k, f.off[k]);
      }
    }
    for (int j = 0; j < r; ++j) {
      const Row& row = set.rows[j];
      const double d = lambda[j] / s[j];
      for (int a = 0; a < 3; ++a) {
        const int ka = row.first + a;
        if (ka < 0 || ka >= m || row.c[a] == 0.0) continue;
        for (int b = 0; b < 3; ++b) {
          const int kb = row.first + b;
          if (kb < 0 || kb >= m || row.c[b] == 0.0) continue;
          trip.emplace_back(ka, kb, d * row.c[a] * row.c[b]);
        }
      }
    }
    K.setFromTriplets(trip.begin(), trip.end());
    if (it == 0) solver.analyzePattern(K);
    solver.factorize(K);
    if (solver.info() != Eigen::Success) break;

    // Predictor.
    Eigen::VectorXd rc = s.cwiseProduct(lambda);
    if (!direction(rc)) break;
    const double ap = std::min(max_step(s, ds), max_step_x(dz));
    const double ad = max_step(lambda, dl);
    const double mu_aff = (s + ap * ds).dot(lambda + ad * dl) / r;
    const double sigma = std::pow(mu_aff / mu, 3.0);
    // Corrector.
    rc = s.cwiseProduct(lambda) + ds.cwiseProduct(dl) - Eigen::VectorXd::Constant(r, sigma * mu);
    if (!direction(rc)) break;
    const double alpha = options.step_fraction *
                         std::min({max_step(s, ds), max_step_x(dz), max_step(lambda, dl)});
    const double a = std::min(1.0, alpha);
    z += a * dz;
    s += a * ds;
    lambda += a * dl;
    f = point(z);
  }

  if (!res.converged) return res;
  for (int k = 0; k < m; ++k) res.delta[k + 1] = z[k];
  for (std::size_t i = 0; i < n; ++i) res.delta[i] = std::clamp(res.delta[i], model.lB[i], model.uB[i]);
  return res;
}

}  // namespace jerkplan
