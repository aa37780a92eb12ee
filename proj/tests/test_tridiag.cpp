#include <cmath>
#include <vector>

#include "doctest.h"
#include "jerkplan/rng.hpp"
#include "jerkplan/tridiag.hpp"
#include "oracle.hpp"

using namespace jerkplan;

namespace {

struct System {
  std::vector<double> a, b, c, d;
};

System random_dominant(SplitMix64& rng, std::size_t m) {
  System s;
  s.a.assign(m, 0.0);
  s.b.assign(m, 0.0);
  s.c.assign(m, 0.0);
  s.d.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (i > 0) s.a[i] = rng.uniform(-1.0, 1.0);
    if (i + 1 < m) s.c[i] = rng.uniform(-1.0, 1.0);
    s.b[i] = (std::abs(s.a[i]) + std::abs(s.c[i]) + rng.uniform(0.1, 1.0)) * (rng.below(2) ? 1.0 : -1.0);
    s.d[i] = rng.uniform(-10.0, 10.0);
  }
  return s;
}

double max_abs_diff(const std::vector<double>& x, const std::vector<double>& y) {
  double e = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) e = std::max(e, std::abs(x[i] - y[i]));
  return e;
}

}  // namespace

TEST_CASE("Thomas solve examples") {
  const std::vector<double> ones{1.0, 1.0, 1.0, 1.0}, zeros(4, 0.0), d{3.0, -1.0, 2.5, 0.0};
  CHECK(*thomas_solve(zeros, ones, zeros, d) == d);

  const auto x = thomas_solve(std::vector<double>{0.0, -1.0, -1.0}, std::vector<double>{2.0, 2.0, 2.0},
                              std::vector<double>{-1.0, -1.0, 0.0}, std::vector<double>{1.0, 0.0, 1.0});
  REQUIRE(x);
  for (double v : *x) CHECK(v == doctest::Approx(1.0));

  const auto y = thomas_solve(std::vector<double>{0.0, 0.0}, std::vector<double>{2.0, 4.0},
                              std::vector<double>{0.0, 0.0}, std::vector<double>{2.0, 4.0});
  REQUIRE(y);
  CHECK((*y)[0] == doctest::Approx(1.0));
  CHECK((*y)[1] == doctest::Approx(1.0));
}

TEST_CASE("pivot breakdown is reported") {
  CHECK_FALSE(thomas_solve(std::vector<double>{0.0, 1.0}, std::vector<double>{1.0, 1.0},
                           std::vector<double>{1.0, 0.0}, std::vector<double>{1.0, 1.0}));
  const TriFactor f = TriFactor::factor(std::vector<double>{0.0, 1.0, 1.0}, std::vector<double>{1.0, 1.0, 3.0},
                                        std::vector<double>{1.0, 1.0, 0.0});
  CHECK_FALSE(f.ok());
  CHECK(f.valid_rows() == 1);
}

TEST_CASE("Thomas solve matches dense elimination") {
  SplitMix64 rng(17);
  for (int t = 0; t < 200; ++t) {
    const System s = random_dominant(rng, 1 + rng.below(120));
    const auto x = thomas_solve(s.a, s.b, s.c, s.d);
    REQUIRE(x);
    const auto ref = oracle::dense_tridiagonal_solve(s.a, s.b, s.c, s.d);
    double scale = 0.0;
    for (double v : ref) scale = std::max(scale, std::abs(v));
    CHECK(max_abs_diff(*x, ref) <= 1e-10 * std::max(scale, 1e-300));
  }
}

TEST_CASE("factor once, back-solve several right-hand sides") {
  SplitMix64 rng(3);
  const System s = random_dominant(rng, 40);
  const TriFactor f = TriFactor::factor(s.a, s.b, s.c);
  REQUIRE(f.ok());
  for (int k = 0; k < 2; ++k) {
    std::vector<double> d(40);
    for (double& v : d) v = rng.uniform(-5.0, 5.0);
    CHECK(max_abs_diff(f.back_solve(d), *thomas_solve(s.a, s.b, s.c, d)) <= 1e-12);
  }
  CHECK(f.prefix_product(7, 7) == 1.0);
  CHECK(f.influence(7, 7) == 1.0);
}

TEST_CASE("shrinking the system by one row matches the skip update") {
  // Dropping the last unknown r and fixing it at a value v moves every
  // earlier unknown by influence(i, r) (v - x_r).
  SplitMix64 rng(8);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = 3 + rng.below(30);
    System s;
    s.a.assign(m, 0.0);
    s.b.assign(m, 1.0);
    s.c.assign(m, 0.0);
    s.d.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double eta = rng.uniform(0.2, 0.5);
      if (i > 0) s.a[i] = -eta;
      if (i + 1 < m) s.c[i] = -eta;
      s.d[i] = rng.uniform(0.0, 3.0);
    }
    const TriFactor f = TriFactor::factor(s.a, s.b, s.c);
    REQUIRE(f.ok());
    const std::vector<double> full = f.back_solve(s.d);
    for (std::size_t r = m - 1; r >= 1; --r) {
      const double v = full[r] + rng.uniform(-2.0, 2.0);
      // Fresh solve of rows 0..r-1 with x_r = v moved to the right-hand side.
      std::vector<double> a(s.a.begin(), s.a.begin() + r), b(s.b.begin(), s.b.begin() + r),
          c(s.c.begin(), s.c.begin() + r), d(s.d.begin(), s.d.begin() + r);
      d[r - 1] -= s.c[r - 1] * v;
      c[r - 1] = 0.0;
      const auto fresh = thomas_solve(a, b, c, d);
      REQUIRE(fresh);
      for (std::size_t i = 0; i < r; ++i)
        CHECK(std::abs(full[i] + f.influence(i, r) * (v - full[r]) - (*fresh)[i]) <= 1e-12);
      if (r == 1) break;
    }
  }
}
