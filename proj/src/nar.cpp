#include "jerkplan/nar.hpp"

#include <algorithm>
#include <stdexcept>

#include "jerkplan/tridiag.hpp"

namespace jerkplan {

NarSegment NarSegment::build(std::span<const double> y, std::span<const double> eta,
                             std::span<const double> bN, std::size_t s, std::size_t j) {
  if (j <= s + 1 || j >= y.size()) throw std::invalid_argument("NarSegment: need s+1 < j < n");
  NarSegment seg;
  seg.s = s;
  seg.j = j;
  const std::size_t m = j - s - 1;
  seg.a.assign(m, 0.0);
  seg.b.assign(m, 1.0);
  seg.c.assign(m, 0.0);
  seg.q.assign(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = s + 1 + k;
    if (k > 0) seg.a[k] = -eta[i];
    if (k + 1 < m) seg.c[k] = -eta[i];
    seg.q[k] = bN[i];
  }
  seg.q[0] += eta[s + 1] * y[s];
  seg.q[m - 1] += eta[j - 1] * y[j];
  return seg;
}

ScanResult feasibility_scan(std::span<const double> xbar, std::span<const double> y,
                            double floor) {
  if (xbar.size() != y.size()) throw std::invalid_argument("feasibility_scan: size mismatch");
  for (std::size_t k = xbar.size(); k-- > 0;)
    if (xbar[k] < floor || xbar[k] >= y[k]) return {ScanVerdict::kReduceJ, k};
  return {};
}

NarCertificate optimality_certificate(const NarSegment& segment) {
  const std::size_t m = segment.rows();
  // Transpose of a tridiagonal matrix swaps the off-diagonals with a shift.
  std::vector<double> at(m, 0.0), ct(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    if (k > 0) at[k] = segment.c[k - 1];
    if (k + 1 < m) ct[k] = segment.a[k + 1];
  }
  const std::vector<double> ones(m, 1.0);
  NarCertificate cert;
  auto lambda = thomas_solve(at, segment.b, ct, ones);
  if (!lambda) return cert;
  cert.lambda = std::move(*lambda);
  cert.optimal = std::all_of(cert.lambda.begin(), cert.lambda.end(),
                             [](double v) { return v >= -kCertificateTolerance; });
  return cert;
}

namespace {

// Solves the NAR piece that starts at s (x[s] already final) and whose rows
// s+1..t-1 are all active; x[t] is an upper-bound point. Writes x[s+1..j-1]
// and returns j.
std::size_t solve_piece(std::vector<double>& x, std::span<const double> eta,
                        std::span<const double> bN, std::size_t s, std::size_t t,
                        const NarOptions& options, NarStats* stats,
                        std::vector<double>& xbar) {
  const std::size_t m = t - s - 1;
  if (m == 0) return t;

  std::vector<double> a(m, 0.0), b(m, 1.0), c(m, 0.0), d(m);
  std::vector<double> at(m, 0.0), ct(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = s + 1 + k;
    d[k] = bN[i];
    if (k > 0) {
      a[k] = -eta[i];
      at[k] = -eta[i - 1];
    }
    if (k + 1 < m) {
      c[k] = -eta[i];
      ct[k] = -eta[i + 1];
    }
  }
  d[0] += eta[s + 1] * x[s];

  const TriFactor fa = TriFactor::factor(a, b, c);
  const TriFactor ft = TriFactor::factor(at, b, ct);
  const std::vector<double> g = fa.eliminate(d, fa.valid_rows());
  const std::vector<double> ones(m, 1.0);
  const std::vector<double> gt = ft.eliminate(ones, ft.valid_rows());
  xbar.resize(m);

  std::size_t j = t;
  while (j > s + 1) {
    std::size_t last = j - s - 2;  // local index of the last unknown
    if (last >= fa.valid_rows()) {
      // Breakdown at row valid_rows(): every system containing it is unusable.
      j = s + 1 + fa.valid_rows();
      continue;
    }
    if (stats) ++stats->candidates;

    // Backward phase with early feasibility abort.
    bool violated = false;
    std::size_t bad = 0;
    for (std::size_t k = last + 1; k-- > 0;) {
      const std::size_t i = s + 1 + k;
      double v = g[k];
      if (k == last) v += eta[j - 1] * x[j];
      v /= fa.pivot(k);
      if (k < last) v -= fa.psi(k) * xbar[k + 1];
      xbar[k] = v;
      if (v < options.floor || v >= x[i]) {
        violated = true;
        bad = k;
        break;
      }
    }

    if (violated) {
      std::size_t next = s + 1 + bad;  // fall back: fix x at the violating index
      if (options.skip) {
        // xbar_bad for a shorter system ending at local r (x_{s+1+r} := y)
        // is xbar_bad + G(bad, r) (y_r - xbar_r).
        const std::size_t gi = s + 1 + bad;
        double gain = 1.0;
        for (std::size_t r = bad + 1; r <= last; ++r) {
          gain *= -fa.psi(r - 1);
          const std::size_t gr = s + 1 + r;
          const double moved = xbar[bad] + gain * (x[gr] - xbar[r]);
          if (!(moved < options.floor || moved >= x[gi])) next = gr;
        }
        if (stats) stats->skipped += (j - 1) - next;
      } else {
        next = j - 1;
      }
      j = next;
      continue;
    }

    // Optimality certificate A^T lambda = 1, reusing the transposed forward phase.
    if (stats) ++stats->certificates;
    bool certified = last < ft.valid_rows();
    if (certified) {
      double lam = gt[last] / ft.pivot(last);
      certified = lam >= -kCertificateTolerance;
      for (std::size_t k = last; certified && k-- > 0;) {
        lam = gt[k] / ft.pivot(k) - ft.psi(k) * lam;
        certified = lam >= -kCertificateTolerance;
      }
    }
    if (certified) break;
    j -= 1;
  }

  for (std::size_t i = s + 1; i < j; ++i) x[i] = xbar[i - s - 1];
  return j;
}

}  // namespace

void solve_nar_inplace(std::vector<double>& x, std::span<const double> eta,
                       std::span<const double> bN, std::span<const unsigned char> active,
                       const NarOptions& options, NarStats* stats) {
  const std::size_t n = x.size();
  if (eta.size() != n || bN.size() != n) throw std::invalid_argument("solve_nar: eta/bN must have n entries");
  if (!active.empty() && active.size() != n) throw std::invalid_argument("solve_nar: mask must have n entries");
  if (n < 3) return;
  const auto row_active = [&](std::size_t i) { return active.empty() || active[i] != 0; };

  std::vector<double> xbar;
  xbar.reserve(n);
  std::size_t s = 0;
  while (s + 1 < n) {
    // The piece ends at the first masked row or at the final point: an
    // unconstrained point only appears in neighbouring rows with a
    // nonpositive coefficient, so its maximum sits on its upper bound.
    std::size_t t = s + 1;
    while (t + 1 < n && row_active(t)) ++t;
    if (stats) ++stats->segments;
    s = solve_piece(x, eta, bN, s, t, options, stats, xbar);
  }
}

std::vector<double> solve_nar(std::span<const double> y, std::span<const double> eta,
                              std::span<const double> bN, std::span<const unsigned char> active,
                              const NarOptions& options, NarStats* stats) {
  std::vector<double> x(y.begin(), y.end());
  solve_nar_inplace(x, eta, bN, active, options, stats);
  return x;
}

}  // namespace jerkplan
