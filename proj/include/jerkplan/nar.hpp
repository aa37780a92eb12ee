#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace jerkplan {

/// The tridiagonal system of one NAR piece: unknowns x_{s+1..j-1} with every
/// NAR row held as an equality, x_s = y_s and x_j = y_j moved to the
/// right-hand side. Row k (global index s+1+k) reads
///   x_k - eta_k x_{k-1} - eta_k x_{k+1} = bN_k.
struct NarSegment {
  std::size_t s = 0;
  std::size_t j = 0;
  std::vector<double> a;  ///< sub-diagonal, -eta (a[0] unused)
  std::vector<double> b;  ///< unit diagonal
  std::vector<double> c;  ///< super-diagonal, -eta (c[m-1] unused)
  std::vector<double> q;  ///< bN with eta_{s+1} y_s and eta_{j-1} y_j folded in

  std::size_t rows() const { return b.size(); }
  static NarSegment build(std::span<const double> y, std::span<const double> eta,
                          std::span<const double> bN, std::size_t s, std::size_t j);
};

enum class ScanVerdict { kFeasibleStrict, kReduceJ };

struct ScanResult {
  ScanVerdict verdict = ScanVerdict::kFeasibleStrict;
  /// Local index of the first violation met scanning from the last row
  /// backwards (meaningless when feasible).
  std::size_t index = 0;
};

/// Checks floor <= xbar_k < y_k for k = m-1 down to 0 and stops at the first
/// violation. y holds the bounds of the segment's unknowns only.
ScanResult feasibility_scan(std::span<const double> xbar, std::span<const double> y,
                            double floor = 0.0);

struct NarCertificate {
  bool optimal = false;
  std::vector<double> lambda;  ///< solution of A^T lambda = 1 when it exists
};

/// Tolerance on negative certificate entries.
inline constexpr double kCertificateTolerance = 1e-9;

/// Solves A^T lambda = 1 with the Thomas algorithm. The piece is accepted when
/// the solve succeeds with lambda >= -kCertificateTolerance.
NarCertificate optimality_certificate(const NarSegment& segment);

struct NarOptions {
  /// Skip several values of j at once using products of the back-substitution
  /// coefficients; off gives plain j-1 stepping.
  bool skip = true;
  /// Known lower bound on the component-wise maximum used to reject candidate
  /// pieces early; 0 is valid whenever y >= 0 and bN >= 0.
  double floor = 0.0;
};

struct NarStats {
  std::size_t segments = 0;
  std::size_t candidates = 0;    ///< values of j whose system was back-substituted
  std::size_t certificates = 0;  ///< transposed solves performed
  std::size_t skipped = 0;       ///< values of j bypassed by the skip rule
};

/// Component-wise maximum of {x : x <= y, x_i - eta_i (x_{i-1} + x_{i+1}) <= bN_i
/// for every interior i with active[i] != 0}. eta, bN and active have n
/// entries (endpoint entries unused); an empty `active` means all rows active.
std::vector<double> solve_nar(std::span<const double> y, std::span<const double> eta,
                              std::span<const double> bN,
                              std::span<const unsigned char> active = {},
                              const NarOptions& options = {}, NarStats* stats = nullptr);

/// In-place variant: x holds y on entry and the solution on exit.
void solve_nar_inplace(std::vector<double>& x, std::span<const double> eta,
                       std::span<const double> bN, std::span<const unsigned char> active,
                       const NarOptions& options, NarStats* stats = nullptr);

/// Floor value that disables the early lower-bound rejection.
inline constexpr double kNoFloor = -std::numeric_limits<double>::infinity();

}  // namespace jerkplan
