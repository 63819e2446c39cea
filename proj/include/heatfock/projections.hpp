#pragma once

#include <cstdint>
#include <vector>

#include "heatfock/fock.hpp"
#include "heatfock/polynomial.hpp"

namespace heatfock {

/// Orthogonal projection of C^k onto the span of an orthonormal family.
class Projection {
 public:
  /// Columns of `family` must be orthonormal to 1e-12.
  explicit Projection(CMatrix family);

  /// span(e_1, ..., e_n) in C^k.
  static Projection coordinate(int k, int n);
  static Projection identity(int k) { return coordinate(k, k); }
  /// Span of `rank` orthonormal vectors from the QR factor of a complex
  /// Gaussian matrix.
  static Projection random(int k, int rank, std::uint64_t seed);

  int k() const { return static_cast<int>(family_.rows()); }
  int rank() const { return static_cast<int>(family_.cols()); }
  const CMatrix& family() const { return family_; }
  /// P = sum_j v_j v_j^*.
  const CMatrix& matrix() const { return matrix_; }

  CVector apply(const CVector& w) const { return matrix_ * w; }

 private:
  CMatrix family_;
  CMatrix matrix_;
};

/// (P w, c).
GroupElement pi_P(const Projection& p, const GroupElement& g);

/// (0, (omega(w, w') - omega(P w, P w')) / 2).
GroupElement gamma_defect(const GroupConfig& cfg, const Projection& p,
                          const CVector& w, const CVector& w2);

/// k^P(g) = pi_P k + Gamma_P(w, A) for k = (A, a).
AlgebraElement k_P(const GroupConfig& cfg, const Projection& p,
                   const AlgebraElement& k, const GroupElement& g);

/// Tensor whose entries are polynomials on G; the recursion for kappa_n
/// keeps its coefficients symbolic in g.
using PolyTensor = std::map<Word, Polynomial>;

/// kappa_1 = K_1, kappa_n = K_n (x) kappa_{n-1} + k_n~ kappa_{n-1}, with
/// K_j(g) = k_j^P(g) and left tensor multiplication. `directions` lists
/// k_1 .. k_n.
PolyTensor kappa_symbolic(const ConfigPtr& cfg, const Projection& p,
                          const std::vector<AlgebraElement>& directions);

/// kappa_n evaluated at the identity, as a finite-rank tensor of maxrank n.
FockTensor kappa(const ConfigPtr& cfg, const Projection& p,
                 const std::vector<AlgebraElement>& directions);

/// Pairing <alpha, kappa>: sum over words of alpha(word) * kappa(word).
cplx pair(const FockTensor& alpha, const FockTensor& kappa);

struct PullbackResult {
  FockTensor tensor;  // taylor(u o pi_P), computed directly
  double route_gap;   // max relative disagreement with the kappa route
};

PullbackResult pullback_taylor_checked(const Polynomial& u, const Projection& p,
                                       int maxrank = -1);

/// Taylor tensor of u o pi_P. Computed directly from the composed
/// polynomial and again as <taylor(u), kappa_n(e)> for every basis word;
/// throws ConsistencyError if the two disagree beyond 1e-10 relative.
/// maxrank < 0 selects the graded degree of u.
FockTensor pullback_taylor(const Polynomial& u, const Projection& p, int maxrank = -1);

struct ConvergenceRow {
  int projection_rank;
  int tensor_rank;
  double error;         // ||taylor(u)_n - pullback_taylor(u, P_N)_n||_n
  bool non_increasing;  // error <= previous N's error + 1e-12
};

/// Errors for the coordinate projections P_N, N in `ranks` (increasing).
std::vector<ConvergenceRow> projection_convergence(const Polynomial& u,
                                                   const std::vector<int>& ranks);

}  // namespace heatfock
