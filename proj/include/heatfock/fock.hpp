#pragma once

#include <map>
#include <vector>

#include "heatfock/polynomial.hpp"

namespace heatfock {

/// A tuple of basis indices in [0, k + d): indices below k are (e_j, 0),
/// the rest (0, f_m).
using Word = std::vector<int>;

/// Finite-rank element alpha = (alpha_0, ..., alpha_N) of the dual tensor
/// algebra, stored sparsely per rank. alpha_0 lives under the empty word.
class FockTensor {
 public:
  using Component = std::map<Word, cplx>;

  FockTensor(ConfigPtr cfg, int maxrank);

  const ConfigPtr& config() const { return cfg_; }
  int maxrank() const { return static_cast<int>(ranks_.size()) - 1; }
  int dim() const { return cfg_->dim(); }

  cplx get(const Word& word) const;
  void set(const Word& word, cplx value);
  void add(const Word& word, cplx value);

  const Component& component(int rank) const { return ranks_.at(rank); }
  cplx scalar() const { return get({}); }
  bool is_zero() const;
  /// Largest rank holding a nonzero entry; -1 for the zero tensor.
  int top_rank() const;

  FockTensor& operator+=(const FockTensor& other);
  FockTensor& operator-=(const FockTensor& other);
  FockTensor& operator*=(cplx s);
  friend FockTensor operator+(FockTensor a, const FockTensor& b) { return a += b; }
  friend FockTensor operator-(FockTensor a, const FockTensor& b) { return a -= b; }
  friend FockTensor operator*(FockTensor a, cplx s) { return a *= s; }

  /// Max |entry difference| over all ranks.
  double distance(const FockTensor& other) const;

 private:
  void check_word(const Word& word) const;
  void require_compatible(const FockTensor& other) const;

  ConfigPtr cfg_;
  std::vector<Component> ranks_;
};

/// Graded degree of a word: 1 per non-central index, 2 per central index.
int word_degree(const Word& word, int k);

/// <alpha, h_1 x ... x h_n> = (h_1~ ... h_n~ f)(e), h_n~ acting first.
/// maxrank < 0 selects the graded degree of f.
FockTensor taylor(const Polynomial& f, int maxrank = -1);

/// g -> sum_n <alpha_n, g^{x n}> / n!.
Polynomial inverse_taylor(const FockTensor& alpha);

/// ||alpha_n||_n^2 for one rank.
double rank_norm_sq(const FockTensor& alpha, int rank);

/// sum_n T^n / n! ||alpha_n||_n^2.
double fock_norm_sq(const FockTensor& alpha, double T);

/// sum_n T^n / n! <alpha_n, beta_n>_n, linear in alpha.
cplx fock_inner(const FockTensor& alpha, const FockTensor& beta, double T);

/// max |<alpha, u (h x k - k x h - [h, k]) v>| over basis words u, v and
/// basis pairs (h, k) with |u| + |v| + 2 <= maxrank. Zero certifies that
/// alpha annihilates the ideal up to its maxrank only.
double j0_residual(const FockTensor& alpha);

/// alpha o Phi_theta: an entry whose word has degree l picks up e^{i l theta}.
FockTensor grading_pullback(const FockTensor& alpha, double theta);

/// Fejer average: degree-l entries weighted by max(0, 1 - l / n).
FockTensor fejer_truncate(const FockTensor& alpha, int n);

}  // namespace heatfock
