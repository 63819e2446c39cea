#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace heatfock {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Invalid or inconsistent structural input (dimensions, skewness, files).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside an operation's domain (non-holomorphic input, T <= 0, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two computations that must agree did not; signals a bug, not bad input.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A point (w, c) of G = C^k x C^d. The Lie algebra has the same carrier,
/// so AlgebraElement is an alias.
struct GroupElement {
  CVector w;
  CVector c;
};
using AlgebraElement = GroupElement;

/// Dimensions and skew forms Omega_m of omega(w, w')_m = w^T Omega_m w'.
///
/// Immutable after construction. Every Omega_m is validated to be exactly
/// skew-symmetric (entry-wise, zero diagonal).
class GroupConfig {
 public:
  static constexpr int kDefaultDegreeCap = 16;

  GroupConfig(int k, int d, std::vector<CMatrix> omega,
              int degree_cap = kDefaultDegreeCap);

  /// k = 2, d = 1, Omega = [[0, 1], [-1, 0]].
  static GroupConfig heisenberg();
  /// Omega_m = (X - X^T) / 2 with X complex Gaussian, seeded.
  static GroupConfig random(int k, int d, std::uint64_t seed,
                            int degree_cap = kDefaultDegreeCap);

  int k() const { return k_; }
  int d() const { return d_; }
  /// Number of basis directions of the Lie algebra: (e_j, 0) then (0, f_m).
  int dim() const { return k_ + d_; }
  int degree_cap() const { return degree_cap_; }
  const std::vector<CMatrix>& omega() const { return omega_; }

  CVector omega_form(const CVector& w1, const CVector& w2) const;

  GroupElement identity() const;
  GroupElement mul(const GroupElement& g1, const GroupElement& g2) const;
  GroupElement inverse(const GroupElement& g) const;
  AlgebraElement bracket(const AlgebraElement& h1,
                         const AlgebraElement& h2) const;

  /// Unit basis direction with index in [0, k + d).
  AlgebraElement basis(int index) const;

  /// sup ||omega(w1, w2)|| over unit w1, w2. Exact for d = 1 (largest
  /// singular value of Omega_1); for d > 1 the best value found by
  /// alternating maximization over `restarts` random starts, which is a
  /// certified lower bound.
  double omega_uniform_norm(int restarts = 32, std::uint64_t seed = 7) const;

  /// k(omega) = -lambda_max(sum_m Omega_m^* Omega_m) by power iteration.
  double k_omega() const;

  /// Hilbert-Schmidt norm squared, sum_m ||Omega_m||_F^2.
  double omega_hs_norm_sq() const;

  void check(const GroupElement& g) const;

  bool operator==(const GroupConfig& other) const;

 private:
  int k_;
  int d_;
  int degree_cap_;
  std::vector<CMatrix> omega_;
};

using ConfigPtr = std::shared_ptr<const GroupConfig>;

inline ConfigPtr make_config(GroupConfig cfg) {
  return std::make_shared<const GroupConfig>(std::move(cfg));
}

/// ||w||^2 + ||c||. The central part enters at first power.
double rho_sq(const GroupElement& g);

/// sqrt(||w||^2 + ||c||^2), the norm of g viewed in the Lie algebra.
double algebra_norm(const GroupElement& g);

GroupElement make_element(std::vector<cplx> w, std::vector<cplx> c);

}  // namespace heatfock
