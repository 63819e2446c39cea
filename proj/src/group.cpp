#include "heatfock/group.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "heatfock/rng.hpp"

namespace heatfock {

GroupConfig::GroupConfig(int k, int d, std::vector<CMatrix> omega,
                         int degree_cap)
    : k_(k), d_(d), degree_cap_(degree_cap), omega_(std::move(omega)) {
  if (k_ <= 0 || d_ <= 0) {
    throw ConfigError("config: k and d must be positive");
  }
  if (degree_cap_ <= 0) {
    throw ConfigError("config: degree_cap must be positive");
  }
  if (static_cast<int>(omega_.size()) != d_) {
    std::ostringstream msg;
    msg << "config: omega must hold d = " << d_ << " matrices, got "
        << omega_.size();
    throw ConfigError(msg.str());
  }
  for (int m = 0; m < d_; ++m) {
    const CMatrix& om = omega_[m];
    if (om.rows() != k_ || om.cols() != k_) {
      std::ostringstream msg;
      msg << "config: omega[" << m << "] must be " << k_ << "x" << k_;
      throw ConfigError(msg.str());
    }
    for (int i = 0; i < k_; ++i) {
      for (int j = i; j < k_; ++j) {
        if (om(i, j) != -om(j, i)) {
          std::ostringstream msg;
          msg << "config: omega[" << m << "] is not skew-symmetric at (" << i
              << "," << j << ")";
          throw ConfigError(msg.str());
        }
      }
    }
  }
}

GroupConfig GroupConfig::heisenberg() {
  CMatrix om = CMatrix::Zero(2, 2);
  om(0, 1) = 1.0;
  om(1, 0) = -1.0;
  return GroupConfig(2, 1, {om});
}

GroupConfig GroupConfig::random(int k, int d, std::uint64_t seed,
                                int degree_cap) {
  InputRng rng(seed);
  std::vector<CMatrix> omega;
  for (int m = 0; m < d; ++m) {
    CMatrix x(k, k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) x(i, j) = rng.complex_normal();
    }
    CMatrix skew = CMatrix::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        const cplx v = 0.5 * (x(i, j) - x(j, i));
        skew(i, j) = v;
        skew(j, i) = -v;
      }
    }
    omega.push_back(std::move(skew));
  }
  return GroupConfig(k, d, std::move(omega), degree_cap);
}

CVector GroupConfig::omega_form(const CVector& w1, const CVector& w2) const {
  CVector out(d_);
  for (int m = 0; m < d_; ++m) {
    out(m) = w1.transpose() * omega_[m] * w2;
  }
  return out;
}

GroupElement GroupConfig::identity() const {
  return {CVector::Zero(k_), CVector::Zero(d_)};
}

void GroupConfig::check(const GroupElement& g) const {
  if (g.w.size() != k_ || g.c.size() != d_) {
    std::ostringstream msg;
    msg << "config: element has dimensions (" << g.w.size() << ","
        << g.c.size() << "), expected (" << k_ << "," << d_ << ")";
    throw ConfigError(msg.str());
  }
}

GroupElement GroupConfig::mul(const GroupElement& g1,
                              const GroupElement& g2) const {
  check(g1);
  check(g2);
  return {g1.w + g2.w, g1.c + g2.c + 0.5 * omega_form(g1.w, g2.w)};
}

GroupElement GroupConfig::inverse(const GroupElement& g) const {
  check(g);
  return {-g.w, -g.c};
}

AlgebraElement GroupConfig::bracket(const AlgebraElement& h1,
                                    const AlgebraElement& h2) const {
  check(h1);
  check(h2);
  return {CVector::Zero(k_), omega_form(h1.w, h2.w)};
}

AlgebraElement GroupConfig::basis(int index) const {
  if (index < 0 || index >= dim()) {
    throw ConfigError("config: basis index out of range");
  }
  AlgebraElement h = identity();
  if (index < k_) {
    h.w(index) = 1.0;
  } else {
    h.c(index - k_) = 1.0;
  }
  return h;
}

namespace {

// Top singular value and vectors of a small complex matrix.
struct TopSingular {
  double value;
  CVector left;
  CVector right;
};

TopSingular top_singular(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.singularValues()(0), svd.matrixU().col(0), svd.matrixV().col(0)};
}

}  // namespace

double GroupConfig::omega_uniform_norm(int restarts, std::uint64_t seed) const {
  if (d_ == 1) {
    Eigen::JacobiSVD<CMatrix> svd(omega_[0]);
    return svd.singularValues()(0);
  }
  InputRng rng(seed);
  double best = 0.0;
  for (int r = 0; r < std::max(1, restarts); ++r) {
    CVector w1(k_);
    for (int i = 0; i < k_; ++i) w1(i) = rng.complex_normal();
    w1.normalize();
    double value = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      // w2 -> omega(w1, w2) is linear with rows w1^T Omega_m.
      CMatrix rows(d_, k_);
      for (int m = 0; m < d_; ++m) rows.row(m) = w1.transpose() * omega_[m];
      const TopSingular s2 = top_singular(rows);
      const CVector w2 = s2.right;
      // w1 -> omega(w1, w2) has rows (Omega_m w2)^T.
      for (int m = 0; m < d_; ++m) rows.row(m) = (omega_[m] * w2).transpose();
      const TopSingular s1 = top_singular(rows);
      w1 = s1.right;
      const double next = s1.value;
      if (next - value <= 1e-15 * std::max(1.0, next)) {
        value = std::max(value, next);
        break;
      }
      value = next;
    }
    best = std::max(best, value);
  }
  return best;
}

double GroupConfig::k_omega() const {
  CMatrix m = CMatrix::Zero(k_, k_);
  for (const CMatrix& om : omega_) m += om.adjoint() * om;
  if (m.norm() == 0.0) return 0.0;
  // Deterministic start with weight on every coordinate.
  CVector v(k_);
  for (int i = 0; i < k_; ++i) v(i) = cplx(1.0 + 0.1 * i, 0.05 * (i + 1));
  v.normalize();
  double lambda = 0.0;
  for (int iter = 0; iter < 100000; ++iter) {
    CVector next = m * v;
    const double norm = next.norm();
    if (norm == 0.0) return 0.0;
    next /= norm;
    const double rayleigh = std::real(next.dot(m * next));
    v = next;
    if (std::abs(rayleigh - lambda) <= 1e-12 * std::abs(rayleigh)) {
      lambda = rayleigh;
      break;
    }
    lambda = rayleigh;
  }
  return -lambda;
}

double GroupConfig::omega_hs_norm_sq() const {
  double total = 0.0;
  for (const CMatrix& om : omega_) total += om.squaredNorm();
  return total;
}

bool GroupConfig::operator==(const GroupConfig& other) const {
  if (k_ != other.k_ || d_ != other.d_ || degree_cap_ != other.degree_cap_) {
    return false;
  }
  for (int m = 0; m < d_; ++m) {
    if (omega_[m] != other.omega_[m]) return false;
  }
  return true;
}

double rho_sq(const GroupElement& g) { return g.w.squaredNorm() + g.c.norm(); }

double algebra_norm(const GroupElement& g) {
  return std::sqrt(g.w.squaredNorm() + g.c.squaredNorm());
}

GroupElement make_element(std::vector<cplx> w, std::vector<cplx> c) {
  GroupElement g{CVector(static_cast<Eigen::Index>(w.size())),
                 CVector(static_cast<Eigen::Index>(c.size()))};
  for (std::size_t i = 0; i < w.size(); ++i) g.w(i) = w[i];
  for (std::size_t i = 0; i < c.size(); ++i) g.c(i) = c[i];
  return g;
}

}  // namespace heatfock
