#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "heatfock/group.hpp"

namespace heatfock {

/// Sparse complex polynomial in w_1..w_k, c_1..c_d and their conjugates.
///
/// Exponent vectors are laid out as [w | c | wbar | cbar]. Coefficients with
/// modulus below kCleanupThreshold are dropped after every operation, so no
/// stored coefficient is zero. Holomorphic iff all conjugate exponents vanish.
class Polynomial {
 public:
  using Monomial = std::vector<std::uint8_t>;
  using Terms = std::map<Monomial, cplx>;

  enum class Var { W, C, WBar, CBar };

  static constexpr double kCleanupThreshold = 1e-14;

  explicit Polynomial(ConfigPtr cfg);

  static Polynomial constant(ConfigPtr cfg, cplx value);
  /// Coordinate variable; `index` is 0-based.
  static Polynomial variable(ConfigPtr cfg, Var kind, int index);

  const ConfigPtr& config() const { return cfg_; }
  const Terms& terms() const { return terms_; }
  int num_vars() const { return 2 * cfg_->dim(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_holomorphic() const;
  /// Weighted degree: w, wbar count 1; c, cbar count 2. Zero polynomial: -1.
  int graded_degree() const;
  cplx constant_term() const;
  cplx coefficient(const Monomial& m) const;

  cplx eval(const GroupElement& g) const;

  Polynomial conj() const;

  /// Adds coef * monomial; drops the entry if it cancels.
  void add_term(const Monomial& m, cplx coef);

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(cplx scalar);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) {
    return a += b;
  }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) {
    return a -= b;
  }
  friend Polynomial operator*(Polynomial a, cplx s) { return a *= s; }
  friend Polynomial operator*(cplx s, Polynomial a) { return a *= s; }
  friend Polynomial operator-(Polynomial a) { return a *= -1.0; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  /// Literal in the syntax accepted by parse_polynomial.
  std::string to_string() const;

  /// Max |coefficient difference| against `other`.
  double distance(const Polynomial& other) const;

 private:
  void require_same_config(const Polynomial& other) const;
  void check_degree_cap() const;

  ConfigPtr cfg_;
  Terms terms_;
};

/// |f|^2 = f * conj(f).
Polynomial abs_sq(const Polynomial& f);

/// Left-invariant derivative (h~ F)(g) = d/dt F(g e^{th}) at t = 0, i.e.
/// sum_j A_j d/dw_j + conj(A_j) d/dwbar_j + v_m d/dc_m + conj(v_m) d/dcbar_m
/// with v(w) = a + omega(w, A) / 2 for h = (A, a).
Polynomial lid(const Polynomial& f, const AlgebraElement& h);

/// L = sum over the real orthonormal frame {e_j, i e_j, f_m, i f_m} of h~^2.
Polynomial apply_L(const Polynomial& f);

/// Exact heat-kernel expectation: sum_m (T/4)^m / m! (L^m F)(e).
/// The sum terminates since each h~ lowers the graded degree.
cplx heat_expectation(const Polynomial& f, double T);

/// Replaces each variable by a polynomial image (same config as `f`);
/// `images` is indexed like exponent vectors.
Polynomial substitute(const Polynomial& f, const std::vector<Polynomial>& images);

/// g -> f(M w, c); conjugate variables follow as conj(M) wbar.
Polynomial substitute_w(const Polynomial& f, const CMatrix& m);

/// g -> f(h * g).
Polynomial left_translate(const Polynomial& f, const GroupElement& h);

/// Parses literals such as "(1.5-2i) * w1^2 * cbar1 + c1". Variables are
/// w<j>, c<m>, wbar<j>, cbar<m> with 1-based indices; `i` is the imaginary
/// unit. Throws ConfigError on malformed input.
Polynomial parse_polynomial(const std::string& text, ConfigPtr cfg);

}  // namespace heatfock
