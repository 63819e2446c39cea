#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "heatfock/polynomial.hpp"
#include "heatfock/random_inputs.hpp"

using namespace heatfock;

namespace {

ConfigPtr heis() { return make_config(GroupConfig::heisenberg()); }

Polynomial P(const std::string& s, const ConfigPtr& cfg) { return parse_polynomial(s, cfg); }

// Directional derivative by central differences along t -> g exp(t h),
// evaluated on real t; exact for polynomials up to rounding since the
// difference quotient of a cubic-free remainder is controlled by h^2.
cplx numeric_lid(const Polynomial& f, const GroupElement& g, const AlgebraElement& h) {
  const GroupConfig& cfg = *f.config();
  const double eps = 1e-4;
  auto at = [&](double t) {
    AlgebraElement th = h;
    th.w *= t;
    th.c *= t;
    return f.eval(cfg.mul(g, th));
  };
  return (8.0 * (at(eps) - at(-eps)) - (at(2 * eps) - at(-2 * eps))) / (12.0 * eps);
}

}  // namespace

TEST_CASE("parse and print round trip") {
  const auto cfg = heis();
  const auto f = P("(1.5-2i) * w1^2 * cbar1 + c1 - 3 + 2i*wbar2", cfg);
  CHECK(f.terms().size() == 4);
  CHECK_FALSE(f.is_holomorphic());
  CHECK(f.graded_degree() == 4);
  const auto g = P(f.to_string(), cfg);
  CHECK(f.distance(g) == 0.0);
  CHECK(P("w1*w2 - w2*w1", cfg).is_zero());
  CHECK_THROWS_AS(P("w3", cfg), ConfigError);
  CHECK_THROWS_AS(P("w1 +", cfg), ConfigError);
  CHECK_THROWS_AS(P("w1 ** 2", cfg), ConfigError);
  CHECK_THROWS_AS(P("x1", cfg), ConfigError);
}

TEST_CASE("evaluation") {
  const auto cfg = heis();
  const auto f = P("w1 * wbar2 + 2 * c1^2", cfg);
  const auto g = make_element({cplx(1, 1), cplx(0, 2)}, {cplx(0, 1)});
  CHECK(std::abs(f.eval(g) - (cplx(1, 1) * cplx(0, -2) + 2.0 * cplx(-1, 0))) < 1e-15);
}

TEST_CASE("left-invariant derivatives") {
  const auto cfg = heis();
  const AlgebraElement e1 = cfg->basis(0), e2 = cfg->basis(1), f1 = cfg->basis(2);
  // lid_{e2} c1 = omega(w, e2) / 2 = w1 / 2.
  CHECK(lid(P("c1", cfg), e2).distance(P("0.5*w1", cfg)) < 1e-15);
  CHECK(lid(P("c1", cfg), e1).distance(P("-0.5*w2", cfg)) < 1e-15);
  CHECK(lid(P("c1", cfg), f1).distance(P("1", cfg)) < 1e-15);
  // Commutator of vector fields is the bracket field.
  InputRng rng(3);
  for (int t = 0; t < 20; ++t) {
    RandomPolyOptions opts;
    opts.holomorphic = t % 2 == 0;
    const auto f = random_polynomial(cfg, rng, opts);
    const auto comm = lid(lid(f, e2), e1) - lid(lid(f, e1), e2);
    CHECK(comm.distance(lid(f, cfg->bracket(e1, e2))) < 1e-12);
  }
}

TEST_CASE("lid agrees with finite differences") {
  const auto cfg = make_config(GroupConfig::random(3, 2, 17));
  InputRng rng(4);
  for (int t = 0; t < 20; ++t) {
    RandomPolyOptions opts;
    opts.holomorphic = false;
    opts.max_degree = 4;
    const auto f = random_polynomial(cfg, rng, opts);
    const auto g = random_element(*cfg, rng, 1.0);
    auto h = random_element(*cfg, rng, 1.0);
    const cplx exact = lid(f, h).eval(g);
    CHECK(std::abs(exact - numeric_lid(f, g, h)) < 1e-7 * (1.0 + std::abs(exact)));
  }
}

TEST_CASE("holomorphy and the modulus identity") {
  for (auto cfg : {heis(), make_config(GroupConfig::random(3, 2, 5))}) {
    InputRng rng(11);
    for (int t = 0; t < 30; ++t) {
      const auto f = random_polynomial(cfg, rng);
      CHECK(apply_L(f).is_zero());
      Polynomial grad_sq(cfg);
      for (int b = 0; b < cfg->dim(); ++b) {
        const AlgebraElement h = cfg->basis(b);
        AlgebraElement ih = h;
        ih.w *= cplx(0, 1);
        ih.c *= cplx(0, 1);
        // i h acts on holomorphic f as i times h.
        CHECK(lid(f, ih).distance(lid(f, h) * cplx(0, 1)) < 1e-12);
        grad_sq += abs_sq(lid(f, h));
      }
      const auto lhs = apply_L(abs_sq(f));
      CHECK(lhs.distance(grad_sq * 4.0) < 1e-9);
    }
  }
}

TEST_CASE("heat expectation worked values") {
  const auto cfg = heis();
  for (double T : {0.5, 1.0, 2.0}) {
    CHECK(std::abs(heat_expectation(P("c1*cbar1", cfg), T) - (T + T * T / 4.0)) < 1e-12);
    CHECK(std::abs(heat_expectation(P("w1*wbar1", cfg), T) - T) < 1e-12);
    CHECK(std::abs(heat_expectation(P("w1^2*wbar1^2", cfg), T) - 2 * T * T) < 1e-12);
    CHECK(std::abs(heat_expectation(P("w1*wbar2", cfg), T)) < 1e-14);
    CHECK(std::abs(heat_expectation(P("3+c1+w2^2", cfg), T) - 3.0) < 1e-14);
  }
  CHECK(heat_expectation(P("1", cfg), 1.0) == cplx(1.0));
  CHECK_THROWS_AS(heat_expectation(P("1", cfg), 0.0), DomainError);
}

TEST_CASE("heat expectation solves the heat equation") {
  // d/dT E[F(g_T)] = (1/4) E[(L F)(g_T)], checked by central differences.
  const auto cfg = make_config(GroupConfig::random(2, 2, 8));
  InputRng rng(21);
  for (int t = 0; t < 10; ++t) {
    RandomPolyOptions opts;
    opts.holomorphic = false;
    const auto f = random_polynomial(cfg, rng, opts);
    const double T = 0.7;
    const double h = 1e-4;
    const cplx deriv = (heat_expectation(f, T + h) - heat_expectation(f, T - h)) / (2 * h);
    const cplx rhs = 0.25 * heat_expectation(apply_L(f), T);
    CHECK(std::abs(deriv - rhs) < 1e-6 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("commutative case is a complex Gaussian") {
  // omega = 0: coordinates are independent complex Gaussians with E|z|^2 = T.
  const auto cfg = make_config(GroupConfig(2, 1, {CMatrix::Zero(2, 2)}));
  for (int m = 1; m <= 4; ++m) {
    const auto f = P("w1^" + std::to_string(m) + "*wbar1^" + std::to_string(m), cfg);
    CHECK(std::abs(heat_expectation(f, 1.5) - std::tgamma(m + 1.0) * std::pow(1.5, m)) < 1e-10);
    const auto g = P("c1^" + std::to_string(m) + "*cbar1^" + std::to_string(m), cfg);
    CHECK(std::abs(heat_expectation(g, 1.5) - std::tgamma(m + 1.0) * std::pow(1.5, m)) < 1e-10);
  }
}

TEST_CASE("left translation and substitution") {
  const auto cfg = make_config(GroupConfig::random(3, 1, 12));
  InputRng rng(9);
  for (int t = 0; t < 20; ++t) {
    RandomPolyOptions opts;
    opts.holomorphic = t % 2 == 0;
    opts.max_degree = 4;
    const auto f = random_polynomial(cfg, rng, opts);
    const auto h = random_element(*cfg, rng, 1.0);
    const auto g = random_element(*cfg, rng, 1.0);
    const auto ft = left_translate(f, h);
    CHECK(std::abs(ft.eval(g) - f.eval(cfg->mul(h, g))) < 1e-11);
    CMatrix m = CMatrix::Random(3, 3);
    const auto fm = substitute_w(f, m);
    GroupElement mg = g;
    mg.w = m * g.w;
    CHECK(std::abs(fm.eval(g) - f.eval(mg)) < 1e-10);
  }
}

TEST_CASE("degree cap") {
  const auto cfg = make_config(GroupConfig(2, 1, GroupConfig::heisenberg().omega(), 4));
  const auto f = P("c1*w1", cfg);
  CHECK_THROWS_AS(f * f, DomainError);
}
