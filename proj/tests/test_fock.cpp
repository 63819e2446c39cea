#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "heatfock/fock.hpp"
#include "heatfock/random_inputs.hpp"

using namespace heatfock;

namespace {

ConfigPtr heis() { return make_config(GroupConfig::heisenberg()); }

Polynomial P(const std::string& s, const ConfigPtr& cfg) { return parse_polynomial(s, cfg); }

}  // namespace

TEST_CASE("taylor of worked examples") {
  const auto cfg = heis();
  const auto a = taylor(P("c1", cfg));
  CHECK(a.maxrank() == 2);
  CHECK(a.get({2}) == cplx(1.0));
  CHECK(a.get({0, 1}) == cplx(0.5));
  CHECK(a.get({1, 0}) == cplx(-0.5));
  CHECK(a.component(1).size() == 1);
  CHECK(a.component(2).size() == 2);
  CHECK(a.scalar() == cplx(0.0));
  CHECK(fock_norm_sq(a, 1.0) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(fock_norm_sq(a, 2.0) == doctest::Approx(3.0).epsilon(1e-15));

  const auto b = taylor(P("w1", cfg));
  CHECK(b.get({0}) == cplx(1.0));
  CHECK(b.top_rank() == 1);

  const auto sq = taylor(P("w1^2", cfg));
  CHECK(sq.get({0, 0}) == cplx(2.0));
  CHECK(fock_norm_sq(sq, 1.0) == doctest::Approx(2.0));

  CHECK_THROWS_AS(taylor(P("wbar1", cfg)), DomainError);
  CHECK_THROWS_AS(taylor(P("c1", cfg), 1), DomainError);
  CHECK(taylor(P("c1", cfg), 5).top_rank() == 2);
}

TEST_CASE("taylor isometry against the heat oracle") {
  for (auto cfg : {heis(), make_config(GroupConfig::random(3, 2, 42))}) {
    InputRng rng(cfg->k() * 7);
    for (int t = 0; t < 40; ++t) {
      const auto f = random_polynomial(cfg, rng);
      const auto alpha = taylor(f);
      for (double T : {0.5, 1.0, 2.0}) {
        const double lhs = fock_norm_sq(alpha, T);
        const double rhs = heat_expectation(abs_sq(f), T).real();
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
}

TEST_CASE("taylor lands in J0 and round trips") {
  for (auto cfg : {heis(), make_config(GroupConfig::random(3, 2, 43))}) {
    InputRng rng(cfg->k() * 13);
    for (int t = 0; t < 20; ++t) {
      const auto f = random_polynomial(cfg, rng);
      const auto alpha = taylor(f);
      CHECK(j0_residual(alpha) < 1e-10);
      CHECK(inverse_taylor(alpha).distance(f) < 1e-10);
      CHECK(taylor(inverse_taylor(alpha), alpha.maxrank()).distance(alpha) < 1e-10);
      for (double theta : {0.3, 1.0, 2.5}) {
        CHECK(j0_residual(grading_pullback(alpha, theta)) < 1e-10);
      }
    }
  }
}

TEST_CASE("j0 residual detects non-symmetric tensors") {
  const auto cfg = heis();
  FockTensor a(cfg, 2);
  a.set({0, 1}, 1.0);
  CHECK(j0_residual(a) == doctest::Approx(1.0));
  // Adding the matching antisymmetric part and central entry restores J0.
  a.set({1, 0}, 0.0);
  a.set({2}, 1.0);
  a.set({0, 1}, 0.5);
  a.set({1, 0}, -0.5);
  CHECK(j0_residual(a) == 0.0);
}

TEST_CASE("linearity of taylor") {
  const auto cfg = make_config(GroupConfig::random(2, 1, 3));
  InputRng rng(77);
  const auto f = random_polynomial(cfg, rng);
  const auto g = random_polynomial(cfg, rng);
  const cplx s(0.3, -1.2);
  const int r = std::max(f.graded_degree(), g.graded_degree());
  const auto lhs = taylor(f + g * s, r);
  const auto rhs = taylor(f, r) + taylor(g, r) * s;
  CHECK(lhs.distance(rhs) < 1e-12);
  CHECK(inverse_taylor(rhs).distance(f + g * s) < 1e-12);
}

TEST_CASE("grading pullback is unitary") {
  const auto cfg = heis();
  const auto alpha = taylor(P("c1", cfg));
  CHECK(grading_pullback(alpha, std::numbers::pi).distance(alpha) < 1e-15);
  CHECK(grading_pullback(alpha, 0.0).distance(alpha) == 0.0);
  InputRng rng(5);
  for (int t = 0; t < 10; ++t) {
    const auto beta = taylor(random_polynomial(cfg, rng));
    for (int j = 0; j < 16; ++j) {
      const double theta = 2 * std::numbers::pi * j / 16;
      CHECK(fock_norm_sq(grading_pullback(beta, theta), 1.3) ==
            doctest::Approx(fock_norm_sq(beta, 1.3)).epsilon(1e-13));
    }
  }
  // Degree-1 word gains e^{i theta}, central word e^{2 i theta}.
  FockTensor e(cfg, 1);
  e.set({0}, 1.0);
  e.set({2}, 1.0);
  const auto pulled = grading_pullback(e, 0.4);
  CHECK(std::abs(pulled.get({0}) - std::polar(1.0, 0.4)) < 1e-15);
  CHECK(std::abs(pulled.get({2}) - std::polar(1.0, 0.8)) < 1e-15);
}

TEST_CASE("fejer truncation") {
  const auto cfg = heis();
  FockTensor lin(cfg, 1);
  lin.set({0}, 2.0);
  lin.set({1}, cplx(0, 1));
  CHECK(fejer_truncate(lin, 2).distance(lin * 0.5) == 0.0);
  FockTensor scalar(cfg, 0);
  scalar.set({}, 3.0);
  CHECK(fejer_truncate(scalar, 1).scalar() == cplx(3.0));

  InputRng rng(8);
  RandomPolyOptions opts;
  opts.max_degree = 8;
  const auto alpha = taylor(random_polynomial(cfg, rng, opts), 8);
  double prev = 1e300;
  for (int n = 1; n <= 40; ++n) {
    const auto tr = fejer_truncate(alpha, n);
    for (int r = n + 1; r <= tr.maxrank(); ++r) CHECK(tr.component(r).empty());
    const double err = fock_norm_sq(tr - alpha, 1.0);
    CHECK(err <= prev);
    prev = err;
    // Exact value of the error from the weights.
    double expected = 0.0;
    double w = 1.0;
    for (int r = 0; r <= alpha.maxrank(); ++r) {
      if (r > 0) w /= r;
      for (const auto& [word, v] : alpha.component(r)) {
        const double l = word_degree(word, cfg->k());
        const double keep = std::max(0.0, 1.0 - l / n);
        expected += w * std::norm(v) * (1.0 - keep) * (1.0 - keep);
      }
    }
    CHECK(err == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(prev < 0.01 * fock_norm_sq(alpha, 1.0));
}

TEST_CASE("pointwise bound from the Fock norm") {
  const auto cfg = make_config(GroupConfig::random(3, 1, 19));
  InputRng rng(31);
  for (int t = 0; t < 50; ++t) {
    const auto f = random_polynomial(cfg, rng);
    const auto alpha = taylor(f);
    const auto g = random_element(*cfg, rng, rng.uniform(0.1, 3.0));
    for (double T : {0.5, 1.0, 2.0}) {
      const double bound = std::sqrt(fock_norm_sq(alpha, T)) *
                           std::exp(algebra_norm(g) * algebra_norm(g) / (2 * T));
      CHECK(std::abs(inverse_taylor(alpha).eval(g)) <= bound * (1 + 1e-12));
    }
  }
}

TEST_CASE("tensor bookkeeping") {
  const auto cfg = heis();
  FockTensor a(cfg, 2);
  CHECK(a.is_zero());
  CHECK_THROWS_AS(a.set({0, 0, 0}, 1.0), DomainError);
  CHECK_THROWS_AS(a.set({3}, 1.0), DomainError);
  a.add({1}, 2.0);
  a.add({1}, -2.0);
  CHECK(a.is_zero());
  FockTensor other(make_config(GroupConfig::random(3, 1, 1)), 1);
  CHECK_THROWS_AS(a += other, ConfigError);
  CHECK_THROWS_AS(fock_norm_sq(a, 0.0), DomainError);
}
