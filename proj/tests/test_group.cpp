#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "heatfock/group.hpp"
#include "heatfock/random_inputs.hpp"
#include "heatfock/rng.hpp"

using namespace heatfock;

namespace {

double max_diff(const GroupElement& a, const GroupElement& b) {
  return std::max((a.w - b.w).cwiseAbs().maxCoeff(), (a.c - b.c).cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("philox4x32-10 known answers") {
  const auto zero = philox4x32_10({0, 0, 0, 0}, {0, 0});
  CHECK(zero[0] == 0x6627e8d5u);
  CHECK(zero[1] == 0xe169c58du);
  CHECK(zero[2] == 0xbc57ac4cu);
  CHECK(zero[3] == 0x9b00dbd8u);
  const auto ones = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                  {0xffffffffu, 0xffffffffu});
  CHECK(ones[0] == 0x408f276du);
  CHECK(ones[1] == 0x41c83b0eu);
  CHECK(ones[2] == 0xa20bc7c6u);
  CHECK(ones[3] == 0x6d5451fdu);
  const auto pi = philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                {0xa4093822u, 0x299f31d0u});
  CHECK(pi[0] == 0xd16cfe09u);
  CHECK(pi[1] == 0x94fdccebu);
  CHECK(pi[2] == 0x5001e420u);
  CHECK(pi[3] == 0x24126ea1u);
}

TEST_CASE("heisenberg product") {
  const GroupConfig cfg = GroupConfig::heisenberg();
  const auto g1 = make_element({1.0, 0.0}, {0.0});
  const auto g2 = make_element({0.0, 1.0}, {0.0});
  const auto p = cfg.mul(g1, g2);
  CHECK(p.c(0) == cplx(0.5, 0.0));
  CHECK(cfg.mul(g2, g1).c(0) == cplx(-0.5, 0.0));
  CHECK(cfg.bracket(g1, g2).c(0) == cplx(1.0, 0.0));
  CHECK(cfg.bracket(g1, g2).w.isZero());
}

TEST_CASE("group axioms on random configs") {
  for (auto [k, d] : {std::pair{2, 1}, std::pair{3, 2}, std::pair{5, 3}}) {
    const GroupConfig cfg = GroupConfig::random(k, d, 100 + k);
    InputRng rng(k * 31 + d);
    for (int t = 0; t < 200; ++t) {
      const auto a = random_element(cfg, rng, 2.0);
      const auto b = random_element(cfg, rng, 2.0);
      const auto c = random_element(cfg, rng, 2.0);
      CHECK(max_diff(cfg.mul(cfg.mul(a, b), c), cfg.mul(a, cfg.mul(b, c))) < 1e-12);
      CHECK(max_diff(cfg.mul(a, cfg.identity()), a) == 0.0);
      CHECK(max_diff(cfg.mul(cfg.identity(), a), a) == 0.0);
      CHECK(max_diff(cfg.mul(a, cfg.inverse(a)), cfg.identity()) < 1e-14);
      // Group commutator equals the exponential of the bracket.
      const auto comm = cfg.mul(cfg.mul(a, b), cfg.mul(cfg.inverse(a), cfg.inverse(b)));
      const auto br = cfg.bracket(a, b);
      CHECK(max_diff(comm, br) < 1e-12);
    }
  }
}

TEST_CASE("config validation") {
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  bad(1, 0) = -0.5;
  CHECK_THROWS_AS(GroupConfig(2, 1, {bad}), ConfigError);
  CHECK_THROWS_AS(GroupConfig(2, 2, {CMatrix::Zero(2, 2)}), ConfigError);
  CHECK_THROWS_AS(GroupConfig(2, 1, {CMatrix::Zero(3, 3)}), ConfigError);
  CMatrix diag = CMatrix::Zero(2, 2);
  diag(0, 0) = 1.0;
  CHECK_THROWS_AS(GroupConfig(2, 1, {diag}), ConfigError);
  const GroupConfig cfg = GroupConfig::heisenberg();
  CHECK_THROWS_AS(cfg.check(make_element({1.0}, {0.0})), ConfigError);
}

TEST_CASE("k_omega matches a dense eigensolver") {
  CHECK(GroupConfig::heisenberg().k_omega() == doctest::Approx(-1.0).epsilon(1e-12));
  for (int seed = 1; seed <= 10; ++seed) {
    const GroupConfig cfg = GroupConfig::random(2 + seed % 5, 1 + seed % 3, seed);
    CMatrix m = CMatrix::Zero(cfg.k(), cfg.k());
    for (const auto& om : cfg.omega()) m += om.adjoint() * om;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    const double expected = -es.eigenvalues().maxCoeff();
    CHECK(cfg.k_omega() == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("uniform norm of omega") {
  CHECK(GroupConfig::heisenberg().omega_uniform_norm() == doctest::Approx(1.0));
  for (int seed = 1; seed <= 5; ++seed) {
    const GroupConfig cfg = GroupConfig::random(4, 1, seed);
    Eigen::JacobiSVD<CMatrix> svd(cfg.omega()[0]);
    CHECK(cfg.omega_uniform_norm() ==
          doctest::Approx(svd.singularValues()(0)).epsilon(1e-12));
  }
  // d > 1: the value is attained, so bounded by the HS norm and by the
  // largest single-form norm from below.
  const GroupConfig cfg = GroupConfig::random(3, 2, 9);
  const double u = cfg.omega_uniform_norm();
  double single = 0.0;
  for (const auto& om : cfg.omega()) {
    Eigen::JacobiSVD<CMatrix> svd(om);
    single = std::max(single, svd.singularValues()(0));
  }
  CHECK(u >= single - 1e-12);
  CHECK(u <= std::sqrt(cfg.omega_hs_norm_sq()) + 1e-12);
}

TEST_CASE("input rng complex normal scale") {
  InputRng rng(5);
  double total = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) total += std::norm(rng.complex_normal());
  CHECK(total / n == doctest::Approx(1.0).epsilon(0.02));
}
