#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "heatfock/random_inputs.hpp"
#include "heatfock/stochastic.hpp"

using namespace heatfock;

namespace {

ConfigPtr heis() { return make_config(GroupConfig::heisenberg()); }

Polynomial P(const std::string& s, const ConfigPtr& cfg) { return parse_polynomial(s, cfg); }

MCParams params(double T, int steps, long paths, std::uint64_t seed) {
  MCParams p;
  p.T = T;
  p.steps = steps;
  p.paths = paths;
  p.seed = seed;
  return p;
}

}  // namespace

TEST_CASE("paths are keyed by seed and index") {
  const auto p = params(1.0, 16, 10, 99);
  const auto a = sample_path(p, 3, 5);
  const auto b = sample_path(p, 3, 5);
  CHECK(a.increments == b.increments);
  CHECK(a.increments != sample_path(p, 3, 6).increments);
  auto q = p;
  q.seed = 100;
  CHECK(a.increments != sample_path(q, 3, 5).increments);
  // A longer grid reuses the same counters for its first steps.
  auto longer = p;
  longer.steps = 32;
  longer.T = 2.0;
  const auto c = sample_path(longer, 3, 5);
  for (int i = 0; i < 16 * 3; ++i) CHECK(c.increments[i] == a.increments[i]);
}

TEST_CASE("brownian moments") {
  const double T = 1.7;
  const auto p = params(T, 8, 40000, 3);
  const auto est = map_paths(
      p, 3, 5,
      [](long, const BrownianPath& b, cplx* out) {
        const CVector v = b.value(b.steps);
        out[0] = std::norm(v(0));
        out[1] = std::norm(v(2));
        out[2] = v(0);
        out[3] = v(0) * std::conj(v(1));
        out[4] = v(1) * v(1);
      },
      1);
  CHECK(est[0].within(T));
  CHECK(est[1].within(T));
  CHECK(est[2].within(0.0));
  CHECK(est[3].within(0.0));
  // Real and imaginary parts have equal variance, so E Z^2 = 0.
  CHECK(est[4].within(0.0));
}

TEST_CASE("worker count does not change results") {
  const auto cfg = heis();
  const auto f = P("c1*cbar1 + w1*wbar2", cfg);
  const auto p = params(1.0, 32, 1001, 5);
  const auto one = heat_mc(f, p, 1);
  for (int workers : {2, 3, 7}) {
    const auto many = heat_mc(f, p, workers);
    CHECK(many.mean == one.mean);
    CHECK(many.stderr == one.stderr);
  }
}

TEST_CASE("group path") {
  const auto cfg = heis();
  const auto p = params(1.0, 64, 2, 8);
  const auto b = sample_path(p, 3, 0);
  const auto g = group_path(*cfg, b);
  CHECK(g.size() == 65);
  CHECK(g.front().w.isZero());
  CHECK(g.front().c.isZero());
  const auto end = group_endpoint(*cfg, b);
  CHECK((g.back().w - end.w).norm() < 1e-14);
  CHECK((g.back().c - end.c).norm() < 1e-14);
  for (int i = 0; i <= 64; i += 16) {
    CHECK((g[i].w - b.value(i).head(2)).norm() < 1e-14);
  }
  // Commutative case: g is b.
  const GroupConfig flat(2, 1, {CMatrix::Zero(2, 2)});
  const auto gf = group_endpoint(flat, b);
  CHECK((gf.c - b.value(64).tail(1)).norm() < 1e-14);
}

TEST_CASE("left-point sum converges at first order") {
  const auto cfg = heis();
  const auto p = params(1.0, 2048, 4000, 12);
  const auto est = map_paths(
      p, 3, 2,
      [&](long, const BrownianPath& b, cplx* out) {
        const cplx c2048 = group_endpoint(*cfg, b).c(0);
        const cplx c1024 = group_endpoint(*cfg, b.coarsen(2)).c(0);
        const cplx c512 = group_endpoint(*cfg, b.coarsen(4)).c(0);
        out[0] = std::norm(c512 - c1024);
        out[1] = std::norm(c1024 - c2048);
      },
      1);
  const double ratio = est[0].mean.real() / est[1].mean.real();
  CHECK(ratio >= 1.4);
  CHECK(ratio <= 2.8);
}

TEST_CASE("heat expectation by monte carlo") {
  const auto cfg = heis();
  const auto p = params(1.0, 256, 20000, 21);
  CHECK(heat_mc(P("c1*cbar1", cfg), p).within(1.25));
  const auto one = heat_mc(P("1", cfg), p);
  CHECK(one.mean == cplx(1.0));
  CHECK(one.stderr == 0.0);
  const auto h = make_element({1.0, 0.0}, {0.0});
  CHECK(skeleton_mc(P("w1*wbar1", cfg), h, p).within(2.0));
}

TEST_CASE("monte carlo against the oracle with a step-doubling allowance") {
  const auto cfg = make_config(GroupConfig::random(2, 1, 4));
  InputRng rng(40);
  std::vector<Polynomial> fs;
  for (int i = 0; i < 50; ++i) {
    RandomPolyOptions opts;
    opts.holomorphic = false;
    opts.max_terms = 3;
    fs.push_back(random_polynomial(cfg, rng, opts));
  }
  const auto p = params(1.0, 128, 4000, 41);
  const int n = static_cast<int>(fs.size());
  const auto est = map_paths(
      p, cfg->dim(), 2 * n,
      [&](long, const BrownianPath& b, cplx* out) {
        const auto fine = group_endpoint(*cfg, b);
        const auto coarse = group_endpoint(*cfg, b.coarsen(2));
        for (int i = 0; i < n; ++i) {
          out[i] = fs[i].eval(fine);
          out[n + i] = fs[i].eval(coarse);
        }
      },
      1);
  int failures = 0;
  for (int i = 0; i < n; ++i) {
    const cplx oracle = heat_expectation(fs[i], p.T);
    const double allowance = std::abs(est[i].mean - est[n + i].mean);
    if (std::abs(est[i].mean - oracle) > 3 * est[i].stderr + allowance) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("iterated integrals and chaos evaluation") {
  const auto cfg = make_config(GroupConfig::random(2, 1, 6));
  const auto p = params(1.0, 50, 2, 13);
  const auto b = sample_path(p, 3, 1);
  const auto m = iterated_integrals(b, 3);
  const CVector end = b.value(b.steps);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(m[0][j] - end(j)) < 1e-14);
  // Rank 2 by direct double sum over i < j.
  for (int a = 0; a < 3; ++a) {
    for (int c = 0; c < 3; ++c) {
      cplx direct = 0.0;
      for (int j = 0; j < b.steps; ++j) {
        for (int i = 0; i < j; ++i) direct += b.increment(i)[a] * b.increment(j)[c];
      }
      CHECK(std::abs(m[1][a * 3 + c] - direct) < 1e-13);
    }
  }
  // Sparse evaluator against the dense tensors.
  InputRng rng(2);
  FockTensor alpha(cfg, 3);
  alpha.set({}, 0.5);
  for (int t = 0; t < 12; ++t) {
    const int r = rng.integer(1, 3);
    Word w(r);
    for (auto& x : w) x = rng.integer(0, 2);
    alpha.add(w, rng.complex_normal());
  }
  cplx dense = 0.5;
  for (int r = 1; r <= 3; ++r) {
    for (const auto& [w, v] : alpha.component(r)) {
      std::size_t flat = 0;
      for (int x : w) flat = flat * 3 + x;
      dense += v * m[r - 1][flat];
    }
  }
  CHECK(std::abs(chaos_eval(alpha, b) - dense) < 1e-12);
  CHECK(std::abs(chaos_eval(taylor(P("w1", cfg)), b) - end(0)) < 1e-14);
}

TEST_CASE("chaos residual") {
  const auto cfg = heis();
  const auto p = params(1.0, 64, 200, 17);
  const auto lin = chaos_residual(P("w1 + 2*w2 - 1", cfg), p);
  CHECK(lin.mean.real() < 1e-28);
  // c1 has no discretization gap: the rank-2 pairing reproduces the
  // left-point sum exactly.
  CHECK(chaos_residual(P("c1", cfg), p).mean.real() < 1e-28);
  // w1^2 misses the diagonal sum of squared increments: E = 2 T dt.
  const auto sq = chaos_residual_levels(P("w1^2", cfg), params(1.0, 256, 20000, 18), {64, 256});
  CHECK(sq[0].within(2.0 / 64));
  CHECK(sq[1].within(2.0 / 256));
  CHECK_THROWS_AS(chaos_residual_levels(P("c1", cfg), p, {48}), DomainError);
}

TEST_CASE("gaussian moments") {
  const auto cfg = make_config(GroupConfig::random(3, 1, 2));
  CVector phi(3);
  phi << cplx(0.5, 0.2), cplx(-0.3, 0.1), cplx(0.0, 0.7);
  for (double T : {0.5, 1.0}) {
    const auto rows = gaussian_moment_check(*cfg, phi, params(T, 4, 40000, 31));
    for (const auto& row : rows) CHECK_MESSAGE(row.estimate.within(row.target), row.name);
  }
  const auto zero = gaussian_moment_check(*cfg, CVector::Zero(3), params(1.0, 4, 10, 1));
  CHECK(zero[0].estimate.mean == cplx(1.0));
  CHECK(zero[3].estimate.mean == cplx(0.0));
}

TEST_CASE("martingale check") {
  const auto cfg = heis();
  const auto f = P("c1*cbar1 + w1*wbar1*w2", cfg);
  const auto coarse = martingale_check(f, params(1.0, 32, 4000, 50));
  const auto fine = martingale_check(f, params(1.0, 64, 4000, 50));
  CHECK(std::abs(fine.mean) <= 3 * fine.stderr + std::abs(fine.mean - coarse.mean));
}

TEST_CASE("summary statistics") {
  std::vector<cplx> v = {1.0, 2.0, 3.0, 4.0};
  const auto s = summarize(v.data(), 4);
  CHECK(s.mean == cplx(2.5));
  CHECK(s.stderr == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(summarize(v.data(), 2, 2).mean == cplx(2.0));
}
