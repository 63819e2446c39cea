#include "heatfock/random_inputs.hpp"

namespace heatfock {

Polynomial random_polynomial(const ConfigPtr& cfg, InputRng& rng,
                             const RandomPolyOptions& opts) {
  const int k = cfg->k();
  const int d = cfg->d();
  const int half = k + d;
  const int nvars = opts.holomorphic ? half : 2 * half;
  Polynomial p(cfg);
  const int terms = rng.integer(1, std::max(1, opts.max_terms));
  for (int t = 0; t < terms; ++t) {
    const int target = rng.integer(opts.with_constant ? 0 : 1, opts.max_degree);
    Polynomial::Monomial m(2 * half, 0);
    int degree = 0;
    int attempts = 0;
    while (degree < target && attempts < 64) {
      ++attempts;
      int slot = rng.integer(0, nvars - 1);
      const int local = slot % half;
      const int weight = local < k ? 1 : 2;
      if (degree + weight > target) continue;
      ++m[slot];
      degree += weight;
    }
    p.add_term(m, rng.complex_normal());
  }
  if (p.is_zero()) p = Polynomial::constant(cfg, 1.0);
  return p;
}

GroupElement random_element(const GroupConfig& cfg, InputRng& rng,
                            double radius) {
  GroupElement g = cfg.identity();
  for (int j = 0; j < cfg.k(); ++j) g.w(j) = rng.complex_normal();
  for (int m = 0; m < cfg.d(); ++m) g.c(m) = rng.complex_normal();
  const double norm = algebra_norm(g);
  if (norm > 0.0) {
    g.w *= radius / norm;
    g.c *= radius / norm;
  }
  return g;
}

}  // namespace heatfock
