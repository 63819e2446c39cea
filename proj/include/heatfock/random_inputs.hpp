#pragma once

// Seeded generators for the property sweeps run by the CLI and tests.

#include "heatfock/polynomial.hpp"
#include "heatfock/rng.hpp"

namespace heatfock {

struct RandomPolyOptions {
  int max_degree = 6;      // graded degree cap of each monomial
  int max_terms = 6;
  bool holomorphic = true;
  bool with_constant = true;
};

/// Random sparse polynomial with complex Gaussian coefficients.
Polynomial random_polynomial(const ConfigPtr& cfg, InputRng& rng,
                             const RandomPolyOptions& opts = {});

/// w and c entries complex Gaussian, rescaled to algebra norm `radius`.
GroupElement random_element(const GroupConfig& cfg, InputRng& rng,
                            double radius = 1.0);

}  // namespace heatfock
