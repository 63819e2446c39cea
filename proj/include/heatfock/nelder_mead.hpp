#pragma once

#include <functional>
#include <vector>

namespace heatfock {

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
};

/// Derivative-free minimization from `start` with an axis-aligned initial
/// simplex of edge `step`. Stops after `max_evals` evaluations or when the
/// simplex values agree to `ftol` (absolute). The returned value is never
/// worse than f(start).
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, double step, int max_evals,
                             double ftol = 1e-13);

}  // namespace heatfock
