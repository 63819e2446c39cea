#include "heatfock/nelder_mead.hpp"

#include <algorithm>
#include <numeric>

namespace heatfock {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, double step, int max_evals,
                             double ftol) {
  const std::size_t n = start.size();
  NelderMeadResult result;
  result.value = f(start);
  result.evaluations = 1;
  result.x = start;
  if (n == 0) return result;

  std::vector<std::vector<double>> simplex(n + 1, start);
  std::vector<double> values(n + 1, result.value);
  for (std::size_t i = 0; i < n; ++i) {
    simplex[i + 1][i] += step;
    values[i + 1] = f(simplex[i + 1]);
    ++result.evaluations;
  }
  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    return f(x);
  };
  auto along = [&](double t, std::vector<double>& out, const std::vector<double>& worst) {
    for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + t * (worst[j] - centroid[j]);
  };

  while (result.evaluations < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    if (values[worst] - values[best] <= ftol) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j];
    }
    for (auto& c : centroid) c /= double(n);

    along(-1.0, trial, simplex[worst]);
    const double fr = eval(trial);
    if (fr < values[best]) {
      along(-2.0, trial2, simplex[worst]);
      const double fe = eval(trial2);
      if (fe < fr) {
        simplex[worst] = trial2;
        values[worst] = fe;
      } else {
        simplex[worst] = trial;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = trial;
      values[worst] = fr;
      continue;
    }
    // Contraction, outside or inside.
    const bool outside = fr < values[worst];
    along(outside ? -0.5 : 0.5, trial2, simplex[worst]);
    const double fc = eval(trial2);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = trial2;
      values[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) {
        simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
      }
      values[i] = eval(simplex[i]);
    }
  }
  const auto it = std::min_element(values.begin(), values.end());
  if (*it < result.value) {
    result.value = *it;
    result.x = simplex[it - values.begin()];
  }
  return result;
}

}  // namespace heatfock
