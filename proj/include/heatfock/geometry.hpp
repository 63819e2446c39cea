#pragma once

#include <cstdint>
#include <vector>

#include "heatfock/polynomial.hpp"
#include "heatfock/stochastic.hpp"

namespace heatfock {

/// Piecewise-linear path in the (w, c) chart through control points
/// g_0 = e, g_1, ..., g_M.
struct CMPath {
  std::vector<GroupElement> points;

  static CMPath straight(const GroupConfig& cfg, const GroupElement& h, int segments = 1);
  int segments() const { return static_cast<int>(points.size()) - 1; }
  /// Inserts the chart midpoint of every segment.
  CMPath refined() const;
};

/// Integral of sqrt(||w'||^2 + ||c' - omega(w, w') / 2||^2), 8-point
/// Gauss-Legendre per segment.
double path_length(const GroupConfig& cfg, const CMPath& path);

struct DistanceOptions {
  int segments = 4;
  int restarts = 8;
  std::uint64_t seed = 1;
};

struct DistanceResult {
  double value;  // upper bound on d(e, h)
  CMPath path;
};

/// Upper bound on the distance from e to h by minimizing path_length over
/// paths with free interior control points (Nelder-Mead, budget 200 * dim
/// per run). The segment count is reached by doubling from its odd part,
/// each level warm-started from the previous optimum with its midpoints
/// inserted, so doubling `segments` never increases the result.
DistanceResult distance_upper(const GroupConfig& cfg, const GroupElement& h,
                              const DistanceOptions& opts = {});

/// c(t) = t / (e^t - 1), c(0) = 1.
double heat_c(double t);

struct BoundRow {
  int point;
  double abs_f;
  double bound;
  double margin;  // bound - abs_f
  double d_upper;
  bool pass;
};

/// One Bargmann row for a point whose distance bound is already known.
BoundRow bargmann_bound(const Polynomial& f, const GroupElement& h, double T,
                        double fock_norm, double d_upper, int point = 0);

/// |f(h)| <= ||f||_{H^2_T} exp(d_up(e, h)^2 / (2T)) at every point.
std::vector<BoundRow> bargmann_check(const Polynomial& f,
                                     const std::vector<GroupElement>& points, double T,
                                     const DistanceOptions& opts = {});

struct LpNorm {
  double value;
  bool exact;
};

/// ||f||_{L^p(nu_T)}. Exact for even integer p (heat oracle applied to
/// |f^{p/2}|^2); otherwise the 3-sigma upper confidence bound of the Monte
/// Carlo mean of |f|^p, raised to 1/p.
LpNorm lp_norm(const Polynomial& f, double T, double p, const MCParams& mc, int workers = 1);

/// One Gaussian-bound row given ||f||_p and the distance bound.
BoundRow gaussian_bound(const Polynomial& f, const GroupElement& h, double T, double p,
                        double lp, double d_upper, int point = 0);

/// |S_T f(h)| <= ||f||_p exp(c(k(omega) T / 2) d_up^2 / (T (p - 1))), with
/// S_T f(h) computed exactly as the heat expectation of f(h .).
std::vector<BoundRow> gaussian_bound_check(const Polynomial& f,
                                           const std::vector<GroupElement>& points,
                                           double T, double p, const MCParams& mc,
                                           const DistanceOptions& opts = {},
                                           int workers = 1);

}  // namespace heatfock
