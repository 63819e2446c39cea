#include "heatfock/geometry.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "heatfock/fock.hpp"
#include "heatfock/nelder_mead.hpp"
#include "heatfock/rng.hpp"

namespace heatfock {

namespace {

// Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 8> kNodes = {
    -0.96028985649753623, -0.79666647741362674, -0.52553240991632899, -0.18343464249564980,
    0.18343464249564980,  0.52553240991632899,  0.79666647741362674,  0.96028985649753623};
constexpr std::array<double, 8> kWeights = {
    0.10122853629037626, 0.22238103445337447, 0.31370664587788729, 0.36268378337836198,
    0.36268378337836198, 0.31370664587788729, 0.22238103445337447, 0.10122853629037626};

double segment_length(const GroupConfig& cfg, const GroupElement& a, const GroupElement& b) {
  const CVector dw = b.w - a.w;
  const CVector dc = b.c - a.c;
  const double dw_sq = dw.squaredNorm();
  double total = 0.0;
  for (std::size_t q = 0; q < kNodes.size(); ++q) {
    const double s = 0.5 * (kNodes[q] + 1.0);
    const CVector w = a.w + s * dw;
    const CVector v = dc - 0.5 * cfg.omega_form(w, dw);
    total += 0.5 * kWeights[q] * std::sqrt(dw_sq + v.squaredNorm());
  }
  return total;
}

// Interior control points <-> flat real vector.
std::vector<double> pack(const CMPath& path) {
  std::vector<double> x;
  for (int i = 1; i < path.segments(); ++i) {
    const auto& g = path.points[i];
    for (int j = 0; j < g.w.size(); ++j) {
      x.push_back(g.w(j).real());
      x.push_back(g.w(j).imag());
    }
    for (int m = 0; m < g.c.size(); ++m) {
      x.push_back(g.c(m).real());
      x.push_back(g.c(m).imag());
    }
  }
  return x;
}

void unpack(const std::vector<double>& x, CMPath& path) {
  std::size_t pos = 0;
  for (int i = 1; i < path.segments(); ++i) {
    auto& g = path.points[i];
    for (int j = 0; j < g.w.size(); ++j, pos += 2) g.w(j) = cplx(x[pos], x[pos + 1]);
    for (int m = 0; m < g.c.size(); ++m, pos += 2) g.c(m) = cplx(x[pos], x[pos + 1]);
  }
}

DistanceResult optimize_level(const GroupConfig& cfg, const CMPath& start, double scale,
                              int restarts, std::uint64_t seed, int level) {
  CMPath work = start;
  const std::vector<double> x0 = pack(start);
  DistanceResult best{path_length(cfg, start), start};
  if (x0.empty()) return best;
  auto objective = [&](const std::vector<double>& x) {
    unpack(x, work);
    return path_length(cfg, work);
  };
  const int budget = 200 * static_cast<int>(x0.size());
  for (int r = 0; r < std::max(1, restarts); ++r) {
    std::vector<double> x = x0;
    if (r > 0) {
      InputRng rng(seed ^ (0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(level) * 1024 + r)));
      for (auto& xi : x) xi += 0.5 * scale * rng.normal();
    }
    const auto res = nelder_mead(objective, x, 0.1 * scale, budget);
    if (res.value < best.value) {
      unpack(res.x, work);
      best = {res.value, work};
    }
  }
  return best;
}

}  // namespace

CMPath CMPath::straight(const GroupConfig& cfg, const GroupElement& h, int segments) {
  if (segments < 1) throw DomainError("path: need at least one segment");
  cfg.check(h);
  CMPath path;
  for (int i = 0; i <= segments; ++i) {
    const double s = double(i) / segments;
    path.points.push_back({s * h.w, s * h.c});
  }
  return path;
}

CMPath CMPath::refined() const {
  CMPath out;
  for (int i = 0; i < segments(); ++i) {
    const auto& a = points[i];
    const auto& b = points[i + 1];
    out.points.push_back(a);
    out.points.push_back({0.5 * (a.w + b.w), 0.5 * (a.c + b.c)});
  }
  out.points.push_back(points.back());
  return out;
}

double path_length(const GroupConfig& cfg, const CMPath& path) {
  if (path.points.empty()) throw DomainError("path: no control points");
  double total = 0.0;
  for (int i = 0; i < path.segments(); ++i) {
    total += segment_length(cfg, path.points[i], path.points[i + 1]);
  }
  return total;
}

DistanceResult distance_upper(const GroupConfig& cfg, const GroupElement& h,
                              const DistanceOptions& opts) {
  if (opts.segments < 1) throw DomainError("distance_upper: segments must be positive");
  cfg.check(h);
  int base = opts.segments;
  int doublings = 0;
  while (base % 2 == 0) {
    base /= 2;
    ++doublings;
  }
  const double scale = std::max(algebra_norm(h), 1e-3);
  DistanceResult best = optimize_level(cfg, CMPath::straight(cfg, h, base), scale,
                                       opts.restarts, opts.seed, 0);
  for (int level = 1; level <= doublings; ++level) {
    best = optimize_level(cfg, best.path.refined(), scale, opts.restarts, opts.seed, level);
  }
  return best;
}

double heat_c(double t) {
  if (t == 0.0) return 1.0;
  return t / std::expm1(t);
}

BoundRow bargmann_bound(const Polynomial& f, const GroupElement& h, double T,
                        double fock_norm, double d_upper, int point) {
  const double abs_f = std::abs(f.eval(h));
  const double bound = fock_norm * std::exp(d_upper * d_upper / (2.0 * T));
  return {point, abs_f, bound, bound - abs_f, d_upper, abs_f <= bound};
}

BoundRow gaussian_bound(const Polynomial& f, const GroupElement& h, double T, double p,
                        double lp, double d_upper, int point) {
  const GroupConfig& cfg = *f.config();
  const double rate = heat_c(cfg.k_omega() * T / 2.0) / (T * (p - 1.0));
  const double abs_f = std::abs(heat_expectation(left_translate(f, h), T));
  const double bound = lp * std::exp(rate * d_upper * d_upper);
  return {point, abs_f, bound, bound - abs_f, d_upper, abs_f <= bound};
}

std::vector<BoundRow> bargmann_check(const Polynomial& f,
                                     const std::vector<GroupElement>& points, double T,
                                     const DistanceOptions& opts) {
  if (!(T > 0.0)) throw DomainError("bargmann_check: T must be positive");
  const GroupConfig& cfg = *f.config();
  const double norm = std::sqrt(fock_norm_sq(taylor(f), T));
  std::vector<BoundRow> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d = distance_upper(cfg, points[i], opts).value;
    rows.push_back(bargmann_bound(f, points[i], T, norm, d, static_cast<int>(i)));
  }
  return rows;
}

LpNorm lp_norm(const Polynomial& f, double T, double p, const MCParams& mc, int workers) {
  if (!(p > 1.0)) throw DomainError("lp_norm: p must exceed 1");
  const double half = p / 2.0;
  if (half == std::floor(half) && half <= 8.0) {
    Polynomial power = Polynomial::constant(f.config(), 1.0);
    for (int i = 0; i < static_cast<int>(half); ++i) power = power * f;
    const double moment = heat_expectation(abs_sq(power), T).real();
    return {std::pow(std::max(moment, 0.0), 1.0 / p), true};
  }
  MCParams params = mc;
  params.T = T;
  const GroupConfig& cfg = *f.config();
  const auto est = map_paths(
      params, cfg.dim(), 1,
      [&](long, const BrownianPath& b, cplx* out) {
        out[0] = std::pow(std::abs(f.eval(group_endpoint(cfg, b))), p);
      },
      workers);
  const double upper = est.front().mean.real() + 3.0 * est.front().stderr;
  return {std::pow(upper, 1.0 / p), false};
}

std::vector<BoundRow> gaussian_bound_check(const Polynomial& f,
                                           const std::vector<GroupElement>& points,
                                           double T, double p, const MCParams& mc,
                                           const DistanceOptions& opts, int workers) {
  if (!(p > 1.0)) throw DomainError("gaussian_bound_check: p must exceed 1");
  if (!(T > 0.0)) throw DomainError("gaussian_bound_check: T must be positive");
  const GroupConfig& cfg = *f.config();
  const double norm = lp_norm(f, T, p, mc, workers).value;
  std::vector<BoundRow> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d = distance_upper(cfg, points[i], opts).value;
    rows.push_back(gaussian_bound(f, points[i], T, p, norm, d, static_cast<int>(i)));
  }
  return rows;
}

}  // namespace heatfock
