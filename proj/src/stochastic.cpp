#include "heatfock/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "heatfock/rng.hpp"

namespace heatfock {

void MCParams::validate() const {
  if (!(T > 0.0)) throw DomainError("mc: T must be positive");
  if (steps <= 0) throw DomainError("mc: steps must be positive");
  if (paths <= 1) throw DomainError("mc: need at least two paths");
}

bool MCEstimate::within(cplx target, double sigmas) const {
  // The floor covers constant integrands, whose sample variance is zero.
  return std::abs(mean - target) <= sigmas * stderr + 1e-12 * std::max(1.0, std::abs(target));
}

namespace {

struct KahanSum {
  cplx sum{};
  cplx carry{};
  void add(cplx x) {
    const cplx y = x - carry;
    const cplx t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

MCEstimate summarize(const cplx* values, long n, long stride) {
  if (n <= 0) throw DomainError("summarize: no samples");
  KahanSum total;
  for (long i = 0; i < n; ++i) total.add(values[i * stride]);
  const cplx mean = total.sum / double(n);
  KahanSum sq;
  for (long i = 0; i < n; ++i) sq.add(std::norm(values[i * stride] - mean));
  MCEstimate est;
  est.mean = mean;
  est.paths = n;
  est.stderr = n > 1 ? std::sqrt(sq.sum.real() / double(n - 1) / double(n)) : 0.0;
  return est;
}

CVector BrownianPath::value(int i) const {
  CVector v = CVector::Zero(dim);
  for (int s = 0; s < i; ++s) {
    const cplx* inc = increment(s);
    for (int j = 0; j < dim; ++j) v(j) += inc[j];
  }
  return v;
}

BrownianPath BrownianPath::coarsen(int factor) const {
  if (factor <= 0 || steps % factor != 0) {
    throw DomainError("coarsen: factor must divide the step count");
  }
  BrownianPath out;
  out.T = T;
  out.steps = steps / factor;
  out.dim = dim;
  out.increments.assign(static_cast<std::size_t>(out.steps) * dim, cplx{});
  for (int s = 0; s < steps; ++s) {
    const cplx* inc = increment(s);
    cplx* dst = out.increments.data() + (s / factor) * dim;
    for (int j = 0; j < dim; ++j) dst[j] += inc[j];
  }
  return out;
}

void sample_path_into(const MCParams& params, int dim, long path_index,
                      BrownianPath& out) {
  out.T = params.T;
  out.steps = params.steps;
  out.dim = dim;
  out.increments.resize(static_cast<std::size_t>(params.steps) * dim);
  const double scale = std::sqrt(params.dt() / 2.0);
  const Philox4x32Key key = {static_cast<std::uint32_t>(params.seed),
                             static_cast<std::uint32_t>(params.seed >> 32)};
  const auto path = static_cast<std::uint64_t>(path_index);
  Philox4x32Counter ctr = {0, 0, static_cast<std::uint32_t>(path),
                           static_cast<std::uint32_t>(path >> 32)};
  cplx* dst = out.increments.data();
  for (int s = 0; s < params.steps; ++s) {
    ctr[0] = static_cast<std::uint32_t>(s);
    for (int j = 0; j < dim; ++j) {
      ctr[1] = static_cast<std::uint32_t>(j);
      const auto [z1, z2] = philox_normal_pair(ctr, key);
      *dst++ = cplx(scale * z1, scale * z2);
    }
  }
}

BrownianPath sample_path(const MCParams& params, int dim, long path_index) {
  BrownianPath b;
  sample_path_into(params, dim, path_index, b);
  return b;
}

std::vector<GroupElement> group_path(const GroupConfig& cfg, const BrownianPath& b) {
  if (b.dim != cfg.dim()) throw ConfigError("group_path: dimension mismatch");
  const int k = cfg.k();
  std::vector<GroupElement> out;
  out.reserve(b.steps + 1);
  GroupElement g = cfg.identity();
  out.push_back(g);
  CVector dw(k);
  for (int s = 0; s < b.steps; ++s) {
    const cplx* inc = b.increment(s);
    for (int j = 0; j < k; ++j) dw(j) = inc[j];
    g.c += 0.5 * cfg.omega_form(g.w, dw);
    for (int m = 0; m < cfg.d(); ++m) g.c(m) += inc[k + m];
    g.w += dw;
    out.push_back(g);
  }
  return out;
}

GroupElement group_endpoint(const GroupConfig& cfg, const BrownianPath& b) {
  if (b.dim != cfg.dim()) throw ConfigError("group_path: dimension mismatch");
  const int k = cfg.k();
  const int d = cfg.d();
  GroupElement g = cfg.identity();
  const auto& omega = cfg.omega();
  for (int s = 0; s < b.steps; ++s) {
    const cplx* inc = b.increment(s);
    const Eigen::Map<const CVector> dw(inc, k);
    for (int m = 0; m < d; ++m) {
      g.c(m) += 0.5 * (g.w.transpose() * omega[m] * dw).value() + inc[k + m];
    }
    g.w += dw;
  }
  return g;
}

std::vector<MCEstimate> map_paths(const MCParams& params, int dim, int width,
                                  const PathFn& fn, int workers) {
  params.validate();
  if (width <= 0) throw DomainError("map_paths: width must be positive");
  const long n = params.paths;
  std::vector<cplx> values(static_cast<std::size_t>(n) * width);
  const int nthreads = static_cast<int>(std::clamp<long>(workers, 1, n));
  auto run_range = [&](long begin, long end) {
    BrownianPath b;
    for (long p = begin; p < end; ++p) {
      sample_path_into(params, dim, p, b);
      fn(p, b, values.data() + p * width);
    }
  };
  if (nthreads == 1) {
    run_range(0, n);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(nthreads);
    for (int t = 0; t < nthreads; ++t) {
      const long begin = n * t / nthreads;
      const long end = n * (t + 1) / nthreads;
      threads.emplace_back([&, t, begin, end] {
        try {
          run_range(begin, end);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : threads) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<MCEstimate> out;
  out.reserve(width);
  for (int c = 0; c < width; ++c) out.push_back(summarize(values.data() + c, n, width));
  return out;
}

MCEstimate heat_mc(const Polynomial& f, const MCParams& params, int workers) {
  return skeleton_mc(f, f.config()->identity(), params, workers);
}

MCEstimate skeleton_mc(const Polynomial& f, const GroupElement& h,
                       const MCParams& params, int workers) {
  return skeleton_mc_batch({f}, {h}, params, workers).front();
}

std::vector<MCEstimate> skeleton_mc_batch(const std::vector<Polynomial>& fs,
                                          const std::vector<GroupElement>& hs,
                                          const MCParams& params, int workers) {
  if (fs.empty() || fs.size() != hs.size()) {
    throw DomainError("skeleton_mc: need matching nonempty f and h lists");
  }
  const GroupConfig& cfg = *fs.front().config();
  for (const auto& h : hs) cfg.check(h);
  const int width = static_cast<int>(fs.size());
  return map_paths(
      params, cfg.dim(), width,
      [&](long, const BrownianPath& b, cplx* out) {
        const GroupElement g = group_endpoint(cfg, b);
        for (int i = 0; i < width; ++i) out[i] = fs[i].eval(cfg.mul(hs[i], g));
      },
      workers);
}

std::vector<std::vector<cplx>> iterated_integrals(const BrownianPath& b, int nmax) {
  if (nmax < 1) throw DomainError("iterated_integrals: nmax must be >= 1");
  const int dim = b.dim;
  std::vector<std::vector<cplx>> m(nmax + 1);
  m[0] = {1.0};
  std::size_t size = 1;
  for (int n = 1; n <= nmax; ++n) {
    size *= dim;
    m[n].assign(size, cplx{});
  }
  for (int s = 0; s < b.steps; ++s) {
    const cplx* inc = b.increment(s);
    for (int n = nmax; n >= 1; --n) {
      const auto& prev = m[n - 1];
      auto& cur = m[n];
      for (std::size_t p = 0; p < prev.size(); ++p) {
        for (int j = 0; j < dim; ++j) cur[p * dim + j] += prev[p] * inc[j];
      }
    }
  }
  m.erase(m.begin());
  return m;
}

ChaosEvaluator::ChaosEvaluator(const FockTensor& alpha) : scalar_(alpha.scalar()) {
  std::map<Word, int> ids;
  ids[{}] = 0;
  parent_.push_back(-1);
  letter_.push_back(-1);
  coef_.push_back(0.0);
  // Shorter words first, so every prefix precedes its extensions.
  for (int n = 1; n <= alpha.maxrank(); ++n) {
    for (const auto& [word, value] : alpha.component(n)) {
      Word prefix;
      int parent = 0;
      for (int letter : word) {
        prefix.push_back(letter);
        auto [it, inserted] = ids.try_emplace(prefix, static_cast<int>(parent_.size()));
        if (inserted) {
          parent_.push_back(parent);
          letter_.push_back(letter);
          coef_.push_back(0.0);
        }
        parent = it->second;
      }
      coef_[parent] += value;
    }
  }
  // Reorder by depth so a reverse sweep updates deeper nodes first.
  const int n = nodes();
  std::vector<int> depth(n, 0);
  for (int i = 1; i < n; ++i) depth[i] = depth[parent_[i]] + 1;
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return depth[a] < depth[b]; });
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[order[i]] = i;
  std::vector<int> parent(n, -1), letter(n, -1);
  std::vector<cplx> coef(n);
  for (int i = 0; i < n; ++i) {
    const int old = order[i];
    parent[i] = old == 0 ? -1 : pos[parent_[old]];
    letter[i] = letter_[old];
    coef[i] = coef_[old];
  }
  parent_ = std::move(parent);
  letter_ = std::move(letter);
  coef_ = std::move(coef);
}

cplx ChaosEvaluator::eval(const BrownianPath& b) const {
  const int n = nodes();
  std::vector<cplx> m(n, cplx{});
  m[0] = 1.0;
  for (int s = 0; s < b.steps; ++s) {
    const cplx* inc = b.increment(s);
    for (int i = n - 1; i >= 1; --i) m[i] += m[parent_[i]] * inc[letter_[i]];
  }
  cplx total = scalar_;
  for (int i = 1; i < n; ++i) total += coef_[i] * m[i];
  return total;
}

cplx chaos_eval(const FockTensor& alpha, const BrownianPath& b) {
  if (b.dim != alpha.dim()) throw ConfigError("chaos_eval: dimension mismatch");
  return ChaosEvaluator(alpha).eval(b);
}

MCEstimate chaos_residual(const Polynomial& f, const MCParams& params, int workers) {
  return chaos_residual_levels(f, params, {params.steps}, workers).front();
}

std::vector<MCEstimate> chaos_residual_levels(const Polynomial& f,
                                              const MCParams& params,
                                              const std::vector<int>& levels,
                                              int workers) {
  if (levels.empty()) throw DomainError("chaos_residual: no levels");
  for (int level : levels) {
    if (level <= 0 || params.steps % level != 0) {
      throw DomainError("chaos_residual: level must divide the finest step count");
    }
  }
  const GroupConfig& cfg = *f.config();
  const ChaosEvaluator chaos(taylor(f));
  const int width = static_cast<int>(levels.size());
  return map_paths(
      params, cfg.dim(), width,
      [&](long, const BrownianPath& b, cplx* out) {
        for (int i = 0; i < width; ++i) {
          const int factor = params.steps / levels[i];
          const BrownianPath coarse = factor == 1 ? b : b.coarsen(factor);
          const cplx direct = f.eval(group_endpoint(cfg, coarse));
          out[i] = std::norm(direct - chaos.eval(coarse));
        }
      },
      workers);
}

std::vector<GaussianMomentRow> gaussian_moment_check(const GroupConfig& cfg,
                                                     const CVector& phi,
                                                     const MCParams& params,
                                                     int workers) {
  if (phi.size() != cfg.k()) throw ConfigError("gaussian_moment: phi must have k entries");
  const int k = cfg.k();
  const auto est = map_paths(
      params, cfg.dim(), 4,
      [&](long, const BrownianPath& b, cplx* out) {
        cplx value = 0.0;
        for (int s = 0; s < b.steps; ++s) {
          const cplx* inc = b.increment(s);
          for (int j = 0; j < k; ++j) value += phi(j) * inc[j];
        }
        out[0] = std::exp(value);
        out[1] = value.real() * value.real();
        out[2] = value.imag() * value.imag();
        out[3] = std::norm(value);
      },
      workers);
  const double sq = phi.squaredNorm();
  const double T = params.T;
  return {{"exp", 1.0, est[0]},
          {"re_sq", T * sq / 2.0, est[1]},
          {"im_sq", T * sq / 2.0, est[2]},
          {"abs_sq", T * sq, est[3]}};
}

MCEstimate martingale_check(const Polynomial& f, const MCParams& params, int workers) {
  const GroupConfig& cfg = *f.config();
  const Polynomial lf = apply_L(f);
  const cplx f0 = f.eval(cfg.identity());
  return map_paths(
             params, cfg.dim(), 1,
             [&](long, const BrownianPath& b, cplx* out) {
               const auto g = group_path(cfg, b);
               cplx integral = 0.0;
               cplx prev = lf.eval(g.front());
               for (int s = 1; s <= b.steps; ++s) {
                 const cplx cur = lf.eval(g[s]);
                 integral += 0.5 * (prev + cur) * b.dt();
                 prev = cur;
               }
               out[0] = f.eval(g.back()) - f0 - 0.25 * integral;
             },
             workers)
      .front();
}

}  // namespace heatfock
