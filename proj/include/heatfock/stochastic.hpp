#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "heatfock/fock.hpp"
#include "heatfock/polynomial.hpp"

namespace heatfock {

struct MCParams {
  double T = 1.0;
  int steps = 256;
  long paths = 10000;
  std::uint64_t seed = 1;

  double dt() const { return T / steps; }
  void validate() const;
};

struct MCEstimate {
  cplx mean;
  double stderr = 0.0;  // sample standard deviation / sqrt(paths)
  long paths = 0;

  /// |mean - target| <= sigmas * stderr + 1e-12 max(1, |target|).
  bool within(cplx target, double sigmas = 3.0) const;
};

/// Mean and standard error of values[0], values[stride], ... (n entries),
/// Kahan-compensated and summed in index order.
MCEstimate summarize(const cplx* values, long n, long stride = 1);

/// Brownian motion on the Lie algebra sampled on a uniform grid. Each complex
/// coordinate increment has independent real and imaginary parts of variance
/// dt / 2. Coordinates are ordered like basis indices: w first, then c.
struct BrownianPath {
  double T = 0.0;
  int steps = 0;
  int dim = 0;
  std::vector<cplx> increments;  // row-major [step][coord]

  double dt() const { return T / steps; }
  const cplx* increment(int step) const { return increments.data() + step * dim; }
  /// b(t_i), i in [0, steps].
  CVector value(int i) const;
  /// Sums groups of `factor` consecutive increments.
  BrownianPath coarsen(int factor) const;
};

/// Deterministic in (seed, path_index): the increment of coordinate j at step
/// i comes from the Philox block with counter (i, j, path_index) and key seed.
BrownianPath sample_path(const MCParams& params, int dim, long path_index);
void sample_path_into(const MCParams& params, int dim, long path_index,
                      BrownianPath& out);

/// g(t_i) for every grid point, with the left-point sum
/// c(t_{i+1}) = c(t_i) + db0_i + omega(B(t_i), dB_i) / 2.
std::vector<GroupElement> group_path(const GroupConfig& cfg, const BrownianPath& b);
GroupElement group_endpoint(const GroupConfig& cfg, const BrownianPath& b);

/// Runs fn on every path and summarizes each of the `width` output columns.
/// fn writes `width` values for the path it receives. Results do not depend
/// on `workers`.
using PathFn = std::function<void(long path_index, const BrownianPath& b, cplx* out)>;
std::vector<MCEstimate> map_paths(const MCParams& params, int dim, int width,
                                  const PathFn& fn, int workers = 1);

/// E[f(g(T))].
MCEstimate heat_mc(const Polynomial& f, const MCParams& params, int workers = 1);

/// E[f(h g(T))].
MCEstimate skeleton_mc(const Polynomial& f, const GroupElement& h,
                       const MCParams& params, int workers = 1);

/// Many (f, h) pairs evaluated on the same set of paths.
std::vector<MCEstimate> skeleton_mc_batch(const std::vector<Polynomial>& fs,
                                          const std::vector<GroupElement>& hs,
                                          const MCParams& params, int workers = 1);

/// Dense M_1(T) .. M_nmax(T); entry of word (a_1..a_n) at flat index
/// sum a_j dim^(n-j), with a_1 the earliest increment.
std::vector<std::vector<cplx>> iterated_integrals(const BrownianPath& b, int nmax);

/// Evaluates sum_n <alpha_n, M_n(T)> on paths, tracking only the prefixes of
/// words in alpha's support.
class ChaosEvaluator {
 public:
  explicit ChaosEvaluator(const FockTensor& alpha);
  cplx eval(const BrownianPath& b) const;
  int nodes() const { return static_cast<int>(parent_.size()); }

 private:
  cplx scalar_;
  // Node 0 is the empty word; children follow parents and are visited in
  // reverse order during updates so a step only reads pre-step values.
  std::vector<int> parent_;
  std::vector<int> letter_;
  std::vector<cplx> coef_;
};

cplx chaos_eval(const FockTensor& alpha, const BrownianPath& b);

/// E|f(g(T)) - chaos_eval(taylor(f))|^2 on shared paths.
MCEstimate chaos_residual(const Polynomial& f, const MCParams& params, int workers = 1);

/// The residual at several grid sizes. Paths are sampled at params.steps
/// (which every level must divide) and coarsened, so all levels share paths.
std::vector<MCEstimate> chaos_residual_levels(const Polynomial& f,
                                              const MCParams& params,
                                              const std::vector<int>& levels,
                                              int workers = 1);

struct GaussianMomentRow {
  const char* name;
  cplx target;
  MCEstimate estimate;
};

/// Moments of phi(B(T)) for phi(w) = sum_j phi_j w_j: E exp(phi) = 1,
/// E|Re phi|^2 = E|Im phi|^2 = (T/2) sum |phi_j|^2, E|phi|^2 = T sum |phi_j|^2.
std::vector<GaussianMomentRow> gaussian_moment_check(const GroupConfig& cfg,
                                                     const CVector& phi,
                                                     const MCParams& params,
                                                     int workers = 1);

/// E[F(g(T))] - F(e) - (1/4) int_0^T E[(LF)(g(s))] ds, trapezoid in time.
MCEstimate martingale_check(const Polynomial& f, const MCParams& params,
                            int workers = 1);

}  // namespace heatfock
