#include "heatfock/suite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "heatfock/fock.hpp"
#include "heatfock/geometry.hpp"
#include "heatfock/projections.hpp"
#include "heatfock/random_inputs.hpp"
#include "heatfock/stochastic.hpp"

namespace heatfock {

namespace {

// splitmix64 finalizer; keeps the sub-seeds of different checks apart.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t check, std::uint64_t sub = 0) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (check * 1000003ULL + sub + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

long scaled_paths(const SuiteOptions& opts, long paths) {
  return std::max(100L, std::lround(double(paths) * opts.path_scale));
}

MCParams mc_params(const SuiteOptions& opts, int steps, long paths, std::uint64_t seed) {
  MCParams p;
  p.T = opts.T;
  p.steps = steps;
  p.paths = scaled_paths(opts, paths);
  p.seed = seed;
  return p;
}

CheckRow exact_row(std::string name, const SuiteOptions& opts, cplx target, cplx estimate,
                   bool pass, std::uint64_t seed = 0) {
  CheckRow row;
  row.experiment = std::move(name);
  row.T = opts.T;
  row.seed = seed;
  row.target = target;
  row.estimate = estimate;
  row.pass = pass;
  return row;
}

CheckRow mc_row(std::string name, const MCParams& p, cplx target, const MCEstimate& est) {
  CheckRow row;
  row.experiment = std::move(name);
  row.T = p.T;
  row.steps = p.steps;
  row.paths = est.paths;
  row.seed = p.seed;
  row.target = target;
  row.estimate = est.mean;
  row.stderr = est.stderr;
  row.statistical = true;
  row.pass = est.within(target);
  return row;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double max_abs_diff(const GroupElement& a, const GroupElement& b) {
  double m = 0.0;
  for (int j = 0; j < a.w.size(); ++j) m = std::max(m, std::abs(a.w(j) - b.w(j)));
  for (int j = 0; j < a.c.size(); ++j) m = std::max(m, std::abs(a.c(j) - b.c(j)));
  return m;
}

double max_coef(const Polynomial& f) {
  double m = 0.0;
  for (const auto& [mono, coef] : f.terms()) m = std::max(m, std::abs(coef));
  return m;
}

std::vector<Polynomial> random_holomorphic(const ConfigPtr& cfg, InputRng& rng, int count,
                                           int max_degree, int max_terms = 6) {
  RandomPolyOptions ro;
  ro.max_degree = max_degree;
  ro.max_terms = max_terms;
  std::vector<Polynomial> out;
  for (int i = 0; i < count; ++i) out.push_back(random_polynomial(cfg, rng, ro));
  return out;
}

// Holomorphic polynomial with a monomial in two or more variables. Affine
// polynomials have an exactly zero residual on the grid.
Polynomial random_non_affine(const ConfigPtr& cfg, InputRng& rng, int max_degree) {
  RandomPolyOptions ro;
  ro.max_degree = max_degree;
  ro.max_terms = 4;
  while (true) {
    Polynomial f = random_polynomial(cfg, rng, ro);
    for (const auto& [mono, coef] : f.terms()) {
      int vars = 0;
      for (int j = 0; j < cfg->dim(); ++j) vars += mono[j];
      if (vars >= 2) return f;
    }
  }
}

int top_degree(const FockTensor& alpha) {
  int top = 0;
  for (int r = 0; r <= alpha.maxrank(); ++r) {
    for (const auto& [word, value] : alpha.component(r)) {
      top = std::max(top, word_degree(word, alpha.config()->k()));
    }
  }
  return top;
}

std::string idx(const char* prefix, int i) { return std::string(prefix) + std::to_string(i); }

}  // namespace

bool CheckRow::hard_fail() const {
  return statistical &&
         std::abs(estimate - target) > 4.0 * stderr + 1e-12 * std::max(1.0, std::abs(target));
}

bool all_pass(const std::vector<CheckRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

std::vector<CheckRow> check_taylor_isometry(const SuiteOptions& opts) {
  std::vector<CheckRow> rows;
  const std::uint64_t group_seed = derive_seed(opts.seed, 1, 99);
  const std::vector<std::pair<std::string, ConfigPtr>> groups = {
      {"reference", opts.group}, {"k3d2", make_config(GroupConfig::random(3, 2, group_seed))}};
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& [label, cfg] = groups[gi];
    const std::uint64_t seed = derive_seed(opts.seed, 1, gi);
    InputRng rng(seed);
    double worst = 0.0;
    for (const auto& f : random_holomorphic(cfg, rng, 100, 6)) {
      const double fock = fock_norm_sq(taylor(f), opts.T);
      const double oracle = heat_expectation(abs_sq(f), opts.T).real();
      worst = std::max(worst, rel_err(fock, oracle));
    }
    rows.push_back(exact_row("taylor_isometry." + label + ".max_rel_err", opts, 0.0, worst,
                             worst <= 1e-9, seed));
  }
  return rows;
}

std::vector<CheckRow> check_worked_value(const SuiteOptions& opts) {
  const ConfigPtr& cfg = opts.group;
  const Polynomial c1 = Polynomial::variable(cfg, Polynomial::Var::C, 0);
  // E|c1(g(T))|^2 = E|B_0(T)|^2 + E|omega_1-area / 2|^2.
  double off_diag = 0.0;
  const CMatrix& om = cfg->omega()[0];
  for (int i = 0; i < cfg->k(); ++i) {
    for (int j = i + 1; j < cfg->k(); ++j) off_diag += std::norm(om(i, j));
  }
  const double target = opts.T + opts.T * opts.T * off_diag / 4.0;
  std::vector<CheckRow> rows;
  const double fock = fock_norm_sq(taylor(c1), opts.T);
  rows.push_back(exact_row("worked_c1.fock_norm_sq", opts, target, fock,
                           rel_err(fock, target) <= 1e-12));
  const double oracle = heat_expectation(abs_sq(c1), opts.T).real();
  rows.push_back(exact_row("worked_c1.heat_oracle", opts, target, oracle,
                           rel_err(oracle, target) <= 1e-12));
  const MCParams p = mc_params(opts, 1024, 100000, derive_seed(opts.seed, 2));
  const auto est = map_paths(
      p, cfg->dim(), 1,
      [&](long, const BrownianPath& b, cplx* out) {
        out[0] = std::norm(c1.eval(group_endpoint(*cfg, b)));
      },
      opts.workers);
  rows.push_back(mc_row("worked_c1.mc", p, target, est[0]));
  return rows;
}

std::vector<CheckRow> check_mean_value(const SuiteOptions& opts) {
  const ConfigPtr& cfg = opts.group;
  InputRng rng(derive_seed(opts.seed, 3, 1));
  const auto fs = random_holomorphic(cfg, rng, 20, 6);
  const MCParams p = mc_params(opts, 256, 40000, derive_seed(opts.seed, 3));
  const int width = static_cast<int>(fs.size());
  const auto est = map_paths(
      p, cfg->dim(), width,
      [&](long, const BrownianPath& b, cplx* out) {
        const GroupElement g = group_endpoint(*cfg, b);
        for (int i = 0; i < width; ++i) out[i] = fs[i].eval(g);
      },
      opts.workers);
  std::vector<CheckRow> rows;
  for (int i = 0; i < width; ++i) {
    rows.push_back(mc_row(idx("mean_value.f", i), p, fs[i].eval(cfg->identity()), est[i]));
  }
  return rows;
}

std::vector<CheckRow> check_skeleton(const SuiteOptions& opts) {
  const ConfigPtr& cfg = opts.group;
  InputRng rng(derive_seed(opts.seed, 4, 1));
  const auto ps = random_holomorphic(cfg, rng, 5, 4);
  std::vector<GroupElement> grid;
  for (int j = 0; j < 10; ++j) grid.push_back(random_element(*cfg, rng, 0.25 + 0.175 * j));
  std::vector<Polynomial> fs;
  std::vector<GroupElement> hs;
  for (const auto& f : ps) {
    for (const auto& h : grid) {
      fs.push_back(f);
      hs.push_back(h);
    }
  }
  const MCParams p = mc_params(opts, 64, 20000, derive_seed(opts.seed, 4));
  const auto est = skeleton_mc_batch(fs, hs, p, opts.workers);
  std::vector<CheckRow> rows;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const int pi = static_cast<int>(i / grid.size()), hi = static_cast<int>(i % grid.size());
    rows.push_back(mc_row(idx("skeleton.p", pi) + idx(".h", hi), p, fs[i].eval(hs[i]), est[i]));
  }
  return rows;
}

std::vector<CheckRow> check_ito_isometry(const SuiteOptions& opts) {
  const ConfigPtr& cfg = opts.group;
  const int dim = cfg->dim();
  InputRng rng(derive_seed(opts.seed, 5, 1));
  std::vector<FockTensor> alphas;
  std::vector<double> targets;
  for (int n = 1; n <= 3; ++n) {
    FockTensor alpha(cfg, n);
    Word word(n, 0);
    while (true) {
      alpha.set(word, rng.complex_normal());
      int pos = n - 1;
      while (pos >= 0 && ++word[pos] == dim) word[pos--] = 0;
      if (pos < 0) break;
    }
    targets.push_back(std::pow(opts.T, n) / std::tgamma(n + 1.0) * rank_norm_sq(alpha, n));
    alphas.push_back(std::move(alpha));
  }
  std::vector<ChaosEvaluator> evals;
  for (const auto& a : alphas) evals.emplace_back(a);
  const MCParams p = mc_params(opts, 1024, 100000, derive_seed(opts.seed, 5));
  const auto est = map_paths(
      p, dim, 6,
      [&](long, const BrownianPath& b, cplx* out) {
        const cplx x1 = evals[0].eval(b), x2 = evals[1].eval(b), x3 = evals[2].eval(b);
        out[0] = std::norm(x1);
        out[1] = std::norm(x2);
        out[2] = std::norm(x3);
        out[3] = x1 * std::conj(x2);
        out[4] = x1 * std::conj(x3);
        out[5] = x2 * std::conj(x3);
      },
      opts.workers);
  std::vector<CheckRow> rows;
  for (int n = 1; n <= 3; ++n) {
    rows.push_back(mc_row(idx("ito_isometry.n", n), p, targets[n - 1], est[n - 1]));
  }
  rows.push_back(mc_row("ito_orthogonality.n1n2", p, 0.0, est[3]));
  rows.push_back(mc_row("ito_orthogonality.n1n3", p, 0.0, est[4]));
  rows.push_back(mc_row("ito_orthogonality.n2n3", p, 0.0, est[5]));
  return rows;
}

std::vector<CheckRow> check_chaos_expansion(const SuiteOptions& opts) {
  const ConfigPtr& cfg = opts.group;
  InputRng rng(derive_seed(opts.seed, 6, 1));
  const MCParams p = mc_params(opts, 2048, 10000, derive_seed(opts.seed, 6));
  const std::vector<int> levels = {256, 512, 1024, 2048};
  std::vector<CheckRow> rows;
  for (int i = 0; i < 5; ++i) {
    const Polynomial f = random_non_affine(cfg, rng, 4);
    const auto res = chaos_residual_levels(f, p, levels, opts.workers);
    const std::string name = idx("chaos.f", i);
    for (std::size_t l = 0; l + 2 < levels.size(); ++l) {
      const double a = res[l].mean.real(), b = res[l + 1].mean.real();
      const double ratio = a / b;
      CheckRow row;
      row.experiment = name + ".ratio_" + std::to_string(levels[l]) + "_" +
                       std::to_string(levels[l + 1]);
      row.T = p.T;
      row.steps = levels[l + 1];
      row.paths = res[l].paths;
      row.seed = p.seed;
      row.target = 2.0;
      row.estimate = ratio;
      row.stderr = std::abs(ratio) * std::hypot(res[l].stderr / a, res[l + 1].stderr / b);
      row.pass = ratio >= 1.4 && ratio <= 2.8;
      rows.push_back(row);
    }
    const double threshold = 0.01 * fock_norm_sq(taylor(f), opts.T);
    CheckRow row;
    row.experiment = name + ".residual_2048";
    row.T = p.T;
    row.steps = levels.back();
    row.paths = res.back().paths;
    row.seed = p.seed;
    row.target = threshold;
    row.estimate = res.back().mean;
    row.stderr = res.back().stderr;
    row.pass = res.back().mean.real() <= threshold;
    rows.push_back(row);
  }
  return rows;
}

std::vector<CheckRow> check_algebraic_identities(const SuiteOptions& opts) {
  const double tol = 1e-10;
  const std::uint64_t seed = derive_seed(opts.seed, 7);
  InputRng rng(seed);
  const std::vector<ConfigPtr> groups = {
      opts.group, make_config(GroupConfig::random(3, 2, derive_seed(opts.seed, 7, 1)))};
  std::vector<CheckRow> rows;
  auto add = [&](const char* name, double err) {
    rows.push_back(exact_row(std::string("identity.") + name, opts, 0.0, err, err <= tol, seed));
  };

  double axioms = 0.0, commutator = 0.0, fields = 0.0;
  for (const auto& cfg : groups) {
    for (int t = 0; t < 200; ++t) {
      const auto a = random_element(*cfg, rng, 2.0);
      const auto b = random_element(*cfg, rng, 2.0);
      const auto c = random_element(*cfg, rng, 2.0);
      axioms = std::max(axioms, max_abs_diff(cfg->mul(cfg->mul(a, b), c),
                                             cfg->mul(a, cfg->mul(b, c))));
      axioms = std::max(axioms, max_abs_diff(cfg->mul(a, cfg->identity()), a));
      axioms = std::max(axioms, max_abs_diff(cfg->mul(cfg->identity(), a), a));
      axioms = std::max(axioms, max_abs_diff(cfg->mul(a, cfg->inverse(a)), cfg->identity()));
      const auto comm = cfg->mul(cfg->mul(a, b), cfg->mul(cfg->inverse(a), cfg->inverse(b)));
      commutator = std::max(commutator, max_abs_diff(comm, cfg->bracket(a, b)));
    }
    for (int t = 0; t < 20; ++t) {
      const auto f = random_holomorphic(cfg, rng, 1, 6).front();
      const auto h = random_element(*cfg, rng, 1.0);
      const auto k = random_element(*cfg, rng, 1.0);
      const Polynomial lhs = lid(lid(f, k), h) - lid(lid(f, h), k);
      const Polynomial rhs = lid(f, cfg->bracket(h, k));
      fields = std::max(fields, lhs.distance(rhs) / std::max(1.0, max_coef(rhs)));
    }
  }
  add("group_axioms", axioms);
  add("commutator", commutator);
  add("vector_field_commutator", fields);

  double holo = 0.0, modulus = 0.0, l_zero = 0.0, j0 = 0.0, round_trip = 0.0;
  for (const auto& cfg : groups) {
    for (const auto& f : random_holomorphic(cfg, rng, 30, 6)) {
      Polynomial grad_sq(cfg);
      for (int b = 0; b < cfg->dim(); ++b) {
        const AlgebraElement h = cfg->basis(b);
        AlgebraElement ih{h.w * cplx(0, 1), h.c * cplx(0, 1)};
        const Polynomial dh = lid(f, h);
        holo = std::max(holo, lid(f, ih).distance(dh * cplx(0, 1)) / std::max(1.0, max_coef(dh)));
        grad_sq += abs_sq(dh);
      }
      const Polynomial lhs = apply_L(abs_sq(f));
      modulus = std::max(modulus, lhs.distance(grad_sq * 4.0) / std::max(1.0, max_coef(lhs)));
      l_zero = std::max(l_zero, max_coef(apply_L(f)));
      const FockTensor alpha = taylor(f);
      j0 = std::max(j0, j0_residual(alpha));
      const Polynomial back = inverse_taylor(alpha);
      round_trip = std::max(round_trip, back.distance(f) / std::max(1.0, max_coef(f)));
      round_trip = std::max(round_trip, taylor(back, alpha.maxrank()).distance(alpha) /
                                            std::max(1.0, std::sqrt(fock_norm_sq(alpha, 1.0))));
    }
  }
  add("holomorphy", holo);
  add("modulus", modulus);
  add("L_annihilates_holomorphic", l_zero);
  add("j0_residual", j0);
  add("taylor_round_trip", round_trip);

  double defect = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int k = rng.integer(2, 5);
    const int d = rng.integer(1, 3);
    const GroupConfig cfg = GroupConfig::random(k, d, rng.next());
    const auto p = Projection::random(k, rng.integer(0, k), rng.next());
    const auto g = random_element(cfg, rng, 2.0);
    const auto h = random_element(cfg, rng, 2.0);
    const auto lhs = pi_P(p, cfg.mul(g, h));
    const auto rhs = cfg.mul(cfg.mul(pi_P(p, g), pi_P(p, h)), gamma_defect(cfg, p, g.w, h.w));
    defect = std::max(defect, max_abs_diff(lhs, rhs));
  }
  add("defect", defect);

  double routes = 0.0;
  for (const auto& cfg : groups) {
    for (int t = 0; t < 10; ++t) {
      const auto u = random_holomorphic(cfg, rng, 1, 4, 4).front();
      const auto p = Projection::random(cfg->k(), rng.integer(0, cfg->k()), rng.next());
      routes = std::max(routes, pullback_taylor_checked(u, p).route_gap);
    }
  }
  add("two_route_pullback", routes);

  double kappa2 = 0.0;
  for (const auto& cfg : groups) {
    auto coord = [&](const GroupElement& x, int b) {
      return b < cfg->k() ? x.w(b) : x.c(b - cfg->k());
    };
    for (int t = 0; t < 20; ++t) {
      const auto p = Projection::random(cfg->k(), rng.integer(0, cfg->k()), rng.next());
      const auto a1 = random_element(*cfg, rng, 1.0);
      const auto a2 = random_element(*cfg, rng, 1.0);
      // kappa_2(e) = pi_P k_2 (x) pi_P k_1 + Gamma_P(A_2, A_1).
      FockTensor expected(cfg, 2);
      const auto pk1 = pi_P(p, a1), pk2 = pi_P(p, a2);
      for (int b = 0; b < cfg->dim(); ++b) {
        for (int c = 0; c < cfg->dim(); ++c) expected.add({b, c}, coord(pk2, b) * coord(pk1, c));
      }
      const auto gamma = gamma_defect(*cfg, p, a2.w, a1.w);
      for (int m = 0; m < cfg->d(); ++m) expected.add({cfg->k() + m}, gamma.c(m));
      kappa2 = std::max(kappa2, kappa(cfg, p, {a1, a2}).distance(expected));
    }
  }
  add("kappa2_closed_form", kappa2);
  return rows;
}

std::vector<CheckRow> check_fejer_grading(const SuiteOptions& opts) {
  const ConfigPtr& cfg = opts.group;
  const std::uint64_t seed = derive_seed(opts.seed, 8);
  InputRng rng(seed);
  std::vector<FockTensor> tensors;
  for (const auto& f : random_holomorphic(cfg, rng, 10, 8)) tensors.push_back(taylor(f));
  // Dense tensors up to rank 3 (not in J0).
  for (int t = 0; t < 3; ++t) {
    FockTensor alpha(cfg, 3);
    alpha.set({}, rng.complex_normal());
    for (int n = 1; n <= 3; ++n) {
      for (int e = 0; e < 6; ++e) {
        Word word;
        for (int j = 0; j < n; ++j) word.push_back(rng.integer(0, cfg->dim() - 1));
        alpha.add(word, rng.complex_normal());
      }
    }
    tensors.push_back(std::move(alpha));
  }

  double unitary = 0.0, grading_j0 = 0.0;
  long survivors = 0;
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const FockTensor& alpha = tensors[i];
    const double norm = fock_norm_sq(alpha, opts.T);
    for (int j = 0; j < 64; ++j) {
      const FockTensor rotated = grading_pullback(alpha, 2 * std::numbers::pi * j / 64.0);
      unitary = std::max(unitary, rel_err(fock_norm_sq(rotated, opts.T), norm));
      if (i < 10) grading_j0 = std::max(grading_j0, j0_residual(rotated));
    }
    for (int n = 1; n <= 12; ++n) {
      const FockTensor cut = fejer_truncate(alpha, n);
      for (int r = n + 1; r <= cut.maxrank(); ++r) survivors += long(cut.component(r).size());
    }
  }
  std::vector<CheckRow> rows;
  rows.push_back(exact_row("grading.norm_invariance", opts, 0.0, unitary, unitary <= 1e-12, seed));
  rows.push_back(exact_row("grading.preserves_j0", opts, 0.0, grading_j0, grading_j0 <= 1e-10, seed));
  rows.push_back(exact_row("fejer.entries_above_rank_n", opts, 0.0, double(survivors),
                           survivors == 0, seed));

  // ||alpha(n) - alpha||^2 <= (L / n)^2 ||alpha||^2 with L the top degree.
  for (int n : {10, 100, 1000}) {
    double worst = 0.0;
    bool within_bound = true;
    for (const auto& alpha : tensors) {
      const double norm = fock_norm_sq(alpha, opts.T);
      const double err = fock_norm_sq(fejer_truncate(alpha, n) - alpha, opts.T);
      const double top = top_degree(alpha);
      within_bound = within_bound && err <= (top / n) * (top / n) * norm * (1 + 1e-12);
      worst = std::max(worst, err / norm);
    }
    rows.push_back(exact_row(idx("fejer.rel_error_n", n), opts, 0.0, worst, within_bound, seed));
  }
  for (std::size_t r = rows.size() - 2; r < rows.size(); ++r) {
    rows[r].pass = rows[r].pass && rows[r].estimate.real() < rows[r - 1].estimate.real();
  }
  return rows;
}

std::vector<CheckRow> check_projection_convergence(const SuiteOptions& opts) {
  const std::uint64_t seed = derive_seed(opts.seed, 9);
  const std::vector<std::pair<std::string, ConfigPtr>> groups = {
      {"reference", opts.group}, {"k6d1", make_config(GroupConfig::random(6, 1, seed))}};
  InputRng rng(derive_seed(opts.seed, 9, 1));
  std::vector<CheckRow> rows;
  for (const auto& [label, cfg] : groups) {
    std::vector<int> ranks;
    for (int n = 1; n <= cfg->k(); ++n) ranks.push_back(n);
    for (int i = 0; i < 3; ++i) {
      RandomPolyOptions ro;
      ro.max_degree = 4;
      ro.max_terms = 5;
      Polynomial u = random_polynomial(cfg, rng, ro);
      // Make sure the top coordinate is present so P_{k-1} differs from I.
      u += Polynomial::variable(cfg, Polynomial::Var::W, cfg->k() - 1) *
           Polynomial::variable(cfg, Polynomial::Var::W, 0) * rng.complex_normal();
      const auto conv = projection_convergence(u, ranks);
      double at_full = 0.0, below_full = 0.0;
      for (const auto& row : conv) {
        if (row.projection_rank == cfg->k()) {
          at_full = std::max(at_full, row.error);
        } else if (row.projection_rank == cfg->k() - 1) {
          below_full = std::max(below_full, row.error);
        }
      }
      const std::string name = "projection." + label + idx(".u", i);
      rows.push_back(exact_row(name + ".error_at_full_rank", opts, 0.0, at_full,
                               at_full == 0.0, seed));
      rows.push_back(exact_row(name + ".error_below_full_rank", opts, 0.0, below_full,
                               below_full > 0.0, seed));
    }
  }
  return rows;
}

std::vector<CheckRow> check_bounds(const SuiteOptions& opts) {
  const ConfigPtr& cfg = opts.group;
  const std::uint64_t seed = derive_seed(opts.seed, 10);
  InputRng rng(seed);
  const double times[3] = {0.5, 1.0, 2.0};
  long cases = 0, barg_viol = 0, p2_viol = 0, p4_viol = 0, p3_viol = 0;
  double barg_margin = INFINITY, p2_margin = INFINITY, p4_margin = INFINITY,
         p3_margin = INFINITY;
  MCParams p3 = mc_params(opts, 64, 4000, derive_seed(opts.seed, 10, 1));
  for (int t = 0; t < 100; ++t) {
    const double T = times[t % 3];
    const Polynomial f = random_holomorphic(cfg, rng, 1, 3, 4).front();
    const GroupElement h = random_element(*cfg, rng, rng.uniform(0.2, 2.0));
    DistanceOptions dopt;
    dopt.segments = 4;
    dopt.restarts = 4;
    dopt.seed = rng.next();
    const double d = distance_upper(*cfg, h, dopt).value;
    ++cases;
    const BoundRow b = bargmann_bound(f, h, T, std::sqrt(fock_norm_sq(taylor(f), T)), d, t);
    barg_viol += !b.pass;
    barg_margin = std::min(barg_margin, b.margin / b.bound);
    MCParams mc = p3;
    mc.T = T;
    const BoundRow g2 = gaussian_bound(f, h, T, 2.0, lp_norm(f, T, 2.0, mc).value, d, t);
    p2_viol += !g2.pass;
    p2_margin = std::min(p2_margin, g2.margin / g2.bound);
    const BoundRow g4 = gaussian_bound(f, h, T, 4.0, lp_norm(f, T, 4.0, mc).value, d, t);
    p4_viol += !g4.pass;
    p4_margin = std::min(p4_margin, g4.margin / g4.bound);
    if (t < 10) {
      mc.seed = derive_seed(opts.seed, 10, 100 + t);
      const LpNorm l3 = lp_norm(f, T, 3.0, mc, opts.workers);
      const BoundRow g3 = gaussian_bound(f, h, T, 3.0, l3.value, d, t);
      p3_viol += !g3.pass;
      p3_margin = std::min(p3_margin, g3.margin / g3.bound);
    }
  }
  std::vector<CheckRow> rows;
  auto add = [&](const std::string& name, long viol, double margin, bool mc) {
    CheckRow row = exact_row(name + ".violations", opts, 0.0, double(viol), viol == 0, seed);
    if (mc) {
      row.steps = p3.steps;
      row.paths = p3.paths;
      row.seed = p3.seed;
    }
    rows.push_back(row);
    rows.push_back(exact_row(name + ".min_rel_margin", opts, 0.0, margin, margin >= 0.0, seed));
  };
  add("bounds.bargmann", barg_viol, barg_margin, false);
  add("bounds.gaussian_p2", p2_viol, p2_margin, false);
  add("bounds.gaussian_p4", p4_viol, p4_margin, false);
  add("bounds.gaussian_p3", p3_viol, p3_margin, true);
  rows.push_back(exact_row("bounds.cases", opts, 100.0, double(cases), cases == 100, seed));
  const double k_heis = GroupConfig::heisenberg().k_omega();
  rows.push_back(exact_row("spot.k_omega_heisenberg", opts, -1.0, k_heis,
                           std::abs(k_heis + 1.0) <= 1e-12));
  rows.push_back(exact_row("spot.heat_c_0", opts, 1.0, heat_c(0.0), heat_c(0.0) == 1.0));
  return rows;
}

const std::vector<SuiteCheck>& suite_checks() {
  static const std::vector<SuiteCheck> checks = {
      {1, "taylor_isometry", check_taylor_isometry},
      {2, "worked_value", check_worked_value},
      {3, "mean_value", check_mean_value},
      {4, "skeleton", check_skeleton},
      {5, "ito_isometry", check_ito_isometry},
      {6, "chaos_expansion", check_chaos_expansion},
      {7, "algebraic_identities", check_algebraic_identities},
      {8, "fejer_grading", check_fejer_grading},
      {9, "projection_convergence", check_projection_convergence},
      {10, "bounds", check_bounds},
  };
  return checks;
}

}  // namespace heatfock
