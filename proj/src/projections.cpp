#include "heatfock/projections.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include <Eigen/QR>

#include "heatfock/rng.hpp"

namespace heatfock {

Projection::Projection(CMatrix family) : family_(std::move(family)) {
  if (family_.rows() <= 0) throw ConfigError("projection: k must be positive");
  if (family_.cols() > family_.rows()) throw ConfigError("projection: rank exceeds k");
  const CMatrix gram = family_.adjoint() * family_;
  const CMatrix eye = CMatrix::Identity(family_.cols(), family_.cols());
  if (family_.cols() > 0 && (gram - eye).cwiseAbs().maxCoeff() > 1e-12) {
    throw ConfigError("projection: family is not orthonormal");
  }
  matrix_ = family_ * family_.adjoint();
}

Projection Projection::coordinate(int k, int n) {
  if (n < 0 || n > k) throw ConfigError("projection: rank must lie in [0, k]");
  CMatrix family = CMatrix::Zero(k, n);
  for (int j = 0; j < n; ++j) family(j, j) = 1.0;
  return Projection(std::move(family));
}

Projection Projection::random(int k, int rank, std::uint64_t seed) {
  if (rank < 0 || rank > k) throw ConfigError("projection: rank must lie in [0, k]");
  InputRng rng(seed);
  CMatrix x(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) x(i, j) = rng.complex_normal();
  }
  Eigen::HouseholderQR<CMatrix> qr(x);
  return Projection(CMatrix(qr.householderQ() * CMatrix::Identity(k, rank)));
}

GroupElement pi_P(const Projection& p, const GroupElement& g) {
  return {p.apply(g.w), g.c};
}

GroupElement gamma_defect(const GroupConfig& cfg, const Projection& p,
                          const CVector& w, const CVector& w2) {
  GroupElement out = cfg.identity();
  out.c = 0.5 * (cfg.omega_form(w, w2) - cfg.omega_form(p.apply(w), p.apply(w2)));
  return out;
}

AlgebraElement k_P(const GroupConfig& cfg, const Projection& p,
                   const AlgebraElement& k, const GroupElement& g) {
  AlgebraElement out{p.apply(k.w), k.c};
  out.c += gamma_defect(cfg, p, g.w, k.w).c;
  return out;
}

namespace {

// Coefficients of K(g) = k^P(g) on the basis, as polynomials in w.
std::vector<Polynomial> k_P_coefficients(const ConfigPtr& cfg, const Projection& p,
                                         const AlgebraElement& k) {
  const int kk = cfg->k();
  std::vector<Polynomial> out;
  const CVector pa = p.apply(k.w);
  for (int j = 0; j < kk; ++j) out.push_back(Polynomial::constant(cfg, pa(j)));
  const CMatrix& pm = p.matrix();
  for (int m = 0; m < cfg->d(); ++m) {
    const CMatrix& om = cfg->omega()[m];
    // (omega(w, A) - omega(P w, P A)) / 2 = w^T (Omega A - P^T Omega P A) / 2.
    const CVector row = 0.5 * (om * k.w - pm.transpose() * (om * pa));
    Polynomial coef = Polynomial::constant(cfg, k.c(m));
    for (int l = 0; l < kk; ++l) {
      if (row(l) != 0.0) {
        coef += Polynomial::variable(cfg, Polynomial::Var::W, l) * row(l);
      }
    }
    out.push_back(std::move(coef));
  }
  return out;
}

// One step of the recursion.
PolyTensor kappa_step(const ConfigPtr& cfg, const Projection& p,
                      const AlgebraElement& k, const PolyTensor* prev) {
  const auto coefs = k_P_coefficients(cfg, p, k);
  PolyTensor next;
  auto accumulate = [&](Word word, const Polynomial& value) {
    if (value.is_zero()) return;
    auto it = next.find(word);
    if (it == next.end()) {
      next.emplace(std::move(word), value);
    } else {
      it->second += value;
      if (it->second.is_zero()) next.erase(it);
    }
  };
  if (prev == nullptr) {
    for (int b = 0; b < cfg->dim(); ++b) accumulate({b}, coefs[b]);
    return next;
  }
  for (const auto& [word, value] : *prev) {
    for (int b = 0; b < cfg->dim(); ++b) {
      if (coefs[b].is_zero()) continue;
      Word longer;
      longer.reserve(word.size() + 1);
      longer.push_back(b);
      longer.insert(longer.end(), word.begin(), word.end());
      accumulate(std::move(longer), coefs[b] * value);
    }
    accumulate(word, lid(value, k));
  }
  return next;
}

void require_directions(const ConfigPtr& cfg, const Projection& p,
                        const std::vector<AlgebraElement>& directions) {
  if (directions.empty()) throw DomainError("kappa: need at least one direction");
  if (p.k() != cfg->k()) throw ConfigError("kappa: projection dimension mismatch");
  for (const auto& h : directions) cfg->check(h);
}

FockTensor at_identity(const ConfigPtr& cfg, const PolyTensor& t, int maxrank) {
  FockTensor out(cfg, maxrank);
  for (const auto& [word, value] : t) {
    const cplx v = value.constant_term();
    if (v != 0.0) out.set(word, v);
  }
  return out;
}

}  // namespace

PolyTensor kappa_symbolic(const ConfigPtr& cfg, const Projection& p,
                          const std::vector<AlgebraElement>& directions) {
  require_directions(cfg, p, directions);
  PolyTensor current = kappa_step(cfg, p, directions.front(), nullptr);
  for (std::size_t j = 1; j < directions.size(); ++j) {
    current = kappa_step(cfg, p, directions[j], &current);
  }
  return current;
}

FockTensor kappa(const ConfigPtr& cfg, const Projection& p,
                 const std::vector<AlgebraElement>& directions) {
  return at_identity(cfg, kappa_symbolic(cfg, p, directions),
                     static_cast<int>(directions.size()));
}

cplx pair(const FockTensor& alpha, const FockTensor& kappa) {
  cplx total = 0.0;
  const int top = std::min(alpha.maxrank(), kappa.maxrank());
  for (int n = 0; n <= top; ++n) {
    for (const auto& [word, value] : kappa.component(n)) total += alpha.get(word) * value;
  }
  return total;
}

PullbackResult pullback_taylor_checked(const Polynomial& u, const Projection& p,
                                       int maxrank) {
  if (!u.is_holomorphic()) throw DomainError("pullback_taylor: u is not holomorphic");
  const ConfigPtr& cfg = u.config();
  if (p.k() != cfg->k()) throw ConfigError("pullback_taylor: projection dimension mismatch");
  const int degree = std::max(0, u.graded_degree());
  if (maxrank < 0) maxrank = degree;
  const FockTensor direct = taylor(substitute_w(u, p.matrix()), maxrank);
  const FockTensor alpha = taylor(u, std::max(maxrank, degree));

  // Words are visited by growing the innermost direction list k_1, k_2, ...;
  // the word paired with (k_1..k_n) is (k_n, ..., k_1).
  std::vector<AlgebraElement> basis;
  for (int b = 0; b < cfg->dim(); ++b) basis.push_back(cfg->basis(b));
  double worst = std::abs(direct.scalar() - alpha.scalar());
  Word reversed;
  std::function<void(const PolyTensor&)> visit = [&](const PolyTensor& current) {
    const int n = static_cast<int>(reversed.size());
    const FockTensor at_e = at_identity(cfg, current, n);
    const Word word(reversed.rbegin(), reversed.rend());
    const cplx via_kappa = pair(alpha, at_e);
    const cplx expected = direct.get(word);
    worst = std::max(worst, std::abs(via_kappa - expected) / std::max(1.0, std::abs(expected)));
    if (n == maxrank) return;
    for (int b = 0; b < cfg->dim(); ++b) {
      reversed.push_back(b);
      visit(kappa_step(cfg, p, basis[b], &current));
      reversed.pop_back();
    }
  };
  if (maxrank > 0) {
    for (int b = 0; b < cfg->dim(); ++b) {
      reversed.push_back(b);
      visit(kappa_step(cfg, p, basis[b], nullptr));
      reversed.pop_back();
    }
  }
  return {direct, worst};
}

FockTensor pullback_taylor(const Polynomial& u, const Projection& p, int maxrank) {
  PullbackResult res = pullback_taylor_checked(u, p, maxrank);
  if (res.route_gap > 1e-10) {
    std::ostringstream msg;
    msg << "pullback_taylor: routes disagree by " << res.route_gap;
    throw ConsistencyError(msg.str());
  }
  return std::move(res.tensor);
}

std::vector<ConvergenceRow> projection_convergence(const Polynomial& u,
                                                   const std::vector<int>& ranks) {
  if (!u.is_holomorphic()) throw DomainError("projection_convergence: u is not holomorphic");
  const int k = u.config()->k();
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i] < 0 || ranks[i] > k || (i > 0 && ranks[i] <= ranks[i - 1])) {
      throw ConfigError("projection_convergence: ranks must increase within [0, k]");
    }
  }
  const FockTensor alpha = taylor(u);
  std::vector<double> previous(alpha.maxrank() + 1, INFINITY);
  std::vector<ConvergenceRow> rows;
  for (int n_proj : ranks) {
    const FockTensor pulled = pullback_taylor(u, Projection::coordinate(k, n_proj),
                                              alpha.maxrank());
    const FockTensor diff = alpha - pulled;
    for (int r = 0; r <= alpha.maxrank(); ++r) {
      const double err = std::sqrt(rank_norm_sq(diff, r));
      rows.push_back({n_proj, r, err, err <= previous[r] + 1e-12});
      previous[r] = err;
    }
  }
  return rows;
}

}  // namespace heatfock
