#include "heatfock/fock.hpp"

#include <cmath>
#include <functional>

namespace heatfock {

namespace {

// Calls fn(word) for every word of length n over {0..dim-1}, in
// lexicographic order.
void for_each_word(int dim, int n, const std::function<void(const Word&)>& fn) {
  Word word(n, 0);
  while (true) {
    fn(word);
    int pos = n - 1;
    while (pos >= 0 && word[pos] == dim - 1) {
      word[pos] = 0;
      --pos;
    }
    if (pos < 0) return;
    ++word[pos];
  }
}

}  // namespace

FockTensor::FockTensor(ConfigPtr cfg, int maxrank) : cfg_(std::move(cfg)) {
  if (!cfg_) throw ConfigError("fock: null config");
  if (maxrank < 0) throw DomainError("fock: maxrank must be nonnegative");
  ranks_.resize(maxrank + 1);
}

void FockTensor::check_word(const Word& word) const {
  if (static_cast<int>(word.size()) > maxrank()) {
    throw DomainError("fock: word longer than maxrank");
  }
  for (int idx : word) {
    if (idx < 0 || idx >= dim()) throw DomainError("fock: basis index out of range");
  }
}

cplx FockTensor::get(const Word& word) const {
  if (static_cast<int>(word.size()) > maxrank()) return 0.0;
  const Component& comp = ranks_[word.size()];
  const auto it = comp.find(word);
  return it == comp.end() ? cplx{} : it->second;
}

void FockTensor::set(const Word& word, cplx value) {
  check_word(word);
  Component& comp = ranks_[word.size()];
  if (value == 0.0) {
    comp.erase(word);
  } else {
    comp[word] = value;
  }
}

void FockTensor::add(const Word& word, cplx value) {
  check_word(word);
  Component& comp = ranks_[word.size()];
  auto [it, inserted] = comp.try_emplace(word, value);
  if (!inserted) it->second += value;
  if (it->second == 0.0) comp.erase(it);
}

bool FockTensor::is_zero() const { return top_rank() < 0; }

int FockTensor::top_rank() const {
  for (int n = maxrank(); n >= 0; --n) {
    if (!ranks_[n].empty()) return n;
  }
  return -1;
}

void FockTensor::require_compatible(const FockTensor& other) const {
  if (cfg_ != other.cfg_ && !(*cfg_ == *other.cfg_)) {
    throw ConfigError("fock: config mismatch");
  }
}

FockTensor& FockTensor::operator+=(const FockTensor& other) {
  require_compatible(other);
  if (other.maxrank() > maxrank()) ranks_.resize(other.maxrank() + 1);
  for (int n = 0; n <= other.maxrank(); ++n) {
    for (const auto& [w, v] : other.ranks_[n]) add(w, v);
  }
  return *this;
}

FockTensor& FockTensor::operator-=(const FockTensor& other) {
  require_compatible(other);
  if (other.maxrank() > maxrank()) ranks_.resize(other.maxrank() + 1);
  for (int n = 0; n <= other.maxrank(); ++n) {
    for (const auto& [w, v] : other.ranks_[n]) add(w, -v);
  }
  return *this;
}

FockTensor& FockTensor::operator*=(cplx s) {
  for (auto& comp : ranks_) {
    for (auto it = comp.begin(); it != comp.end();) {
      it->second *= s;
      it = it->second == 0.0 ? comp.erase(it) : std::next(it);
    }
  }
  return *this;
}

double FockTensor::distance(const FockTensor& other) const {
  double worst = 0.0;
  const int top = std::max(maxrank(), other.maxrank());
  for (int n = 0; n <= top; ++n) {
    if (n <= maxrank()) {
      for (const auto& [w, v] : ranks_[n]) {
        worst = std::max(worst, std::abs(v - other.get(w)));
      }
    }
    if (n <= other.maxrank()) {
      for (const auto& [w, v] : other.ranks_[n]) {
        if (n > maxrank() || !ranks_[n].count(w)) {
          worst = std::max(worst, std::abs(v));
        }
      }
    }
  }
  return worst;
}

int word_degree(const Word& word, int k) {
  int deg = 0;
  for (int idx : word) deg += idx < k ? 1 : 2;
  return deg;
}

FockTensor taylor(const Polynomial& f, int maxrank) {
  if (!f.is_holomorphic()) throw DomainError("taylor: polynomial is not holomorphic");
  const int degree = std::max(0, f.graded_degree());
  if (degree > f.config()->degree_cap()) {
    throw DomainError("taylor: graded degree exceeds cap");
  }
  if (maxrank < 0) maxrank = degree;
  if (maxrank < degree) {
    throw DomainError("taylor: maxrank below the graded degree");
  }
  const GroupConfig& cfg = *f.config();
  std::vector<AlgebraElement> basis;
  for (int b = 0; b < cfg.dim(); ++b) basis.push_back(cfg.basis(b));

  FockTensor alpha(f.config(), maxrank);
  // Depth-first over suffixes: `g` is h_j~ ... h_n~ f for the word suffix
  // built so far; the next letter is prepended.
  Word suffix;
  std::function<void(const Polynomial&)> visit = [&](const Polynomial& g) {
    alpha.set(suffix, g.constant_term());
    if (static_cast<int>(suffix.size()) == maxrank) return;
    for (int b = 0; b < cfg.dim(); ++b) {
      Polynomial next = lid(g, basis[b]);
      if (next.is_zero()) continue;
      suffix.insert(suffix.begin(), b);
      visit(next);
      suffix.erase(suffix.begin());
    }
  };
  visit(f);
  return alpha;
}

Polynomial inverse_taylor(const FockTensor& alpha) {
  const ConfigPtr& cfg = alpha.config();
  const int k = cfg->k();
  std::vector<Polynomial> coords;
  for (int b = 0; b < cfg->dim(); ++b) {
    coords.push_back(b < k ? Polynomial::variable(cfg, Polynomial::Var::W, b)
                           : Polynomial::variable(cfg, Polynomial::Var::C, b - k));
  }
  Polynomial out(cfg);
  double factorial = 1.0;
  for (int n = 0; n <= alpha.maxrank(); ++n) {
    if (n > 0) factorial *= n;
    for (const auto& [word, value] : alpha.component(n)) {
      Polynomial term = Polynomial::constant(cfg, value / factorial);
      for (int idx : word) term = term * coords[idx];
      out += term;
    }
  }
  return out;
}

double rank_norm_sq(const FockTensor& alpha, int rank) {
  if (rank > alpha.maxrank()) return 0.0;
  double total = 0.0;
  for (const auto& [word, value] : alpha.component(rank)) total += std::norm(value);
  return total;
}

double fock_norm_sq(const FockTensor& alpha, double T) {
  return std::real(fock_inner(alpha, alpha, T));
}

cplx fock_inner(const FockTensor& alpha, const FockTensor& beta, double T) {
  if (!(T > 0.0)) throw DomainError("fock_inner: T must be positive");
  cplx total = 0.0;
  double weight = 1.0;
  const int top = std::min(alpha.maxrank(), beta.maxrank());
  for (int n = 0; n <= top; ++n) {
    if (n > 0) weight *= T / n;
    cplx rank_sum = 0.0;
    for (const auto& [word, value] : alpha.component(n)) {
      rank_sum += value * std::conj(beta.get(word));
    }
    total += weight * rank_sum;
  }
  return total;
}

double j0_residual(const FockTensor& alpha) {
  const GroupConfig& cfg = *alpha.config();
  const int k = cfg.k();
  const int d = cfg.d();
  const int dim = cfg.dim();
  double worst = 0.0;
  for (int total = 2; total <= alpha.maxrank(); ++total) {
    for (int p = 0; p + 2 <= total; ++p) {
      const int q = total - 2 - p;
      for_each_word(dim, p, [&](const Word& u) {
        for_each_word(dim, q, [&](const Word& v) {
          Word lhs = u;
          lhs.resize(p + 2);
          lhs.insert(lhs.end(), v.begin(), v.end());
          Word swapped = lhs;
          Word bracket_word = u;
          bracket_word.push_back(0);
          bracket_word.insert(bracket_word.end(), v.begin(), v.end());
          for (int h = 0; h < dim; ++h) {
            for (int kk = h + 1; kk < dim; ++kk) {
              lhs[p] = h;
              lhs[p + 1] = kk;
              swapped[p] = kk;
              swapped[p + 1] = h;
              cplx value = alpha.get(lhs) - alpha.get(swapped);
              if (h < k && kk < k) {
                for (int m = 0; m < d; ++m) {
                  const cplx coef = cfg.omega()[m](h, kk);
                  if (coef == 0.0) continue;
                  bracket_word[p] = k + m;
                  value -= coef * alpha.get(bracket_word);
                }
              }
              worst = std::max(worst, std::abs(value));
            }
          }
        });
      });
    }
  }
  return worst;
}

FockTensor grading_pullback(const FockTensor& alpha, double theta) {
  const int k = alpha.config()->k();
  FockTensor out(alpha.config(), alpha.maxrank());
  for (int n = 0; n <= alpha.maxrank(); ++n) {
    for (const auto& [word, value] : alpha.component(n)) {
      const double phase = theta * word_degree(word, k);
      out.set(word, value * std::polar(1.0, phase));
    }
  }
  return out;
}

FockTensor fejer_truncate(const FockTensor& alpha, int n) {
  if (n <= 0) throw DomainError("fejer_truncate: n must be positive");
  const int k = alpha.config()->k();
  FockTensor out(alpha.config(), alpha.maxrank());
  for (int r = 0; r <= alpha.maxrank(); ++r) {
    for (const auto& [word, value] : alpha.component(r)) {
      const int degree = word_degree(word, k);
      const double weight = std::max(0.0, 1.0 - double(degree) / double(n));
      if (weight > 0.0) out.set(word, value * weight);
    }
  }
  return out;
}

}  // namespace heatfock
