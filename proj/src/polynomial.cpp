#include "heatfock/polynomial.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace heatfock {

namespace {

void erase_small(Polynomial::Terms& terms) {
  for (auto it = terms.begin(); it != terms.end();) {
    if (std::abs(it->second) < Polynomial::kCleanupThreshold) {
      it = terms.erase(it);
    } else {
      ++it;
    }
  }
}

int var_weight(int var, int k, int d) {
  const int block = var % (k + d);
  return block < k ? 1 : 2;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Polynomial::Polynomial(ConfigPtr cfg) : cfg_(std::move(cfg)) {
  if (!cfg_) throw ConfigError("polynomial: null config");
}

Polynomial Polynomial::constant(ConfigPtr cfg, cplx value) {
  Polynomial p(std::move(cfg));
  p.add_term(Monomial(p.num_vars(), 0), value);
  return p;
}

Polynomial Polynomial::variable(ConfigPtr cfg, Var kind, int index) {
  Polynomial p(std::move(cfg));
  const int k = p.cfg_->k();
  const int d = p.cfg_->d();
  const int limit = (kind == Var::W || kind == Var::WBar) ? k : d;
  if (index < 0 || index >= limit) {
    throw ConfigError("polynomial: variable index out of range");
  }
  int slot = 0;
  switch (kind) {
    case Var::W: slot = index; break;
    case Var::C: slot = k + index; break;
    case Var::WBar: slot = k + d + index; break;
    case Var::CBar: slot = 2 * k + d + index; break;
  }
  Monomial m(p.num_vars(), 0);
  m[slot] = 1;
  p.add_term(m, 1.0);
  return p;
}

bool Polynomial::is_holomorphic() const {
  const int half = cfg_->dim();
  for (const auto& [m, coef] : terms_) {
    for (int v = half; v < 2 * half; ++v) {
      if (m[v] != 0) return false;
    }
  }
  return true;
}

int Polynomial::graded_degree() const {
  int best = -1;
  const int k = cfg_->k();
  const int d = cfg_->d();
  for (const auto& [m, coef] : terms_) {
    int deg = 0;
    for (int v = 0; v < num_vars(); ++v) deg += m[v] * var_weight(v, k, d);
    best = std::max(best, deg);
  }
  return best;
}

cplx Polynomial::constant_term() const {
  return coefficient(Monomial(num_vars(), 0));
}

cplx Polynomial::coefficient(const Monomial& m) const {
  const auto it = terms_.find(m);
  return it == terms_.end() ? cplx{} : it->second;
}

cplx Polynomial::eval(const GroupElement& g) const {
  cfg_->check(g);
  const int k = cfg_->k();
  const int d = cfg_->d();
  std::vector<cplx> values(num_vars());
  for (int j = 0; j < k; ++j) {
    values[j] = g.w(j);
    values[k + d + j] = std::conj(g.w(j));
  }
  for (int m = 0; m < d; ++m) {
    values[k + m] = g.c(m);
    values[2 * k + d + m] = std::conj(g.c(m));
  }
  cplx total = 0.0;
  for (const auto& [mono, coef] : terms_) {
    cplx term = coef;
    for (int v = 0; v < num_vars(); ++v) {
      for (int e = 0; e < mono[v]; ++e) term *= values[v];
    }
    total += term;
  }
  return total;
}

Polynomial Polynomial::conj() const {
  Polynomial out(cfg_);
  const int half = cfg_->dim();
  for (const auto& [m, coef] : terms_) {
    Monomial swapped(m.size());
    for (int v = 0; v < half; ++v) {
      swapped[v] = m[v + half];
      swapped[v + half] = m[v];
    }
    out.terms_.emplace(std::move(swapped), std::conj(coef));
  }
  return out;
}

void Polynomial::add_term(const Monomial& m, cplx coef) {
  if (static_cast<int>(m.size()) != num_vars()) {
    throw ConfigError("polynomial: monomial has wrong number of variables");
  }
  auto [it, inserted] = terms_.try_emplace(m, coef);
  if (!inserted) it->second += coef;
  if (std::abs(it->second) < kCleanupThreshold) terms_.erase(it);
}

void Polynomial::require_same_config(const Polynomial& other) const {
  if (cfg_ != other.cfg_ && !(*cfg_ == *other.cfg_)) {
    throw ConfigError("polynomial: config mismatch");
  }
}

void Polynomial::check_degree_cap() const {
  if (graded_degree() > cfg_->degree_cap()) {
    std::ostringstream msg;
    msg << "polynomial: graded degree " << graded_degree()
        << " exceeds cap " << cfg_->degree_cap();
    throw DomainError(msg.str());
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  require_same_config(other);
  for (const auto& [m, coef] : other.terms_) {
    auto [it, inserted] = terms_.try_emplace(m, coef);
    if (!inserted) it->second += coef;
  }
  erase_small(terms_);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  require_same_config(other);
  for (const auto& [m, coef] : other.terms_) {
    auto [it, inserted] = terms_.try_emplace(m, -coef);
    if (!inserted) it->second -= coef;
  }
  erase_small(terms_);
  return *this;
}

Polynomial& Polynomial::operator*=(cplx scalar) {
  for (auto& [m, coef] : terms_) coef *= scalar;
  erase_small(terms_);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.require_same_config(b);
  Polynomial out(a.cfg_);
  Polynomial::Monomial prod(a.num_vars());
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      for (std::size_t v = 0; v < prod.size(); ++v) {
        const int e = ma[v] + mb[v];
        if (e > 255) throw DomainError("polynomial: exponent overflow");
        prod[v] = static_cast<std::uint8_t>(e);
      }
      auto [it, inserted] = out.terms_.try_emplace(prod, ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  }
  erase_small(out.terms_);
  out.check_degree_cap();
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  const int k = cfg_->k();
  const int d = cfg_->d();
  std::string out;
  for (const auto& [m, coef] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + format_double(coef.real());
    out += coef.imag() < 0 || std::signbit(coef.imag()) ? "-" : "+";
    out += format_double(std::abs(coef.imag())) + "i)";
    for (int v = 0; v < num_vars(); ++v) {
      if (m[v] == 0) continue;
      const int block = v / (k + d);
      const int local = v % (k + d);
      std::string name = local < k ? "w" : "c";
      if (block == 1) name += "bar";
      name += std::to_string(local < k ? local + 1 : local - k + 1);
      out += " * " + name;
      if (m[v] > 1) out += "^" + std::to_string(m[v]);
    }
  }
  return out;
}

double Polynomial::distance(const Polynomial& other) const {
  require_same_config(other);
  double worst = 0.0;
  for (const auto& [m, coef] : terms_) {
    worst = std::max(worst, std::abs(coef - other.coefficient(m)));
  }
  for (const auto& [m, coef] : other.terms_) {
    if (!terms_.count(m)) worst = std::max(worst, std::abs(coef));
  }
  return worst;
}

Polynomial abs_sq(const Polynomial& f) { return f * f.conj(); }

Polynomial lid(const Polynomial& f, const AlgebraElement& h) {
  const GroupConfig& cfg = *f.config();
  cfg.check(h);
  const int k = cfg.k();
  const int d = cfg.d();
  const int half = k + d;
  // v_m(w) = a_m + sum_i u(m, i) w_i with u(m, i) = (Omega_m A)_i / 2.
  CMatrix u(d, k);
  for (int m = 0; m < d; ++m) u.row(m) = 0.5 * (cfg.omega()[m] * h.w).transpose();

  Polynomial out(f.config());
  Polynomial::Monomial mono;
  for (const auto& [m, coef] : f.terms()) {
    for (int j = 0; j < k; ++j) {
      if (m[j] > 0 && h.w(j) != 0.0) {
        mono = m;
        --mono[j];
        out.add_term(mono, coef * double(m[j]) * h.w(j));
      }
      if (m[half + j] > 0 && h.w(j) != 0.0) {
        mono = m;
        --mono[half + j];
        out.add_term(mono, coef * double(m[half + j]) * std::conj(h.w(j)));
      }
    }
    for (int mi = 0; mi < d; ++mi) {
      const int cv = k + mi;
      if (m[cv] > 0) {
        const cplx base = coef * double(m[cv]);
        mono = m;
        --mono[cv];
        if (h.c(mi) != 0.0) out.add_term(mono, base * h.c(mi));
        for (int i = 0; i < k; ++i) {
          if (u(mi, i) == 0.0) continue;
          Polynomial::Monomial shifted = mono;
          ++shifted[i];
          out.add_term(shifted, base * u(mi, i));
        }
      }
      const int cbv = half + k + mi;
      if (m[cbv] > 0) {
        const cplx base = coef * double(m[cbv]);
        mono = m;
        --mono[cbv];
        if (h.c(mi) != 0.0) out.add_term(mono, base * std::conj(h.c(mi)));
        for (int i = 0; i < k; ++i) {
          if (u(mi, i) == 0.0) continue;
          Polynomial::Monomial shifted = mono;
          ++shifted[half + i];
          out.add_term(shifted, base * std::conj(u(mi, i)));
        }
      }
    }
  }
  return out;
}

Polynomial apply_L(const Polynomial& f) {
  const GroupConfig& cfg = *f.config();
  Polynomial out(f.config());
  for (int b = 0; b < cfg.dim(); ++b) {
    const AlgebraElement h = cfg.basis(b);
    AlgebraElement ih = h;
    ih.w *= cplx(0.0, 1.0);
    ih.c *= cplx(0.0, 1.0);
    out += lid(lid(f, h), h);
    out += lid(lid(f, ih), ih);
  }
  return out;
}

cplx heat_expectation(const Polynomial& f, double T) {
  if (!(T > 0.0)) throw DomainError("heat_expectation: T must be positive");
  if (f.graded_degree() > f.config()->degree_cap()) {
    throw DomainError("heat_expectation: graded degree exceeds cap");
  }
  cplx total = 0.0;
  double weight = 1.0;
  Polynomial current = f;
  for (int m = 0; !current.is_zero(); ++m) {
    total += weight * current.constant_term();
    weight *= (T / 4.0) / double(m + 1);
    current = apply_L(current);
  }
  return total;
}

Polynomial substitute(const Polynomial& f,
                      const std::vector<Polynomial>& images) {
  if (static_cast<int>(images.size()) != f.num_vars()) {
    throw ConfigError("substitute: need one image per variable");
  }
  // powers[v][e] = images[v]^e, built lazily.
  std::vector<std::vector<Polynomial>> powers(images.size());
  auto power = [&](std::size_t v, int e) -> const Polynomial& {
    auto& list = powers[v];
    if (list.empty()) list.push_back(Polynomial::constant(f.config(), 1.0));
    while (static_cast<int>(list.size()) <= e) {
      list.push_back(list.back() * images[v]);
    }
    return list[e];
  };
  Polynomial out(f.config());
  for (const auto& [m, coef] : f.terms()) {
    Polynomial term = Polynomial::constant(f.config(), coef);
    for (std::size_t v = 0; v < m.size(); ++v) {
      if (m[v] > 0) term = term * power(v, m[v]);
    }
    out += term;
  }
  return out;
}

Polynomial substitute_w(const Polynomial& f, const CMatrix& m) {
  const GroupConfig& cfg = *f.config();
  const int k = cfg.k();
  const int d = cfg.d();
  if (m.rows() != k || m.cols() != k) {
    throw ConfigError("substitute_w: matrix must be k x k");
  }
  using Var = Polynomial::Var;
  std::vector<Polynomial> images;
  images.reserve(2 * (k + d));
  auto linear = [&](bool conjugate) {
    for (int i = 0; i < k; ++i) {
      Polynomial img(f.config());
      for (int l = 0; l < k; ++l) {
        const cplx a = conjugate ? std::conj(m(i, l)) : m(i, l);
        if (a == 0.0) continue;
        img += Polynomial::variable(f.config(), conjugate ? Var::WBar : Var::W,
                                    l) * a;
      }
      images.push_back(std::move(img));
    }
    for (int j = 0; j < d; ++j) {
      images.push_back(
          Polynomial::variable(f.config(), conjugate ? Var::CBar : Var::C, j));
    }
  };
  linear(false);
  linear(true);
  return substitute(f, images);
}

Polynomial left_translate(const Polynomial& f, const GroupElement& h) {
  const GroupConfig& cfg = *f.config();
  cfg.check(h);
  const int k = cfg.k();
  const int d = cfg.d();
  using Var = Polynomial::Var;
  const ConfigPtr& c = f.config();
  std::vector<Polynomial> images;
  images.reserve(2 * (k + d));
  // (h g)_w = w_h + w, (h g)_c = c_h + c + omega(w_h, w) / 2.
  for (int conjugate = 0; conjugate < 2; ++conjugate) {
    auto cj = [&](cplx z) { return conjugate ? std::conj(z) : z; };
    const Var wv = conjugate ? Var::WBar : Var::W;
    const Var cv = conjugate ? Var::CBar : Var::C;
    for (int i = 0; i < k; ++i) {
      images.push_back(Polynomial::variable(c, wv, i) +
                       Polynomial::constant(c, cj(h.w(i))));
    }
    for (int m = 0; m < d; ++m) {
      Polynomial img = Polynomial::variable(c, cv, m) +
                       Polynomial::constant(c, cj(h.c(m)));
      const CVector row = 0.5 * (h.w.transpose() * cfg.omega()[m]).transpose();
      for (int l = 0; l < k; ++l) {
        if (row(l) != 0.0) img += Polynomial::variable(c, wv, l) * cj(row(l));
      }
      images.push_back(std::move(img));
    }
  }
  return substitute(f, images);
}

namespace {

class Parser {
 public:
  Parser(const std::string& text, ConfigPtr cfg)
      : text_(text), cfg_(std::move(cfg)) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    std::ostringstream msg;
    msg << "polynomial literal: " << why << " at column " << pos_ + 1
        << " in \"" << text_ << "\"";
    throw ConfigError(msg.str());
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char ch) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    skip_ws();
    Polynomial acc(cfg_);
    bool negate = false;
    if (accept('-')) {
      negate = true;
    } else {
      accept('+');
    }
    acc = term();
    if (negate) acc = -acc;
    while (true) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        break;
      }
    }
    return acc;
  }

  Polynomial term() {
    Polynomial acc = factor();
    while (accept('*')) acc = acc * factor();
    return acc;
  }

  Polynomial factor() {
    Polynomial base = primary();
    if (accept('^')) {
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      if (start == pos_) fail("expected integer exponent");
      const int e = std::stoi(text_.substr(start, pos_ - start));
      Polynomial out = Polynomial::constant(cfg_, 1.0);
      for (int i = 0; i < e; ++i) out = out * base;
      return out;
    }
    return base;
  }

  Polynomial primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char ch = text_[pos_];
    if (ch == '(') {
      ++pos_;
      Polynomial inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double value = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      if (pos_ < text_.size() && text_[pos_] == 'i' &&
          !(pos_ + 1 < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])))) {
        ++pos_;
        return Polynomial::constant(cfg_, cplx(0.0, value));
      }
      return Polynomial::constant(cfg_, value);
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      const std::string name = text_.substr(start, pos_ - start);
      if (name == "i") return Polynomial::constant(cfg_, cplx(0.0, 1.0));
      const std::size_t digits = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      if (digits == pos_) fail("variable '" + name + "' needs an index");
      const int index = std::stoi(text_.substr(digits, pos_ - digits)) - 1;
      using Var = Polynomial::Var;
      Var kind;
      if (name == "w") {
        kind = Var::W;
      } else if (name == "c") {
        kind = Var::C;
      } else if (name == "wbar") {
        kind = Var::WBar;
      } else if (name == "cbar") {
        kind = Var::CBar;
      } else {
        fail("unknown variable '" + name + "'");
      }
      const int limit = (kind == Var::W || kind == Var::WBar) ? cfg_->k() : cfg_->d();
      if (index < 0 || index >= limit) fail("variable index out of range");
      return Polynomial::variable(cfg_, kind, index);
    }
    fail(std::string("unexpected '") + ch + "'");
  }

  const std::string& text_;
  ConfigPtr cfg_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, ConfigPtr cfg) {
  return Parser(text, std::move(cfg)).parse();
}

}  // namespace heatfock
