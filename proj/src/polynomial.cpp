#include "twistkit/polynomial.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

namespace twistkit {

namespace {

std::uint32_t degree_of(const Monomial& m) {
  return std::accumulate(m.begin(), m.end(), std::uint32_t{0});
}

bool divides(const Monomial& d, const Monomial& m) {
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] > m[i]) return false;
  return true;
}

Monomial quotient(const Monomial& m, const Monomial& d) {
  Monomial q(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) q[i] = m[i] - d[i];
  return q;
}

Monomial product(const Monomial& a, const Monomial& b) {
  Monomial p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] + b[i];
  return p;
}

Polynomial times_monomial(const Polynomial& p, const Monomial& m, const Rational& c) {
  Polynomial out(p.nvars());
  for (const auto& [mono, coeff] : p.terms()) out.add_term(product(mono, m), coeff * c);
  return out;
}

}  // namespace

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
  const auto da = degree_of(a);
  const auto db = degree_of(b);
  if (da != db) return da < db;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Monomial(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t index) {
  Monomial m(nvars, 0);
  m.at(index) = 1;
  return monomial(m, 1);
}

Polynomial Polynomial::monomial(const Monomial& exponents, const Rational& c) {
  Polynomial p(exponents.size());
  p.add_term(exponents, c);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && degree_of(terms_.begin()->first) == 0);
}

Rational Polynomial::constant_value() const {
  const Monomial one(nvars_, 0);
  auto it = terms_.find(one);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::uint32_t Polynomial::total_degree() const {
  return terms_.empty() ? 0 : degree_of(terms_.rbegin()->first);
}

std::uint32_t Polynomial::degree_in(std::size_t var) const {
  std::uint32_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m[var]);
  return d;
}

Polynomial Polynomial::coefficient_in(std::size_t var, std::uint32_t d) const {
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[var] != d) continue;
    Monomial reduced = m;
    reduced[var] = 0;
    out.terms_.emplace(std::move(reduced), c);
  }
  return out;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  assert(m.size() == nvars_);
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (inserted) return;
  it->second += c;
  if (sgn(it->second) == 0) terms_.erase(it);
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  assert(nvars_ == other.nvars_);
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  assert(nvars_ == other.nvars_);
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coeff] : terms_) coeff *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  assert(a.nvars_ == b.nvars_);
  Polynomial out(a.nvars_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) out.add_term(product(ma, mb), ca * cb);
  return out;
}

Polynomial Polynomial::pow(std::uint32_t e) const {
  Polynomial result = constant(nvars_, 1);
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[var] == 0) continue;
    Monomial dm = m;
    --dm[var];
    out.add_term(dm, c * m[var]);
  }
  return out;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  assert(point.size() == nvars_);
  Rational sum = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < nvars_; ++i)
      for (std::uint32_t k = 0; k < m[i]; ++k) t *= point[i];
    sum += t;
  }
  return sum;
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  Rational inv = 1 / leading_coefficient();
  Polynomial out = *this;
  out *= inv;
  return out;
}

std::string Polynomial::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    Rational mag = abs(c);
    if (first) {
      if (sgn(c) < 0) out += "-";
    } else {
      out += sgn(c) < 0 ? " - " : " + ";
    }
    first = false;

    std::string vars;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (!vars.empty()) vars += "*";
      vars += names[i];
      if (m[i] > 1) vars += "^" + std::to_string(m[i]);
    }
    if (vars.empty()) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += vars;
    } else {
      out += mag.get_str() + "*" + vars;
    }
  }
  return out;
}

Polynomial exact_divide(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  Polynomial q(a.nvars());
  Polynomial rem = a;
  const Monomial& lm = b.leading_monomial();
  const Rational& lc = b.leading_coefficient();
  while (!rem.is_zero()) {
    const Monomial& rm = rem.leading_monomial();
    if (!divides(lm, rm)) throw std::domain_error("polynomial division is not exact");
    Monomial qm = quotient(rm, lm);
    Rational qc = rem.leading_coefficient() / lc;
    q.add_term(qm, qc);
    rem -= times_monomial(b, qm, qc);
  }
  return q;
}

Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, std::size_t var) {
  const std::uint32_t db = b.degree_in(var);
  const Polynomial lcb = b.coefficient_in(var, db);
  Polynomial r = a;
  const std::uint32_t da = a.degree_in(var);
  int pending = da >= db ? static_cast<int>(da - db) + 1 : 0;
  while (!r.is_zero() && r.degree_in(var) >= db) {
    const std::uint32_t dr = r.degree_in(var);
    Monomial shift(a.nvars(), 0);
    shift[var] = dr - db;
    Polynomial lcr = r.coefficient_in(var, dr);
    r = lcb * r - times_monomial(lcr * b, shift, 1);
    --pending;
  }
  // scale to lc(b)^(deg a - deg b + 1) a mod b
  if (pending > 0 && !r.is_zero()) r = lcb.pow(static_cast<std::uint32_t>(pending)) * r;
  return r;
}

Polynomial content_in(const Polynomial& p, std::size_t var) {
  Polynomial c(p.nvars());
  const std::uint32_t d = p.degree_in(var);
  for (std::uint32_t k = 0; k <= d; ++k) {
    Polynomial coeff = p.coefficient_in(var, k);
    if (coeff.is_zero()) continue;
    c = gcd(c, coeff);
    if (c.is_constant() && !c.is_zero()) break;
  }
  return c;
}

namespace {

Polynomial primitive_part(const Polynomial& p, std::size_t var) {
  if (p.is_zero()) return p;
  return exact_divide(p, content_in(p, var)).monic();
}

using Univariate = std::vector<Rational>;  // coefficient of x^k at index k

void trim(Univariate& u) {
  while (!u.empty() && u.back() == 0) u.pop_back();
}

// Image of p in Q[x_var] after substituting point[u] for every other variable.
Univariate image(const Polynomial& p, std::size_t var, const std::vector<Rational>& point) {
  Univariate out(p.degree_in(var) + 1, Rational(0));
  for (const auto& [m, c] : p.terms()) {
    Rational v = c;
    for (std::size_t u = 0; u < m.size(); ++u) {
      if (u == var) continue;
      for (std::uint32_t e = 0; e < m[u]; ++e) v *= point[u];
    }
    out[m[var]] += v;
  }
  return out;
}

std::size_t univariate_gcd_degree(Univariate a, Univariate b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    while (a.size() >= b.size()) {
      const Rational f = a.back() / b.back();
      const std::size_t shift = a.size() - b.size();
      for (std::size_t k = 0; k < b.size(); ++k) a[k + shift] -= f * b[k];
      a.pop_back();
      trim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return a.empty() ? 0 : a.size() - 1;
}

// Sound test for gcd(a, b) being free of var: if a specialization of the other
// variables keeps the leading coefficients in var nonzero and the images are
// coprime, every common factor has degree 0 in var.
bool certainly_free_of(const Polynomial& a, const Polynomial& b, std::size_t var) {
  const std::size_t n = a.nvars();
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::vector<Rational> point(n);
    for (std::size_t u = 0; u < n; ++u) point[u] = Rational(static_cast<long>((u * 7 + attempt * 13 + 3) % 31) + 2);
    Univariate ia = image(a, var, point), ib = image(b, var, point);
    if (ia.back() == 0 || ib.back() == 0) continue;
    return univariate_gcd_degree(std::move(ia), std::move(ib)) == 0;
  }
  return false;
}

Monomial min_exponents(const Polynomial& p) {
  Monomial out = p.terms().begin()->first;
  for (const auto& [m, c] : p.terms())
    for (std::size_t u = 0; u < m.size(); ++u) out[u] = std::min(out[u], m[u]);
  return out;
}

}  // namespace

// Recursive gcd over Q[x1..xn]: contents with respect to one variable are
// split off, primitive parts go through the subresultant PRS.
Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Polynomial::constant(a.nvars(), 1);
  if (a.terms().size() == 1 || b.terms().size() == 1) {
    Monomial m = min_exponents(a), mb = min_exponents(b);
    for (std::size_t u = 0; u < m.size(); ++u) m[u] = std::min(m[u], mb[u]);
    return Polynomial::monomial(m, 1);
  }

  bool coprime = true;
  std::size_t var = a.nvars();
  for (std::size_t u = 0; u < a.nvars(); ++u) {
    if (!a.involves(u) || !b.involves(u)) continue;
    if (var == a.nvars()) var = u;
    if (!certainly_free_of(a, b, u)) {
      coprime = false;
      var = u;
      break;
    }
  }
  // a common factor only involves variables shared by a and b
  if (coprime) return Polynomial::constant(a.nvars(), 1);

  const Polynomial ca = content_in(a, var);
  const Polynomial cb = content_in(b, var);
  const Polynomial c = gcd(ca, cb);

  Polynomial f = exact_divide(a, ca);
  Polynomial g = exact_divide(b, cb);
  if (f.degree_in(var) < g.degree_in(var)) std::swap(f, g);

  // subresultant PRS
  Polynomial gs = Polynomial::constant(a.nvars(), 1);
  Polynomial hs = Polynomial::constant(a.nvars(), 1);
  while (g.degree_in(var) > 0) {
    const std::uint32_t delta = f.degree_in(var) - g.degree_in(var);
    Polynomial r = pseudo_remainder(f, g, var);
    if (r.is_zero()) break;
    f = std::move(g);
    g = exact_divide(r, gs * hs.pow(delta));
    gs = f.coefficient_in(var, f.degree_in(var));
    if (delta == 0) {
      // h unchanged
    } else if (delta == 1) {
      hs = gs;
    } else {
      hs = exact_divide(gs.pow(delta), hs.pow(delta - 1));
    }
  }
  // g is either a last nonzero remainder of degree 0 in var (coprime
  // primitive parts) or divides f
  if (g.degree_in(var) == 0) return c.monic();
  return (c * primitive_part(g, var)).monic();
}

}  // namespace twistkit
