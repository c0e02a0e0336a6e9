#include "twistkit/scalar_expr.hpp"

#include <cctype>
#include <cmath>
#include <unordered_set>

#include "twistkit/error.hpp"

namespace twistkit {

Chart::Chart(std::vector<std::string> names) : names_(std::move(names)) {
  std::unordered_set<std::string> seen;
  for (const auto& n : names_)
    if (!seen.insert(n).second) throw Error(ErrorKind::SchemaError, "duplicate coordinate '" + n + "'");
}

Chart Chart::standard(std::size_t dim) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= dim; ++i) names.push_back("x" + std::to_string(i));
  return Chart(std::move(names));
}

std::size_t Chart::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return names_.size();
}

ScalarExpr::ScalarExpr(std::size_t nvars) : num_(nvars), den_(Polynomial::constant(nvars, 1)) {}

ScalarExpr::ScalarExpr(std::size_t nvars, const Rational& c)
    : num_(Polynomial::constant(nvars, c)), den_(Polynomial::constant(nvars, 1)) {}

ScalarExpr::ScalarExpr(Polynomial p) : num_(std::move(p)), den_(Polynomial::constant(num_.nvars(), 1)) {}

ScalarExpr::ScalarExpr(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error(ErrorKind::ZeroDenominator, "denominator is the zero polynomial");
  canonicalize();
}

ScalarExpr ScalarExpr::variable(std::size_t nvars, std::size_t index) {
  return ScalarExpr(Polynomial::variable(nvars, index));
}

void ScalarExpr::canonicalize() {
  if (num_.is_zero()) {
    den_ = Polynomial::constant(num_.nvars(), 1);
    return;
  }
  if (!den_.is_constant()) {
    Polynomial g = gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = exact_divide(num_, g);
      den_ = exact_divide(den_, g);
    }
  }
  normalize();
}

void ScalarExpr::normalize() {
  if (num_.is_zero()) {
    den_ = Polynomial::constant(num_.nvars(), 1);
    return;
  }
  const Rational scale = 1 / den_.leading_coefficient();
  if (scale != 1) {
    num_ *= scale;
    den_ *= scale;
  }
}

ScalarExpr ScalarExpr::operator-() const {
  ScalarExpr out = *this;
  out.num_ = -out.num_;
  return out;
}

// Both operands are reduced, so only the common part g of the denominators
// can cancel against the new numerator.
ScalarExpr& ScalarExpr::operator+=(const ScalarExpr& other) {
  if (other.is_zero()) return *this;
  if (is_zero()) return *this = other;
  if (den_ == other.den_) {
    num_ += other.num_;
    if (!is_polynomial()) canonicalize();
    else if (num_.is_zero()) den_ = Polynomial::constant(nvars(), 1);
    return *this;
  }
  const Polynomial g = gcd(den_, other.den_);
  const Polynomial b = exact_divide(den_, g), d = exact_divide(other.den_, g);
  num_ = num_ * d + other.num_ * b;
  if (num_.is_zero()) {
    den_ = Polynomial::constant(nvars(), 1);
    return *this;
  }
  Polynomial rest = g;
  if (!g.is_constant()) {
    const Polynomial h = gcd(num_, g);
    if (!h.is_constant()) {
      num_ = exact_divide(num_, h);
      rest = exact_divide(g, h);
    }
  }
  den_ = b * d * rest;
  normalize();
  return *this;
}

ScalarExpr& ScalarExpr::operator-=(const ScalarExpr& other) { return *this += -other; }

ScalarExpr& ScalarExpr::operator*=(const ScalarExpr& other) {
  if (is_polynomial() && other.is_polynomial()) {
    num_ = num_ * other.num_;
    if (num_.is_zero()) den_ = Polynomial::constant(nvars(), 1);
    return *this;
  }
  if (is_zero() || other.is_zero()) return *this = ScalarExpr(nvars());
  // cross cancellation keeps the result reduced
  Polynomial a = num_, b = den_, c = other.num_, d = other.den_;
  if (!d.is_constant()) {
    const Polynomial g = gcd(a, d);
    if (!g.is_constant()) a = exact_divide(a, g), d = exact_divide(d, g);
  }
  if (!b.is_constant()) {
    const Polynomial g = gcd(c, b);
    if (!g.is_constant()) c = exact_divide(c, g), b = exact_divide(b, g);
  }
  num_ = a * c;
  den_ = b * d;
  normalize();
  return *this;
}

ScalarExpr& ScalarExpr::operator/=(const ScalarExpr& other) {
  if (other.is_zero()) throw Error(ErrorKind::ZeroDenominator, "division by an expression that is identically zero");
  num_ = num_ * other.den_;
  den_ = den_ * other.num_;
  canonicalize();
  return *this;
}

ScalarExpr ScalarExpr::pow(std::uint32_t e) const {
  ScalarExpr out = *this;
  out.num_ = num_.pow(e);
  out.den_ = den_.pow(e);
  return out;
}

std::string ScalarExpr::to_string(const Chart& chart) const {
  const auto& names = chart.names();
  if (is_polynomial()) return num_.to_string(names);
  std::string n = num_.to_string(names);
  if (num_.terms().size() > 1) n = "(" + n + ")";
  return n + "/(" + den_.to_string(names) + ")";
}

// Write d = c*d1 with c the content in the coordinate. Every factor of d1
// moves with the coordinate, so for g = gcd(d1, d1') the quotient
// (n' d1/g - n d1'/g) / (d1 d1/g) is reduced; only c can still cancel.
ScalarExpr differentiate(const ScalarExpr& e, std::size_t coordinate) {
  const Polynomial& n = e.numerator();
  const Polynomial& d = e.denominator();
  if (e.is_polynomial()) return ScalarExpr(n.derivative(coordinate), d);
  ScalarExpr out(e.nvars());
  const Polynomial c = content_in(d, coordinate);
  const Polynomial d1 = exact_divide(d, c);
  const Polynomial dd1 = d1.derivative(coordinate);
  if (dd1.is_zero()) {
    out.num_ = n.derivative(coordinate);
    out.den_ = d;
  } else {
    const Polynomial g = gcd(d1, dd1);
    const Polynomial rad = exact_divide(d1, g);
    out.num_ = n.derivative(coordinate) * rad - n * exact_divide(dd1, g);
    out.den_ = d1 * rad * c;
  }
  if (!out.num_.is_zero() && !c.is_constant()) {
    const Polynomial h = gcd(out.num_, c);
    if (!h.is_constant()) {
      out.num_ = exact_divide(out.num_, h);
      out.den_ = exact_divide(out.den_, h);
    }
  }
  out.normalize();
  return out;
}

Rational evaluate(const ScalarExpr& e, std::span<const Rational> point) {
  Rational den = e.denominator().evaluate(point);
  if (sgn(den) == 0) throw Error(ErrorKind::PoleError, "denominator vanishes at the evaluation point");
  return e.numerator().evaluate(point) / den;
}

// ---------------------------------------------------------------------------
// Parser
//
//   expr   := sterm (('+'|'-') sterm)*
//   sterm  := '-'* term
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' integer)?
//   base   := integer | identifier | '(' expr ')'

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Chart& chart) : text_(text), chart_(chart) {}

  ScalarExpr parse() {
    ScalarExpr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::SyntaxError, msg + " at offset " + std::to_string(pos_) + " in \"" + std::string(text_) + "\"");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ScalarExpr expr() {
    ScalarExpr e = signed_term();
    while (true) {
      if (accept('+')) e += signed_term();
      else if (accept('-')) e -= signed_term();
      else return e;
    }
  }

  ScalarExpr signed_term() {
    bool negate = false;
    while (accept('-')) negate = !negate;
    ScalarExpr t = term();
    return negate ? -t : t;
  }

  ScalarExpr term() {
    ScalarExpr t = factor();
    while (true) {
      if (accept('*')) {
        t *= factor();
      } else if (accept('/')) {
        ScalarExpr d = factor();
        if (d.is_zero()) fail_zero();
        t /= d;
      } else {
        return t;
      }
    }
  }

  [[noreturn]] void fail_zero() const {
    throw Error(ErrorKind::ZeroDenominator,
                "divisor normalizes to zero at offset " + std::to_string(pos_) + " in \"" + std::string(text_) + "\"");
  }

  ScalarExpr factor() {
    ScalarExpr b = base();
    if (accept('^')) {
      skip_space();
      std::string digits = integer_digits();
      if (digits.empty()) fail("expected a non-negative integer exponent");
      if (digits.size() > 4) fail("exponent too large");
      b = b.pow(static_cast<std::uint32_t>(std::stoul(digits)));
    }
    return b;
  }

  std::string integer_digits() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  ScalarExpr base() {
    skip_space();
    const std::size_t n = chart_.dim();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ScalarExpr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return ScalarExpr(n, Rational(mpz_class(integer_digits())));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string_view name = text_.substr(start, pos_ - start);
      std::size_t index = chart_.find(name);
      if (index == n) throw Error(ErrorKind::UnknownIdentifier, "'" + std::string(name) + "' is not a chart coordinate");
      return ScalarExpr::variable(n, index);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const Chart& chart_;
  std::size_t pos_ = 0;
};

}  // namespace

ScalarExpr parse_scalar(std::string_view text, const Chart& chart) { return Parser(text, chart).parse(); }

// ---------------------------------------------------------------------------

CompiledExpr::CompiledExpr(const ScalarExpr& e) {
  auto lower = [](const Polynomial& p) {
    std::vector<Term> terms;
    for (const auto& [m, c] : p.terms()) terms.push_back({c.get_d(), m});
    return terms;
  };
  num_ = lower(e.numerator());
  den_ = lower(e.denominator());
}

double CompiledExpr::eval(const std::vector<Term>& terms, std::span<const double> point) {
  double sum = 0.0;
  for (const auto& t : terms) {
    double v = t.coeff;
    for (std::size_t i = 0; i < t.exponents.size(); ++i)
      for (std::uint32_t k = 0; k < t.exponents[i]; ++k) v *= point[i];
    sum += v;
  }
  return sum;
}

double CompiledExpr::operator()(std::span<const double> point) const {
  if (num_.empty()) return 0.0;
  const double den = eval(den_, point);
  if (std::abs(den) < kPoleTolerance) throw Error(ErrorKind::PoleError, "denominator vanishes at a lattice point");
  return eval(num_, point) / den;
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::PoleError: return "PoleError";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::RepeatedIndex: return "RepeatedIndex";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DegenerateForm: return "DegenerateForm";
    case ErrorKind::OddDimension: return "OddDimension";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::BadSiteCount: return "BadSiteCount";
    case ErrorKind::NoPotential: return "NoPotential";
    case ErrorKind::SingularPi: return "SingularPi";
    case ErrorKind::OffShell: return "OffShell";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::ExpressionError: return "ExpressionError";
  }
  return "Error";
}

}  // namespace twistkit
