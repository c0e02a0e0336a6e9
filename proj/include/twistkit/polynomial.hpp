#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace twistkit {

using Rational = mpq_class;

/// Exponent vector of a monomial, one entry per chart coordinate.
using Monomial = std::vector<std::uint32_t>;

/// Graded lexicographic order: total degree first, then lexicographic in
/// declared coordinate order (x1 > x2 > ...).
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Sparse multivariate polynomial with exact rational coefficients over a
/// fixed number of variables. Zero coefficients are never stored.
class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational, GrlexLess>;

  explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Rational& c);
  static Polynomial variable(std::size_t nvars, std::size_t index);
  static Polynomial monomial(const Monomial& exponents, const Rational& c);

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant term value; only meaningful when is_constant().
  Rational constant_value() const;

  std::uint32_t total_degree() const;
  std::uint32_t degree_in(std::size_t var) const;
  bool involves(std::size_t var) const { return degree_in(var) > 0; }

  /// Largest term under grlex. Precondition: nonzero.
  const Monomial& leading_monomial() const { return terms_.rbegin()->first; }
  const Rational& leading_coefficient() const { return terms_.rbegin()->second; }

  /// Coefficient of var^d, as a polynomial free of var.
  Polynomial coefficient_in(std::size_t var, std::uint32_t d) const;

  void add_term(const Monomial& m, const Rational& c);

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  Polynomial pow(std::uint32_t e) const;
  Polynomial derivative(std::size_t var) const;
  Rational evaluate(std::span<const Rational> point) const;

  /// Scaled so the grlex-leading coefficient is 1. Zero stays zero.
  Polynomial monic() const;

  /// Renders with the given variable names, highest term first.
  std::string to_string(std::span<const std::string> names) const;

 private:
  std::size_t nvars_;
  Terms terms_;
};

/// Exact quotient a / b. Throws std::domain_error if b does not divide a.
Polynomial exact_divide(const Polynomial& a, const Polynomial& b);

/// Pseudo-remainder of a by b viewed as univariate polynomials in var.
Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, std::size_t var);

/// Greatest common divisor in Q[x1..xn], normalized monic (gcd(0, 0) = 0).
Polynomial gcd(const Polynomial& a, const Polynomial& b);

/// gcd of the coefficients of p viewed as a polynomial in var.
Polynomial content_in(const Polynomial& p, std::size_t var);

}  // namespace twistkit
