#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twistkit/polynomial.hpp"

namespace twistkit {

/// Ordered coordinate names of a chart. Index order is declaration order.
class Chart {
 public:
  Chart() = default;
  explicit Chart(std::vector<std::string> names);

  /// Chart with coordinates x1..xn.
  static Chart standard(std::size_t dim);

  std::size_t dim() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t index) const { return names_.at(index); }
  /// Index of a coordinate, or dim() when the name is not declared.
  std::size_t find(std::string_view name) const;

  friend bool operator==(const Chart&, const Chart&) = default;

 private:
  std::vector<std::string> names_;
};

/// Exact rational function of the chart coordinates, kept in canonical form:
/// numerator and denominator coprime, denominator monic under grlex, and zero
/// represented as 0/1. Two ScalarExprs are equal iff their canonical forms are.
class ScalarExpr {
 public:
  explicit ScalarExpr(std::size_t nvars = 0);
  ScalarExpr(std::size_t nvars, const Rational& c);
  explicit ScalarExpr(Polynomial p);
  /// Throws Error(ZeroDenominator) when den is the zero polynomial.
  ScalarExpr(Polynomial num, Polynomial den);

  static ScalarExpr variable(std::size_t nvars, std::size_t index);

  std::size_t nvars() const { return num_.nvars(); }
  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

  ScalarExpr operator-() const;
  ScalarExpr& operator+=(const ScalarExpr& other);
  ScalarExpr& operator-=(const ScalarExpr& other);
  ScalarExpr& operator*=(const ScalarExpr& other);
  ScalarExpr& operator/=(const ScalarExpr& other);
  friend ScalarExpr operator+(ScalarExpr a, const ScalarExpr& b) { return a += b; }
  friend ScalarExpr operator-(ScalarExpr a, const ScalarExpr& b) { return a -= b; }
  friend ScalarExpr operator*(ScalarExpr a, const ScalarExpr& b) { return a *= b; }
  friend ScalarExpr operator/(ScalarExpr a, const ScalarExpr& b) { return a /= b; }
  friend bool operator==(const ScalarExpr& a, const ScalarExpr& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  ScalarExpr pow(std::uint32_t e) const;

  /// Renders in the input grammar, e.g. "x1*x2 - 3/2*x3^2" or "-1/(x1 + 1)".
  std::string to_string(const Chart& chart) const;

 private:
  friend ScalarExpr differentiate(const ScalarExpr& e, std::size_t coordinate);

  void canonicalize();
  // num_ and den_ already coprime; only the leading coefficient is fixed up
  void normalize();

  Polynomial num_;
  Polynomial den_;
};

ScalarExpr parse_scalar(std::string_view text, const Chart& chart);
ScalarExpr differentiate(const ScalarExpr& e, std::size_t coordinate);
/// Throws Error(PoleError) if the denominator vanishes at point.
Rational evaluate(const ScalarExpr& e, std::span<const Rational> point);
inline bool is_zero(const ScalarExpr& e) { return e.is_zero(); }

/// ScalarExpr lowered to double-precision coefficients for repeated
/// numeric evaluation.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const ScalarExpr& e);

  /// Throws Error(PoleError) when |denominator| falls below kPoleTolerance.
  double operator()(std::span<const double> point) const;
  bool is_zero() const { return num_.empty(); }

  static constexpr double kPoleTolerance = 1e-14;

 private:
  struct Term {
    double coeff;
    std::vector<std::uint32_t> exponents;
  };
  static double eval(const std::vector<Term>& terms, std::span<const double> point);

  std::vector<Term> num_;
  std::vector<Term> den_;
};

}  // namespace twistkit
