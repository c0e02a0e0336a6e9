#include <doctest.h>

#include "support.hpp"

using namespace twistkit;
using namespace twistkit::testing;

namespace {

KVector bivector(std::size_t dim, const std::vector<std::pair<IndexTuple, std::string>>& entries) {
  std::vector<std::pair<IndexTuple, ScalarExpr>> raw;
  for (const auto& [idx, text] : entries) raw.emplace_back(idx, expr(text, dim));
  return make_antisymmetric<Variance::Contravariant>(2, dim, raw);
}

KForm form(std::size_t degree, std::size_t dim, const std::vector<std::pair<IndexTuple, std::string>>& entries) {
  std::vector<std::pair<IndexTuple, ScalarExpr>> raw;
  for (const auto& [idx, text] : entries) raw.emplace_back(idx, expr(text, dim));
  return make_antisymmetric<Variance::Covariant>(degree, dim, raw);
}

// Dense copies built from a field's stored representatives only.
template <Variance V>
Dense densify(const AntisymmetricField<V>& f) {
  Dense d(f.degree(), f.dim());
  for (const auto& [idx, v] : f.components()) d.add_antisymmetric(idx, v);
  return d;
}

}  // namespace

TEST_CASE("make_antisymmetric: transposition sign") {
  const KVector pi = bivector(3, {{{1, 0}, "x3"}});
  REQUIRE(pi.components().size() == 1);
  CHECK(pi.components().begin()->first == IndexTuple{0, 1});
  CHECK(pi.components().begin()->second == expr("-x3", 3));
}

TEST_CASE("make_antisymmetric: duplicate tuples accumulate") {
  const KVector pi = bivector(2, {{{0, 1}, "1"}, {{0, 1}, "1"}});
  CHECK(pi.at({0, 1}) == expr("2", 2));
  const KVector cancel = bivector(2, {{{0, 1}, "x1"}, {{1, 0}, "x1"}});
  CHECK(cancel.is_zero());
}

TEST_CASE("make_antisymmetric: errors") {
  CHECK_THROWS_WITH_AS(form(3, 3, {{{0, 0, 1}, "1"}}), doctest::Contains("RepeatedIndex"), Error);
  CHECK_THROWS_WITH_AS(form(2, 3, {{{0, 3}, "1"}}), doctest::Contains("IndexOutOfRange"), Error);
  CHECK_THROWS_WITH_AS(form(2, 3, {{{0, 1, 2}, "1"}}), doctest::Contains("DegreeMismatch"), Error);
  KForm a(2, 3), b(2, 4), c(3, 3);
  CHECK_THROWS_AS(a += b, Error);
  CHECK_THROWS_AS(a += c, Error);
}

TEST_CASE("sort_with_sign") {
  IndexTuple t{2, 0, 1};
  CHECK(sort_with_sign(t) == 1);
  CHECK(t == IndexTuple{0, 1, 2});
  IndexTuple u{1, 0, 2};
  CHECK(sort_with_sign(u) == -1);
  IndexTuple r{1, 2, 1};
  CHECK(sort_with_sign(r) == 0);
}

TEST_CASE("exterior_derivative: examples") {
  const KForm omega = form(2, 3, {{{1, 2}, "x1"}});
  CHECK(exterior_derivative(omega) == form(3, 3, {{{0, 1, 2}, "1"}}));
  CHECK(exterior_derivative(form(3, 4, {{{0, 1, 3}, "7/2"}, {{1, 2, 3}, "-1"}})).is_zero());
  const KForm w = form(2, 4, {{{0, 2}, "x1*x2"}});
  const KForm dw = exterior_derivative(w);
  CHECK_FALSE(dw.is_zero());
  CHECK(exterior_derivative(dw).is_zero());
  // gradient of a function, and the top-degree case
  const KForm f = form(0, 2, {{{}, "x1^2*x2"}});
  CHECK(exterior_derivative(f) == form(1, 2, {{{0}, "2*x1*x2"}, {{1}, "x1^2"}}));
  CHECK(exterior_derivative(form(2, 2, {{{0, 1}, "x1"}})) == KForm(3, 2));
}

TEST_CASE("exterior_derivative agrees with the dense alternating-sum oracle") {
  Gen gen(2001);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.uniform_int(2, 4));
    const std::size_t k = static_cast<std::size_t>(gen.uniform_int(0, long(n) - 1));
    const auto raw = gen.raw_components(k, n, 3, 9, 3);
    const KForm w = make_antisymmetric<Variance::Covariant>(k, n, raw);
    CHECK(matches(oracle_exterior_derivative(dense_from_raw(k, n, raw)), exterior_derivative(w)));
  }
}

TEST_CASE("schouten_half: examples") {
  CHECK(schouten_half(bivector(4, {{{0, 1}, "3"}, {{2, 3}, "-1/2"}, {{0, 3}, "1"}})).is_zero());
  const KVector su2 = bivector(3, {{{0, 1}, "x3"}, {{1, 2}, "x1"}, {{2, 0}, "x2"}});
  CHECK(schouten_half(su2).is_zero());
  CHECK(matches(oracle_jacobiator(densify(su2)), schouten_half(su2)));
  const KVector r3 = bivector(3, {{{0, 1}, "1"}, {{1, 2}, "x2"}});
  const KVector j = schouten_half(r3);
  CHECK(j.at({0, 1, 2}) == expr("1", 3));
  CHECK(j.components().size() == 1);
  CHECK_THROWS_AS(schouten_half(KVector(3, 3)), Error);
}

TEST_CASE("schouten_half agrees with the dense summation oracle") {
  Gen gen(2002);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.uniform_int(3, 4));
    const auto raw = gen.raw_components(2, n, 2, 5, 4);
    const KVector pi = make_antisymmetric<Variance::Contravariant>(2, n, raw);
    CHECK(matches(oracle_jacobiator(dense_from_raw(2, n, raw)), schouten_half(pi)));
  }
}

TEST_CASE("triple_contraction: examples") {
  const KVector pi4 = bivector(4, {{{0, 1}, "1"}, {{2, 3}, "1"}});
  CHECK(triple_contraction(KForm(3, 4), pi4).is_zero());

  // any Pi on a 3-dimensional chart: C^{123} is a multiple of det(Pi) = 0
  const KVector pi3 = bivector(3, {{{0, 1}, "x3 + 1"}, {{1, 2}, "x1*x2"}, {{0, 2}, "5"}});
  CHECK(triple_contraction(form(3, 3, {{{0, 1, 2}, "1"}}), pi3).is_zero());

  // slot contraction H_{lmn} Pi^{li} Pi^{mj} Pi^{nk}: the only term of C^{134} is
  // H_{243} Pi^{21} Pi^{43} Pi^{34} = (-1)(-1)(-1)(1)
  const KForm h = form(3, 4, {{{1, 2, 3}, "1"}});
  const KVector c = triple_contraction(h, pi4);
  CHECK(c.at({0, 2, 3}) == expr("-1", 4));
  CHECK(c.components().size() == 1);
  CHECK(matches(oracle_contraction(densify(h), densify(pi4)), c));

  CHECK_THROWS_AS(triple_contraction(KForm(3, 3), pi4), Error);
  CHECK_THROWS_AS(triple_contraction(KForm(2, 4), pi4), Error);
}

TEST_CASE("triple_contraction agrees with the dense summation oracle") {
  Gen gen(2003);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.uniform_int(3, 5));
    const auto raw_pi = gen.raw_components(2, n, 1, 5, 4);
    const auto raw_h = gen.raw_components(3, n, 1, 5, 3);
    const KVector pi = make_antisymmetric<Variance::Contravariant>(2, n, raw_pi);
    const KForm h = make_antisymmetric<Variance::Covariant>(3, n, raw_h);
    CHECK(matches(oracle_contraction(dense_from_raw(3, n, raw_h), dense_from_raw(2, n, raw_pi)),
                  triple_contraction(h, pi)));
  }
}

TEST_CASE("invert_two_form: examples") {
  CHECK(invert_two_form(form(2, 2, {{{0, 1}, "1"}})) == bivector(2, {{{0, 1}, "-1"}}));
  const KVector pi = invert_two_form(form(2, 4, {{{0, 1}, "1"}, {{2, 3}, "1 + x1"}}));
  CHECK(pi == bivector(4, {{{0, 1}, "-1"}, {{2, 3}, "-1/(1 + x1)"}}));
  CHECK_THROWS_WITH_AS(invert_two_form(KForm(2, 4)), doctest::Contains("DegenerateForm"), Error);
  CHECK_THROWS_WITH_AS(invert_two_form(form(2, 3, {{{0, 1}, "1"}})), doctest::Contains("OddDimension"), Error);
  CHECK_THROWS_WITH_AS(invert_two_form(form(2, 4, {{{0, 1}, "1"}, {{0, 2}, "x1"}})),
                       doctest::Contains("DegenerateForm"), Error);
}

TEST_CASE("invert_two_form is a matrix inverse") {
  Gen gen(2004);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 2 * static_cast<std::size_t>(gen.uniform_int(1, 2));
    const auto raw = gen.raw_components(2, n, 1, 4, 4);
    const KForm w = make_antisymmetric<Variance::Covariant>(2, n, raw);
    KVector pi(2, n);
    try {
      pi = invert_two_form(w);
    } catch (const Error&) {
      continue;
    }
    const Dense wd = dense_from_raw(2, n, raw), pd = densify(pi);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        ScalarExpr sum(n);
        for (std::size_t j = 0; j < n; ++j) sum += wd(i, j) * pd(j, k);
        CHECK(sum == ScalarExpr(n, i == k ? 1 : 0));
      }
  }
}

// ---------------------------------------------------------------------------
// Properties over seeded random inputs.

TEST_CASE("property: d of d vanishes") {
  Gen gen(2101);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.uniform_int(2, 5));
    const std::size_t k = static_cast<std::size_t>(gen.uniform_int(0, 3));
    const KForm w = make_antisymmetric<Variance::Covariant>(k, n, gen.raw_components(k, n, 3, 9, 4));
    CHECK(exterior_derivative(exterior_derivative(w)).is_zero());
  }
}

TEST_CASE("property: index-sign coherence") {
  Gen gen(2102);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.uniform_int(2, 5));
    const KVector pi = make_antisymmetric<Variance::Contravariant>(2, n, gen.raw_components(2, n, 2, 9, 4));
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(pi.at({i, i}).is_zero());
      for (std::size_t j = 0; j < n; ++j) CHECK(pi.at({j, i}) == -pi.at({i, j}));
    }
  }
}

TEST_CASE("property: schouten_half is cyclic and alternating") {
  Gen gen(2103);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.uniform_int(3, 4));
    const KVector j = schouten_half(make_antisymmetric<Variance::Contravariant>(2, n, gen.raw_components(2, n, 2, 5, 4)));
    for (const IndexTuple& t : increasing_tuples(3, n)) {
      const std::size_t a = t[0], b = t[1], c = t[2];
      CHECK(j.at({b, c, a}) == j.at({a, b, c}));
      CHECK(j.at({c, a, b}) == j.at({a, b, c}));
      CHECK(j.at({b, a, c}) == -j.at({a, b, c}));
      CHECK(j.at({a, c, b}) == -j.at({a, b, c}));
    }
  }
}

TEST_CASE("property: contraction degenerates in dimension three") {
  Gen gen(2104);
  for (int trial = 0; trial < 25; ++trial) {
    const KVector pi = make_antisymmetric<Variance::Contravariant>(2, 3, gen.raw_components(2, 3, 3, 9, 3));
    const KForm h = make_antisymmetric<Variance::Covariant>(3, 3, gen.raw_components(3, 3, 3, 9, 1));
    CHECK(triple_contraction(h, pi).is_zero());
  }
}

TEST_CASE("property: contraction is additive in H") {
  Gen gen(2105);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.uniform_int(3, 5));
    const KVector pi = make_antisymmetric<Variance::Contravariant>(2, n, gen.raw_components(2, n, 1, 5, 4));
    const KForm h1 = make_antisymmetric<Variance::Covariant>(3, n, gen.raw_components(3, n, 2, 5, 3));
    const KForm h2 = make_antisymmetric<Variance::Covariant>(3, n, gen.raw_components(3, n, 2, 5, 3));
    CHECK(triple_contraction(h1 + h2, pi) == triple_contraction(h1, pi) + triple_contraction(h2, pi));
  }
}
