#pragma once
// Seeded generators and reference oracles shared by the unit tests and the
// acceptance binary. The oracles work on dense, fully expanded index arrays
// and never touch the sparse storage or access rules of fields.hpp.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "twistkit/fields.hpp"
#include "twistkit/scalar_expr.hpp"

namespace twistkit::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long uniform_int(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin() { return uniform_int(0, 1) == 1; }

  /// Uniform p/q, p in [-height, height], q in [1, max_den], in lowest terms.
  Rational fraction(long height, long max_den) {
    Rational r(uniform_int(-height, height), uniform_int(1, max_den));
    r.canonicalize();
    return r;
  }

  /// Random polynomial with up to `terms` terms of total degree <= max_degree
  /// and integer coefficients in [-height, height].
  Polynomial polynomial(std::size_t nvars, std::uint32_t max_degree, long height, int terms) {
    Polynomial p(nvars);
    for (int t = 0; t < terms; ++t) {
      Monomial m(nvars, 0);
      const auto deg = static_cast<std::uint32_t>(uniform_int(0, max_degree));
      for (std::uint32_t d = 0; d < deg; ++d) ++m[static_cast<std::size_t>(uniform_int(0, long(nvars) - 1))];
      p.add_term(m, Rational(uniform_int(-height, height)));
    }
    return p;
  }

  ScalarExpr poly_expr(std::size_t nvars, std::uint32_t max_degree, long height = 9, int terms = 3) {
    return ScalarExpr(polynomial(nvars, max_degree, height, terms));
  }

  /// Quotient of two random polynomials; the denominator is kept nonzero.
  ScalarExpr rational_expr(std::size_t nvars, std::uint32_t max_degree, long height = 5) {
    Polynomial den = polynomial(nvars, max_degree, height, 2);
    den.add_term(Monomial(nvars, 0), Rational(uniform_int(1, height)));
    if (den.is_zero()) den = Polynomial::constant(nvars, 1);
    return ScalarExpr(polynomial(nvars, max_degree, height, 3), den);
  }

  /// Raw (possibly unsorted) component list for a random antisymmetric tensor.
  std::vector<std::pair<IndexTuple, ScalarExpr>> raw_components(std::size_t degree, std::size_t dim,
                                                                std::uint32_t max_degree, long height,
                                                                int entries) {
    std::vector<std::pair<IndexTuple, ScalarExpr>> raw;
    if (degree > dim) return raw;
    for (int e = 0; e < entries; ++e) {
      std::vector<std::size_t> pool(dim);
      for (std::size_t i = 0; i < dim; ++i) pool[i] = i;
      std::shuffle(pool.begin(), pool.end(), rng_);
      IndexTuple idx(pool.begin(), pool.begin() + static_cast<long>(degree));
      raw.emplace_back(idx, poly_expr(dim, max_degree, height));
    }
    return raw;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Parity by counting inversions; 0 when an index repeats.
inline int permutation_parity(const std::vector<std::size_t>& idx) {
  int inversions = 0;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      if (idx[a] == idx[b]) return 0;
      if (idx[a] > idx[b]) ++inversions;
    }
  return inversions % 2 == 0 ? 1 : -1;
}

/// Fully expanded antisymmetric array over all dim^degree index tuples.
class Dense {
 public:
  Dense(std::size_t degree, std::size_t dim) : degree_(degree), dim_(dim) {
    std::size_t size = 1;
    for (std::size_t k = 0; k < degree; ++k) size *= dim;
    data_.assign(size, ScalarExpr(dim));
  }

  /// Adds value at idx and its signed image at every permutation of idx.
  void add_antisymmetric(const IndexTuple& idx, const ScalarExpr& value) {
    IndexTuple perm = idx;
    std::sort(perm.begin(), perm.end());
    const int base = permutation_parity(idx);
    if (base == 0) return;
    do {
      const int s = permutation_parity(perm) * base;
      if (s > 0) at(perm) += value;
      else at(perm) -= value;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  ScalarExpr& at(const IndexTuple& idx) { return data_[offset(idx)]; }
  const ScalarExpr& at(const IndexTuple& idx) const { return data_[offset(idx)]; }
  ScalarExpr& operator()(std::size_t i, std::size_t j) { return at({i, j}); }
  const ScalarExpr& operator()(std::size_t i, std::size_t j) const { return at({i, j}); }
  ScalarExpr& operator()(std::size_t i, std::size_t j, std::size_t k) { return at({i, j, k}); }
  const ScalarExpr& operator()(std::size_t i, std::size_t j, std::size_t k) const { return at({i, j, k}); }

  std::size_t degree() const { return degree_; }
  std::size_t dim() const { return dim_; }

 private:
  std::size_t offset(const IndexTuple& idx) const {
    std::size_t o = 0;
    for (auto i : idx) o = o * dim_ + i;
    return o;
  }
  std::size_t degree_;
  std::size_t dim_;
  std::vector<ScalarExpr> data_;
};

inline Dense dense_from_raw(std::size_t degree, std::size_t dim,
                            const std::vector<std::pair<IndexTuple, ScalarExpr>>& raw) {
  Dense d(degree, dim);
  for (const auto& [idx, v] : raw) d.add_antisymmetric(idx, v);
  return d;
}

/// J^{ijk} = Pi^{il} d_l Pi^{jk} + Pi^{jl} d_l Pi^{ki} + Pi^{kl} d_l Pi^{ij}, summed term by term.
inline Dense oracle_jacobiator(const Dense& pi) {
  const std::size_t n = pi.dim();
  Dense j(3, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        ScalarExpr sum(n);
        for (std::size_t l = 0; l < n; ++l) {
          sum += pi(a, l) * differentiate(pi(b, c), l);
          sum += pi(b, l) * differentiate(pi(c, a), l);
          sum += pi(c, l) * differentiate(pi(a, b), l);
        }
        j(a, b, c) = sum;
      }
  return j;
}

/// C^{ijk} = H_{lmn} Pi^{li} Pi^{mj} Pi^{nk}, all n^3 terms.
inline Dense oracle_contraction(const Dense& h, const Dense& pi) {
  const std::size_t n = pi.dim();
  Dense c(3, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        ScalarExpr sum(n);
        for (std::size_t l = 0; l < n; ++l)
          for (std::size_t m = 0; m < n; ++m)
            for (std::size_t q = 0; q < n; ++q) {
              const ScalarExpr& hv = h(l, m, q);
              if (hv.is_zero()) continue;
              sum += hv * pi(l, i) * pi(m, j) * pi(q, k);
            }
        c(i, j, k) = sum;
      }
  return c;
}

/// (dW)_{i0..ik} = sum_r (-1)^r d_{i_r} W_{i0..^i_r..ik}, on every tuple.
inline Dense oracle_exterior_derivative(const Dense& w) {
  const std::size_t n = w.dim();
  const std::size_t k = w.degree();
  Dense out(k + 1, n);
  IndexTuple idx(k + 1, 0);
  const std::function<void(std::size_t)> fill = [&](std::size_t pos) {
    if (pos == k + 1) {
      ScalarExpr sum(n);
      for (std::size_t r = 0; r <= k; ++r) {
        IndexTuple rest;
        for (std::size_t s = 0; s <= k; ++s)
          if (s != r) rest.push_back(idx[s]);
        const ScalarExpr term = differentiate(w.at(rest), idx[r]);
        if (r % 2 == 0) sum += term;
        else sum -= term;
      }
      out.at(idx) = sum;
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      idx[pos] = i;
      fill(pos + 1);
    }
  };
  fill(0);
  return out;
}

/// c^{ij}_k = -(d_k Pi^{ij} + Pi^{il} Pi^{jm} H_{klm}).
inline ScalarExpr oracle_structure(const Dense& pi, const Dense& h, std::size_t i, std::size_t j, std::size_t k) {
  const std::size_t n = pi.dim();
  ScalarExpr sum = differentiate(pi(i, j), k);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m) sum += pi(i, l) * pi(j, m) * h(k, l, m);
  return -sum;
}

/// Checks every tuple of a dense array against the engine's signed access.
template <Variance V>
bool matches(const Dense& dense, const AntisymmetricField<V>& field) {
  if (dense.dim() != field.dim() || dense.degree() != field.degree()) return false;
  const std::size_t n = dense.dim();
  IndexTuple idx(dense.degree(), 0);
  bool ok = true;
  const std::function<void(std::size_t)> walk = [&](std::size_t pos) {
    if (!ok) return;
    if (pos == idx.size()) {
      if (!(dense.at(idx) - field.at(idx)).is_zero()) ok = false;
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      idx[pos] = i;
      walk(pos + 1);
    }
  };
  walk(0);
  return ok;
}

inline ScalarExpr expr(const std::string& text, std::size_t dim) { return parse_scalar(text, Chart::standard(dim)); }

}  // namespace twistkit::testing
