#include "twistkit/fields.hpp"

#include <algorithm>

namespace twistkit {

int sort_with_sign(IndexTuple& indices) {
  int sign = 1;
  // insertion sort, counting transpositions
  for (std::size_t i = 1; i < indices.size(); ++i) {
    for (std::size_t j = i; j > 0 && indices[j - 1] > indices[j]; --j) {
      std::swap(indices[j - 1], indices[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < indices.size(); ++i)
    if (indices[i - 1] == indices[i]) return 0;
  return sign;
}

std::vector<IndexTuple> increasing_tuples(std::size_t k, std::size_t dim) {
  std::vector<IndexTuple> out;
  if (k > dim) return out;
  IndexTuple t(k);
  for (std::size_t i = 0; i < k; ++i) t[i] = i;
  while (true) {
    out.push_back(t);
    std::size_t pos = k;
    while (pos > 0 && t[pos - 1] == dim - k + pos - 1) --pos;
    if (pos == 0) break;
    ++t[pos - 1];
    for (std::size_t i = pos; i < k; ++i) t[i] = t[i - 1] + 1;
  }
  return out;
}

KForm exterior_derivative(const KForm& form) {
  const std::size_t k = form.degree();
  const std::size_t n = form.dim();
  KForm out(k + 1, n);
  if (k + 1 > n) return out;
  for (const auto& idx : increasing_tuples(k + 1, n)) {
    ScalarExpr sum(n);
    for (std::size_t r = 0; r <= k; ++r) {
      IndexTuple rest;
      for (std::size_t s = 0; s <= k; ++s)
        if (s != r) rest.push_back(idx[s]);
      ScalarExpr term = differentiate(form.at(rest), idx[r]);
      if (r % 2 == 0) sum += term;
      else sum -= term;
    }
    out.set_sorted(idx, std::move(sum));
  }
  return out;
}

KVector schouten_half(const KVector& pi) {
  if (pi.degree() != 2) throw Error(ErrorKind::DegreeMismatch, "schouten_half expects a bivector");
  const std::size_t n = pi.dim();

  // dense copies of Pi and its partial derivatives
  std::vector<std::vector<ScalarExpr>> p(n, std::vector<ScalarExpr>(n, ScalarExpr(n)));
  for (const auto& [idx, v] : pi.components()) {
    p[idx[0]][idx[1]] = v;
    p[idx[1]][idx[0]] = -v;
  }
  std::vector<std::vector<std::vector<ScalarExpr>>> dp(n);  // dp[l][i][j] = d_l Pi^{ij}
  for (std::size_t l = 0; l < n; ++l) {
    dp[l].assign(n, std::vector<ScalarExpr>(n, ScalarExpr(n)));
    for (const auto& [idx, v] : pi.components()) {
      ScalarExpr d = differentiate(v, l);
      dp[l][idx[1]][idx[0]] = -d;
      dp[l][idx[0]][idx[1]] = std::move(d);
    }
  }

  KVector out(3, n);
  for (const auto& t : increasing_tuples(3, n)) {
    const std::size_t i = t[0], j = t[1], k = t[2];
    ScalarExpr sum(n);
    for (std::size_t l = 0; l < n; ++l) {
      if (!p[i][l].is_zero() && !dp[l][j][k].is_zero()) sum += p[i][l] * dp[l][j][k];
      if (!p[j][l].is_zero() && !dp[l][k][i].is_zero()) sum += p[j][l] * dp[l][k][i];
      if (!p[k][l].is_zero() && !dp[l][i][j].is_zero()) sum += p[k][l] * dp[l][i][j];
    }
    out.set_sorted(t, std::move(sum));
  }
  return out;
}

KVector triple_contraction(const KForm& h, const KVector& pi) {
  if (h.degree() != 3) throw Error(ErrorKind::DegreeMismatch, "triple_contraction expects a 3-form");
  if (pi.degree() != 2) throw Error(ErrorKind::DegreeMismatch, "triple_contraction expects a bivector");
  if (h.dim() != pi.dim()) throw Error(ErrorKind::DimensionMismatch, "3-form and bivector live on different charts");
  const std::size_t n = pi.dim();
  KVector out(3, n);
  if (h.is_zero()) return out;

  // column[i][l] = Pi^{li}
  std::vector<std::vector<ScalarExpr>> column(n, std::vector<ScalarExpr>(n, ScalarExpr(n)));
  for (const auto& [idx, v] : pi.components()) {
    column[idx[1]][idx[0]] = v;
    column[idx[0]][idx[1]] = -v;
  }

  // H_{lmn} A^l B^m C^n summed over all l, m, n equals, by antisymmetry of H,
  // the sum over l < m < n of H_{lmn} det[A, B, C] restricted to (l, m, n).
  auto det3 = [](const ScalarExpr& a0, const ScalarExpr& a1, const ScalarExpr& a2,
                 const ScalarExpr& b0, const ScalarExpr& b1, const ScalarExpr& b2,
                 const ScalarExpr& c0, const ScalarExpr& c1, const ScalarExpr& c2) {
    return a0 * (b1 * c2 - b2 * c1) - a1 * (b0 * c2 - b2 * c0) + a2 * (b0 * c1 - b1 * c0);
  };

  for (const auto& t : increasing_tuples(3, n)) {
    const auto& a = column[t[0]];
    const auto& b = column[t[1]];
    const auto& c = column[t[2]];
    ScalarExpr sum(n);
    for (const auto& [lmn, hv] : h.components()) {
      const std::size_t l = lmn[0], m = lmn[1], k = lmn[2];
      ScalarExpr d = det3(a[l], a[m], a[k], b[l], b[m], b[k], c[l], c[m], c[k]);
      if (!d.is_zero()) sum += hv * d;
    }
    out.set_sorted(t, std::move(sum));
  }
  return out;
}

KVector invert_two_form(const KForm& omega) {
  if (omega.degree() != 2) throw Error(ErrorKind::DegreeMismatch, "invert_two_form expects a 2-form");
  const std::size_t n = omega.dim();
  if (n % 2 == 1) throw Error(ErrorKind::OddDimension, "antisymmetric matrices of odd size are singular");

  // Gauss-Jordan on [w | I] over the field of rational functions
  std::vector<std::vector<ScalarExpr>> a(n, std::vector<ScalarExpr>(2 * n, ScalarExpr(n)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) a[i][j] = omega.at({i, j});
    a[i][n + i] = ScalarExpr(n, 1);
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col].is_zero()) ++pivot;
    if (pivot == n) throw Error(ErrorKind::DegenerateForm, "2-form has identically vanishing determinant");
    std::swap(a[pivot], a[col]);
    const ScalarExpr inv = ScalarExpr(n, 1) / a[col][col];
    for (auto& e : a[col]) e *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      const ScalarExpr f = a[r][col];
      for (std::size_t c = col; c < 2 * n; ++c)
        if (!a[col][c].is_zero()) a[r][c] -= f * a[col][c];
    }
  }

  KVector pi(2, n);
  for (const auto& t : increasing_tuples(2, n)) pi.set_sorted(t, a[t[0]][n + t[1]]);
  return pi;
}

}  // namespace twistkit
