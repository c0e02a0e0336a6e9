#include "twistkit/twistcheck.hpp"

namespace twistkit {

bool is_closed(const KForm& h) { return exterior_derivative(h).is_zero(); }

KForm effective_h(const ManifoldSpec& spec) {
  if (const auto* two = std::get_if<TwoFormBackground>(&spec.background)) return exterior_derivative(two->omega);
  const KForm& h = std::get<ThreeFormBackground>(spec.background).h;
  if (!is_closed(h)) throw Error(ErrorKind::NotClosed, "the 3-form background has nonzero exterior derivative");
  return h;
}

KVector twist_residual(const KVector& pi, const KForm& h) {
  return schouten_half(pi) - triple_contraction(h, pi);
}

StructureFunctions structure_functions(const KVector& pi, const KForm& h) {
  if (h.dim() != pi.dim()) throw Error(ErrorKind::DimensionMismatch, "3-form and bivector live on different charts");
  const std::size_t n = pi.dim();
  StructureFunctions out;
  for (const auto& ij : increasing_tuples(2, n)) {
    const std::size_t i = ij[0], j = ij[1];
    const ScalarExpr& pij = pi.at({i, j});
    for (std::size_t k = 0; k < n; ++k) {
      ScalarExpr c = differentiate(pij, k);
      if (!h.is_zero()) {
        for (std::size_t l = 0; l < n; ++l) {
          ScalarExpr pil = pi.at({i, l});
          if (pil.is_zero()) continue;
          for (std::size_t m = 0; m < n; ++m) {
            if (l == m || k == l || k == m) continue;
            ScalarExpr hklm = h.at({k, l, m});
            if (hklm.is_zero()) continue;
            c += pil * pi.at({j, m}) * hklm;
          }
        }
      }
      out.emplace(StructureKey{i, j, k}, -c);
    }
  }
  return out;
}

ScalarExpr induced_bracket(const ScalarExpr& f, const ScalarExpr& g, const KVector& pi) {
  const std::size_t n = pi.dim();
  ScalarExpr sum(n);
  for (const auto& [idx, v] : pi.components()) {
    const std::size_t i = idx[0], j = idx[1];
    // Pi^{ij} (d_i f d_j g - d_j f d_i g) over i < j
    sum += v * (differentiate(f, i) * differentiate(g, j) - differentiate(f, j) * differentiate(g, i));
  }
  return sum;
}

Report check(const ManifoldSpec& spec) {
  Report r;
  r.effective_h = effective_h(spec);
  r.h_closed = true;
  r.jacobiator = schouten_half(spec.pi);
  r.contraction = triple_contraction(r.effective_h, spec.pi);
  r.residual = r.jacobiator - r.contraction;
  r.is_poisson = r.jacobiator.is_zero();
  r.is_twisted_poisson = r.residual.is_zero();
  r.structure_functions = structure_functions(spec.pi, r.effective_h);
  return r;
}

}  // namespace twistkit
