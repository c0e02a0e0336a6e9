#pragma once

#include <map>
#include <tuple>
#include <utility>
#include <variant>

#include "twistkit/fields.hpp"

namespace twistkit {

/// Sign s for which Pi = invert_two_form(w) and H = s dw satisfy the twisted
/// condition under the contraction convention of triple_contraction.
inline constexpr int kTwistedSymplecticSign = -1;

struct TwoFormBackground {
  KForm omega;
};
struct ThreeFormBackground {
  KForm h;
};
using Background = std::variant<TwoFormBackground, ThreeFormBackground>;

struct ManifoldSpec {
  Chart chart;
  KVector pi;
  Background background;

  std::size_t dim() const { return chart.dim(); }
  bool has_two_form() const { return std::holds_alternative<TwoFormBackground>(background); }
};

/// Key (i, j, k) with i < j: the structure function c^{ij}_k.
using StructureKey = std::tuple<std::size_t, std::size_t, std::size_t>;
using StructureFunctions = std::map<StructureKey, ScalarExpr>;

struct Report {
  bool h_closed = false;
  KForm effective_h{3, 0};
  KVector jacobiator{3, 0};
  KVector contraction{3, 0};
  KVector residual{3, 0};
  bool is_poisson = false;
  bool is_twisted_poisson = false;
  StructureFunctions structure_functions;
};

bool is_closed(const KForm& h);

/// H itself, or dOmega for a 2-form background. Throws Error(NotClosed).
KForm effective_h(const ManifoldSpec& spec);

/// R = schouten_half(Pi) - triple_contraction(H, Pi).
KVector twist_residual(const KVector& pi, const KForm& h);

/// c^{ij}_k = -(d_k Pi^{ij} + Pi^{il} Pi^{jm} H_{klm}) for all i < j and k.
StructureFunctions structure_functions(const KVector& pi, const KForm& h);

/// {f, g} = Pi^{ij} d_i f d_j g.
ScalarExpr induced_bracket(const ScalarExpr& f, const ScalarExpr& g, const KVector& pi);

Report check(const ManifoldSpec& spec);

}  // namespace twistkit
