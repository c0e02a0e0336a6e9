#pragma once

#include <map>
#include <utility>
#include <vector>

#include "twistkit/error.hpp"
#include "twistkit/scalar_expr.hpp"

namespace twistkit {

/// Zero-based tensor indices.
using IndexTuple = std::vector<std::size_t>;

/// Sign of the permutation sorting `indices` ascending; 0 on a repeated index.
int sort_with_sign(IndexTuple& indices);

enum class Variance { Contravariant, Covariant };

/// Totally antisymmetric tensor field on a chart. Only strictly increasing
/// index tuples with nonzero components are stored; any other tuple is read
/// through the permutation sign.
template <Variance V>
class AntisymmetricField {
 public:
  using Components = std::map<IndexTuple, ScalarExpr>;

  AntisymmetricField(std::size_t degree, std::size_t dim) : degree_(degree), dim_(dim) {}

  std::size_t degree() const { return degree_; }
  std::size_t dim() const { return dim_; }
  const Components& components() const { return components_; }
  bool is_zero() const { return components_.empty(); }

  /// Component for an arbitrary tuple; repeated indices give zero.
  ScalarExpr at(IndexTuple indices) const {
    check(indices);
    const int sign = sort_with_sign(indices);
    if (sign == 0) return ScalarExpr(dim_);
    auto it = components_.find(indices);
    if (it == components_.end()) return ScalarExpr(dim_);
    return sign > 0 ? it->second : -it->second;
  }

  /// Adds value (times the sorting sign) into the component of indices.
  void accumulate(IndexTuple indices, const ScalarExpr& value) {
    check(indices);
    const int sign = sort_with_sign(indices);
    if (sign == 0) throw Error(ErrorKind::RepeatedIndex, "antisymmetric component with a repeated index");
    if (value.is_zero()) return;
    auto [it, inserted] = components_.try_emplace(indices, ScalarExpr(dim_));
    if (sign > 0) it->second += value;
    else it->second -= value;
    if (it->second.is_zero()) components_.erase(it);
  }

  /// Stores a component on an already strictly increasing tuple.
  void set_sorted(const IndexTuple& indices, ScalarExpr value) {
    if (value.is_zero()) components_.erase(indices);
    else components_.insert_or_assign(indices, std::move(value));
  }

  AntisymmetricField& operator+=(const AntisymmetricField& other) {
    require_same_shape(other);
    for (const auto& [idx, v] : other.components_) accumulate(idx, v);
    return *this;
  }
  AntisymmetricField& operator-=(const AntisymmetricField& other) {
    require_same_shape(other);
    for (const auto& [idx, v] : other.components_) accumulate(idx, -v);
    return *this;
  }
  friend AntisymmetricField operator+(AntisymmetricField a, const AntisymmetricField& b) { return a += b; }
  friend AntisymmetricField operator-(AntisymmetricField a, const AntisymmetricField& b) { return a -= b; }
  friend AntisymmetricField operator*(const ScalarExpr& s, AntisymmetricField a) {
    AntisymmetricField out(a.degree_, a.dim_);
    for (const auto& [idx, v] : a.components_) out.set_sorted(idx, s * v);
    return out;
  }
  friend bool operator==(const AntisymmetricField&, const AntisymmetricField&) = default;

 private:
  void check(const IndexTuple& indices) const {
    if (indices.size() != degree_) throw Error(ErrorKind::DegreeMismatch, "index tuple length differs from tensor degree");
    for (auto i : indices)
      if (i >= dim_) throw Error(ErrorKind::IndexOutOfRange, "index " + std::to_string(i + 1) + " exceeds dimension " + std::to_string(dim_));
  }
  void require_same_shape(const AntisymmetricField& other) const {
    if (other.dim_ != dim_) throw Error(ErrorKind::DimensionMismatch, "tensor dimensions differ");
    if (other.degree_ != degree_) throw Error(ErrorKind::DegreeMismatch, "tensor degrees differ");
  }

  std::size_t degree_;
  std::size_t dim_;
  Components components_;
};

using KVector = AntisymmetricField<Variance::Contravariant>;
using KForm = AntisymmetricField<Variance::Covariant>;

template <Variance V>
AntisymmetricField<V> make_antisymmetric(std::size_t degree, std::size_t dim,
                                         const std::vector<std::pair<IndexTuple, ScalarExpr>>& raw) {
  AntisymmetricField<V> out(degree, dim);
  for (const auto& [idx, value] : raw) out.accumulate(idx, value);
  return out;
}

/// All strictly increasing k-tuples from {0..dim-1}, in lexicographic order.
std::vector<IndexTuple> increasing_tuples(std::size_t k, std::size_t dim);

/// d of a k-form. A (k+1) above the chart dimension yields the zero form.
KForm exterior_derivative(const KForm& form);

/// J^{ijk} = Pi^{il} d_l Pi^{jk} + Pi^{jl} d_l Pi^{ki} + Pi^{kl} d_l Pi^{ij},
/// i.e. half the Schouten bracket [Pi, Pi]; zero iff Pi satisfies Jacobi.
KVector schouten_half(const KVector& pi);

/// <H, Pi x Pi x Pi> with H contracted into the first, third and fifth slot
/// of Pi x Pi x Pi:  C^{ijk} = H_{lmn} Pi^{li} Pi^{mj} Pi^{nk}.
KVector triple_contraction(const KForm& h, const KVector& pi);

/// Matrix inverse of a nondegenerate 2-form read as a bivector:
/// Pi^{ij} = (w^{-1})^{ij}.
KVector invert_two_form(const KForm& omega);

}  // namespace twistkit
