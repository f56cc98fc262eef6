#ifndef CHAINGEO_ALGEBRA_HPP
#define CHAINGEO_ALGEBRA_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chaingeo/error.hpp"
#include "chaingeo/field.hpp"
#include "chaingeo/linalg.hpp"

namespace chaingeo {

/// How an algebra was built. Only used for shape-specific cross-checks
/// (e.g. the point count of a product ring); arithmetic never looks at it.
enum class algebra_kind { custom, base_field, extension, product, truncated };

/// A finite associative unital F_q-algebra R of dimension d, given by
/// structure constants with respect to a basis e_0..e_{d-1}.
///
/// Elements are encoded as integers in [0, q^d): coordinate i is the i-th
/// base-q digit. Multiplication is the bilinear extension of
/// e_i * e_j = sum_k T[i][j][k] e_k.
class algebra {
 public:
  using scalar = field::element;
  using element = std::uint32_t;

  static constexpr std::uint64_t max_order = 1u << 16;

  algebra(field base, unsigned dim, std::vector<scalar> one, std::vector<scalar> tensor,
          algebra_kind kind = algebra_kind::custom, unsigned factors = 1)
      : base_(std::move(base)),
        d_(dim),
        one_coords_(std::move(one)),
        tensor_(std::move(tensor)),
        kind_(kind),
        factors_(factors) {
    if (d_ == 0) throw error(error_code::bad_spec, "dimension must be positive");
    if (one_coords_.size() != d_ || tensor_.size() != std::size_t(d_) * d_ * d_)
      throw error(error_code::bad_spec, "structure constant counts do not match d");
    std::uint64_t n = 1;
    for (unsigned i = 0; i < d_; ++i) {
      n *= base_.order();
      if (n > max_order) throw error(error_code::bad_spec, "algebra has more than 65536 elements");
    }
    order_ = static_cast<element>(n);
    for (scalar c : one_coords_)
      if (c >= base_.order()) throw error(error_code::bad_spec, "digit out of range");
    for (scalar c : tensor_)
      if (c >= base_.order()) throw error(error_code::bad_spec, "digit out of range");

    build_coords();
    validate();
    if (order_ <= table_limit) build_tables();
    classify_units();
  }

  const field& base() const { return base_; }
  unsigned dim() const { return d_; }
  unsigned q() const { return base_.order(); }
  element order() const { return order_; }
  algebra_kind kind() const { return kind_; }
  /// Number of factors for algebra_kind::product.
  unsigned factors() const { return factors_; }

  const std::vector<scalar>& one_coords() const { return one_coords_; }
  /// T[i][j][k] flattened as (i*d + j)*d + k.
  const std::vector<scalar>& tensor() const { return tensor_; }

  std::span<const scalar> coords(element a) const {
    return {coords_.data() + std::size_t(a) * d_, d_};
  }

  element from_coords(std::span<const scalar> c) const {
    element v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * q() + c[i];
    return v;
  }

  element zero() const { return 0; }
  element one() const { return one_; }
  /// The embedding K -> R, x |-> x * 1.
  element scalar_elem(scalar x) const {
    std::vector<scalar> c(d_);
    for (unsigned i = 0; i < d_; ++i) c[i] = base_.mul(x, one_coords_[i]);
    return from_coords(c);
  }
  /// Basis vector e_i.
  element basis(unsigned i) const {
    element v = 1;
    for (unsigned k = 0; k < i; ++k) v *= q();
    return v;
  }

  element add(element a, element b) const {
    if (!add_table_.empty()) return add_table_[std::size_t(a) * order_ + b];
    return add_slow(a, b);
  }
  element neg(element a) const {
    std::vector<scalar> c(d_);
    auto ca = coords(a);
    for (unsigned i = 0; i < d_; ++i) c[i] = base_.neg(ca[i]);
    return from_coords(c);
  }
  element sub(element a, element b) const { return add(a, neg(b)); }
  element mul(element a, element b) const {
    if (!mul_table_.empty()) return mul_table_[std::size_t(a) * order_ + b];
    return mul_slow(a, b);
  }
  /// Scalar multiple x*a.
  element smul(scalar x, element a) const {
    std::vector<scalar> c(d_);
    auto ca = coords(a);
    for (unsigned i = 0; i < d_; ++i) c[i] = base_.mul(x, ca[i]);
    return from_coords(c);
  }

  /// d x d matrix of y |-> a*y in the basis (column j = coords of a*e_j).
  fmatrix left_regular(element a) const {
    fmatrix m(d_, d_);
    for (unsigned j = 0; j < d_; ++j) {
      auto c = coords(mul(a, basis(j)));
      for (unsigned i = 0; i < d_; ++i) m(i, j) = c[i];
    }
    return m;
  }
  /// d x d matrix of y |-> y*a.
  fmatrix right_regular(element a) const {
    fmatrix m(d_, d_);
    for (unsigned j = 0; j < d_; ++j) {
      auto c = coords(mul(basis(j), a));
      for (unsigned i = 0; i < d_; ++i) m(i, j) = c[i];
    }
    return m;
  }

  bool is_unit(element a) const { return is_unit_[a]; }

  element inv(element a) const {
    if (!is_unit_[a]) throw error(error_code::not_a_unit, "element " + std::to_string(a));
    return inverse_[a];
  }

  const std::vector<element>& units() const { return units_; }
  const std::vector<element>& nonunits() const { return nonunits_; }
  std::uint64_t unit_count() const { return units_.size(); }

  bool is_local() const { return delta_.has_value(); }
  /// dim_{F_q} of the nonunits; only for local algebras.
  std::optional<unsigned> delta() const { return delta_; }
  /// Row-reduced basis of the nonunit ideal (local algebras only).
  const std::vector<std::vector<scalar>>& radical_basis() const { return radical_basis_; }
  /// Pivot column of each radical_basis() row.
  const std::vector<std::size_t>& radical_pivots() const { return radical_pivots_; }

  bool is_commutative() const {
    for (unsigned i = 0; i < d_; ++i)
      for (unsigned j = i + 1; j < d_; ++j)
        if (mul(basis(i), basis(j)) != mul(basis(j), basis(i))) return false;
    return true;
  }

  /// #N for N = {n in R* : n^-1 K* n = K*}.
  std::uint64_t normalizer_order() const {
    std::vector<bool> in_kstar(order_, false);
    std::vector<element> kstar;
    for (unsigned x = 1; x < q(); ++x) {
      element s = scalar_elem(static_cast<scalar>(x));
      in_kstar[s] = true;
      kstar.push_back(s);
    }
    std::uint64_t count = 0;
    for (element n : units_) {
      const element ninv = inverse_[n];
      const bool normalizes = std::all_of(kstar.begin(), kstar.end(), [&](element k) {
        return in_kstar[mul(mul(ninv, k), n)];
      });
      if (normalizes) ++count;
    }
    return count;
  }

 private:
  static constexpr element table_limit = 1024;

  void build_coords() {
    coords_.resize(std::size_t(order_) * d_);
    for (element a = 0; a < order_; ++a) {
      element v = a;
      for (unsigned i = 0; i < d_; ++i) {
        coords_[std::size_t(a) * d_ + i] = static_cast<scalar>(v % q());
        v /= q();
      }
    }
    one_ = from_coords(one_coords_);
  }

  std::vector<scalar> mul_vec(std::span<const scalar> a, std::span<const scalar> b) const {
    std::vector<scalar> r(d_, 0);
    for (unsigned i = 0; i < d_; ++i) {
      if (a[i] == 0) continue;
      for (unsigned j = 0; j < d_; ++j) {
        if (b[j] == 0) continue;
        const scalar ab = base_.mul(a[i], b[j]);
        const scalar* t = tensor_.data() + (std::size_t(i) * d_ + j) * d_;
        for (unsigned k = 0; k < d_; ++k)
          if (t[k]) r[k] = base_.add(r[k], base_.mul(ab, t[k]));
      }
    }
    return r;
  }

  element mul_slow(element a, element b) const { return from_coords(mul_vec(coords(a), coords(b))); }

  element add_slow(element a, element b) const {
    std::vector<scalar> c(d_);
    auto ca = coords(a);
    auto cb = coords(b);
    for (unsigned i = 0; i < d_; ++i) c[i] = base_.add(ca[i], cb[i]);
    return from_coords(c);
  }

  void validate() const {
    for (unsigned i = 0; i < d_; ++i) {
      const element ei = basis(i);
      if (mul_slow(one_, ei) != ei || mul_slow(ei, one_) != ei)
        throw error(error_code::no_unity, "given one is not a two-sided identity on e_" + std::to_string(i));
    }
    for (unsigned i = 0; i < d_; ++i)
      for (unsigned j = 0; j < d_; ++j)
        for (unsigned k = 0; k < d_; ++k) {
          const element ei = basis(i), ej = basis(j), ek = basis(k);
          if (mul_slow(mul_slow(ei, ej), ek) != mul_slow(ei, mul_slow(ej, ek)))
            throw error(error_code::non_associative,
                        "(e" + std::to_string(i) + " e" + std::to_string(j) + ") e" + std::to_string(k));
        }
    const element g = scalar_elem(base_.primitive_element());
    for (unsigned j = 0; j < d_; ++j)
      if (mul_slow(g, basis(j)) != mul_slow(basis(j), g))
        throw error(error_code::scalars_not_central, "K*1 does not commute with e_" + std::to_string(j));
  }

  void build_tables() {
    add_table_.resize(std::size_t(order_) * order_);
    mul_table_.resize(std::size_t(order_) * order_);
    for (element a = 0; a < order_; ++a)
      for (element b = 0; b < order_; ++b) {
        add_table_[std::size_t(a) * order_ + b] = add_slow(a, b);
        mul_table_[std::size_t(a) * order_ + b] = mul_slow(a, b);
      }
  }

  void classify_units() {
    is_unit_.assign(order_, false);
    inverse_.assign(order_, 0);
    const auto one = std::vector<scalar>(one_coords_);
    for (element a = 0; a < order_; ++a) {
      const fmatrix left = left_regular(a);
      if (rank(left, base_) == d_) {
        // In a finite ring a right inverse of a unit is its two-sided inverse.
        is_unit_[a] = true;
        inverse_[a] = from_coords(*solve(left, one, base_));
        units_.push_back(a);
      } else {
        nonunits_.push_back(a);
      }
    }

    std::vector<bool> nonunit(order_, false);
    for (element a : nonunits_) nonunit[a] = true;
    for (element a : nonunits_)
      for (element b : nonunits_)
        if (!nonunit[add(a, b)]) return;

    std::uint64_t size = 1;
    unsigned delta = 0;
    while (size < nonunits_.size()) {
      size *= q();
      ++delta;
    }
    if (size != nonunits_.size())
      throw error(error_code::bad_spec, "nonunit ideal size is not a power of q");
    fmatrix m(nonunits_.size(), d_);
    for (std::size_t r = 0; r < nonunits_.size(); ++r) {
      auto c = coords(nonunits_[r]);
      for (unsigned i = 0; i < d_; ++i) m(r, i) = c[i];
    }
    const auto pivots = m.reduce(base_);
    if (pivots.size() != delta)
      throw error(error_code::bad_spec, "nonunit ideal is not an F_q-subspace of dimension delta");
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      std::vector<scalar> row(d_);
      for (unsigned i = 0; i < d_; ++i) row[i] = m(r, i);
      radical_basis_.push_back(std::move(row));
    }
    radical_pivots_.assign(pivots.begin(), pivots.end());
    delta_ = delta;
  }

  field base_;
  unsigned d_;
  std::vector<scalar> one_coords_;
  std::vector<scalar> tensor_;
  algebra_kind kind_;
  unsigned factors_;
  element order_ = 0;
  element one_ = 0;
  std::vector<scalar> coords_;
  std::vector<element> add_table_;
  std::vector<element> mul_table_;
  std::vector<bool> is_unit_;
  std::vector<element> inverse_;
  std::vector<element> units_;
  std::vector<element> nonunits_;
  std::optional<unsigned> delta_;
  std::vector<std::vector<scalar>> radical_basis_;
  std::vector<std::size_t> radical_pivots_;
};

/// F = R / (R \ R*) for local R, with the canonical surjection as a lookup
/// table over all elements of R.
struct residue_field_result {
  algebra residue;
  std::vector<algebra::element> proj;

  algebra::element operator()(algebra::element a) const { return proj[a]; }
};

inline residue_field_result residue_field(const algebra& r) {
  if (!r.is_local()) throw error(error_code::not_local, "residue field needs a local ring");
  using scalar = algebra::scalar;
  const field& k = r.base();
  const unsigned d = r.dim();

  std::vector<bool> is_pivot(d, false);
  for (auto c : r.radical_pivots()) is_pivot[c] = true;
  std::vector<unsigned> complement;
  for (unsigned c = 0; c < d; ++c)
    if (!is_pivot[c]) complement.push_back(c);
  const unsigned m = static_cast<unsigned>(complement.size());

  // Coordinates of a modulo the radical, in the basis {e_c : c not a pivot}.
  auto project = [&](algebra::element a) {
    std::vector<scalar> v(r.coords(a).begin(), r.coords(a).end());
    for (std::size_t row = 0; row < r.radical_basis().size(); ++row) {
      const scalar lead = v[r.radical_pivots()[row]];
      if (lead == 0) continue;
      for (unsigned i = 0; i < d; ++i)
        v[i] = k.sub(v[i], k.mul(lead, r.radical_basis()[row][i]));
    }
    std::vector<scalar> out(m);
    for (unsigned i = 0; i < m; ++i) out[i] = v[complement[i]];
    return out;
  };

  std::vector<scalar> tensor(std::size_t(m) * m * m);
  for (unsigned i = 0; i < m; ++i)
    for (unsigned j = 0; j < m; ++j) {
      auto c = project(r.mul(r.basis(complement[i]), r.basis(complement[j])));
      std::copy(c.begin(), c.end(), tensor.begin() + (std::size_t(i) * m + j) * m);
    }
  algebra f(k, m, project(r.one()), std::move(tensor),
            m == 1 ? algebra_kind::base_field : algebra_kind::extension);
  if (f.delta() != 0u) throw error(error_code::model_violation, "residue ring is not a field");

  std::vector<algebra::element> proj(r.order());
  for (algebra::element a = 0; a < r.order(); ++a) proj[a] = f.from_coords(project(a));
  return {std::move(f), std::move(proj)};
}

}  // namespace chaingeo

#endif  // CHAINGEO_ALGEBRA_HPP
