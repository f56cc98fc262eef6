#ifndef CHAINGEO_LINALG_HPP
#define CHAINGEO_LINALG_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "chaingeo/field.hpp"

namespace chaingeo {

/// Dense row-major matrix over a finite field. Only what the geometry code
/// needs: rank, solving, kernels, inversion.
class fmatrix {
 public:
  using element = field::element;

  fmatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  element& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  element operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  /// Reduced row echelon form in place; returns pivot columns.
  std::vector<std::size_t> reduce(const field& f) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
      std::size_t sel = row;
      while (sel < rows_ && (*this)(sel, col) == 0) ++sel;
      if (sel == rows_) continue;
      if (sel != row)
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(sel, c), (*this)(row, c));
      const element s = f.inv((*this)(row, col));
      for (std::size_t c = 0; c < cols_; ++c) (*this)(row, c) = f.mul((*this)(row, c), s);
      for (std::size_t r = 0; r < rows_; ++r) {
        if (r == row || (*this)(r, col) == 0) continue;
        const element factor = (*this)(r, col);
        for (std::size_t c = 0; c < cols_; ++c)
          (*this)(r, c) = f.sub((*this)(r, c), f.mul(factor, (*this)(row, c)));
      }
      pivots.push_back(col);
      ++row;
    }
    return pivots;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<element> a_;
};

inline std::size_t rank(fmatrix m, const field& f) { return m.reduce(f).size(); }

/// One solution of A x = b, or nullopt when inconsistent.
inline std::optional<std::vector<field::element>> solve(const fmatrix& a,
                                                        const std::vector<field::element>& b,
                                                        const field& f) {
  fmatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
    aug(r, a.cols()) = b[r];
  }
  const auto pivots = aug.reduce(f);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  std::vector<field::element> x(a.cols(), 0);
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, a.cols());
  return x;
}

/// Basis of the right kernel {x : A x = 0}.
inline std::vector<std::vector<field::element>> kernel(fmatrix a, const field& f) {
  const auto pivots = a.reduce(f);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<field::element>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<field::element> v(a.cols(), 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = f.neg(a(i, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

inline std::optional<fmatrix> inverse(const fmatrix& a, const field& f) {
  const std::size_t n = a.rows();
  fmatrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
    aug(r, n + r) = 1;
  }
  const auto pivots = aug.reduce(f);
  if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
  fmatrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = aug(r, n + c);
  return inv;
}

}  // namespace chaingeo

#endif  // CHAINGEO_LINALG_HPP
