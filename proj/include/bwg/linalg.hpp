#pragma once

#include "bwg/lp.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace bwg {

template <class Scalar>
using Matrix = std::vector<std::vector<Scalar>>;

namespace detail {
inline bool better_pivot(const Rational& cand, const Rational& best) { return sgn(best) == 0 && sgn(cand) != 0; }
inline bool better_pivot(double cand, double best) { return std::abs(cand) > std::abs(best); }
}  // namespace detail

/// Gauss-Jordan solve of A x = b for A with rows >= cols. Returns nullopt when
/// A lacks full column rank or the system is inconsistent.
template <class Scalar>
std::optional<std::vector<Scalar>> solve_linear(Matrix<Scalar> a, std::vector<Scalar> b) {
  using Traits = ScalarTraits<Scalar>;
  const std::size_t rows = a.size();
  if (rows == 0) return std::vector<Scalar>{};
  const std::size_t cols = a[0].size();
  if (rows < cols || b.size() != rows) return std::nullopt;
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t piv = rows;
    Scalar best = Scalar(0);
    for (std::size_t r = c; r < rows; ++r)
      if (detail::better_pivot(a[r][c], best)) {
        best = a[r][c];
        piv = r;
      }
    if (piv == rows || Traits::is_zero(best)) return std::nullopt;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    Scalar p = a[c][c];
    for (std::size_t j = c; j < cols; ++j) a[c][j] /= p;
    b[c] /= p;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == c || Traits::is_zero(a[r][c])) continue;
      Scalar f = a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[r][j] -= f * a[c][j];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t r = cols; r < rows; ++r)
    if (!Traits::is_zero(b[r])) return std::nullopt;
  b.resize(cols);
  return b;
}

}  // namespace bwg
