#pragma once

// Dense two-phase primal simplex with Bland's rule. Instantiated with
// Rational for exact certificates and with double inside iterative solvers.

#include "bwg/rational.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace bwg {

template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static bool is_negative(const Rational& x) { return sgn(x) < 0; }
  static bool is_positive(const Rational& x) { return sgn(x) > 0; }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
};

template <>
struct ScalarTraits<double> {
  static constexpr double eps = 1e-11;
  static bool is_negative(double x) { return x < -eps; }
  static bool is_positive(double x) { return x > eps; }
  static bool is_zero(double x) { return std::abs(x) <= eps; }
};

enum class RowSense { LessEq, GreaterEq, Equal };
enum class LpStatus { Optimal, Infeasible, Unbounded };

/// maximize objective·x subject to rows; variables are >= 0 unless marked free.
template <class Scalar>
struct LinearProgram {
  struct Row {
    std::vector<Scalar> coef;
    RowSense sense;
    Scalar rhs;
  };

  explicit LinearProgram(std::size_t num_vars)
      : objective(num_vars, Scalar(0)), free_var(num_vars, false) {}

  std::size_t num_vars() const { return objective.size(); }

  void add_row(std::vector<Scalar> coef, RowSense sense, Scalar rhs) {
    if (coef.size() != num_vars()) throw std::invalid_argument("LP row has wrong width");
    rows.push_back(Row{std::move(coef), sense, std::move(rhs)});
  }

  std::vector<Scalar> objective;
  std::vector<bool> free_var;
  std::vector<Row> rows;
};

template <class Scalar>
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Scalar> x;
  Scalar value = Scalar(0);
};

namespace detail {

template <class Scalar>
class Tableau {
 public:
  using Traits = ScalarTraits<Scalar>;

  Tableau(std::size_t rows, std::size_t cols)
      : cells_(rows, std::vector<Scalar>(cols + 1, Scalar(0))), basis_(rows, 0), cols_(cols) {}

  Scalar& at(std::size_t r, std::size_t c) { return cells_[r][c]; }
  Scalar& rhs(std::size_t r) { return cells_[r][cols_]; }
  std::size_t rows() const { return cells_.size(); }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    Scalar p = cells_[r][c];
    for (auto& v : cells_[r]) v /= p;
    for (std::size_t k = 0; k < cells_.size(); ++k) {
      if (k == r || Traits::is_zero(cells_[k][c])) continue;
      Scalar f = cells_[k][c];
      for (std::size_t j = 0; j <= cols_; ++j) cells_[k][j] -= f * cells_[r][j];
    }
    Scalar f = obj_[c];
    if (!Traits::is_zero(f))
      for (std::size_t j = 0; j <= cols_; ++j) obj_[j] -= f * cells_[r][j];
    basis_[r] = c;
  }

  // Reduced-cost row for "maximize cost·x" under the current basis.
  void load_objective(const std::vector<Scalar>& cost) {
    obj_.assign(cols_ + 1, Scalar(0));
    for (std::size_t j = 0; j < cols_; ++j) obj_[j] = -cost[j];
    for (std::size_t r = 0; r < rows(); ++r) {
      const Scalar& cb = cost[basis_[r]];
      if (Traits::is_zero(cb)) continue;
      for (std::size_t j = 0; j <= cols_; ++j) obj_[j] += cb * cells_[r][j];
    }
  }

  // Returns false when unbounded.
  bool optimize(const std::vector<bool>& allowed) {
    for (;;) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j)
        if (allowed[j] && Traits::is_negative(obj_[j])) {
          enter = j;
          break;
        }
      if (enter == cols_) return true;
      std::size_t leave = rows();
      Scalar best_ratio = Scalar(0);
      for (std::size_t r = 0; r < rows(); ++r) {
        if (!Traits::is_positive(cells_[r][enter])) continue;
        Scalar ratio = cells_[r][cols_] / cells_[r][enter];
        if (leave == rows() || ratio < best_ratio ||
            (!(best_ratio < ratio) && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave == rows()) return false;
      pivot(leave, enter);
    }
  }

  const Scalar& value() const { return obj_[cols_]; }

  void erase_row(std::size_t r) {
    cells_.erase(cells_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

 private:
  std::vector<std::vector<Scalar>> cells_;
  std::vector<Scalar> obj_;
  std::vector<std::size_t> basis_;
  std::size_t cols_;
};

}  // namespace detail

template <class Scalar>
LpSolution<Scalar> solve_lp(const LinearProgram<Scalar>& lp) {
  using Traits = ScalarTraits<Scalar>;
  const std::size_t n = lp.num_vars();
  const std::size_t m = lp.rows.size();

  // Column layout: [x+ (n)] [x- for free vars] [slack/surplus] [artificial].
  std::vector<std::size_t> neg_col(n, 0);
  std::size_t cols = n;
  for (std::size_t j = 0; j < n; ++j)
    if (lp.free_var[j]) neg_col[j] = cols++;
  std::vector<std::size_t> slack_col(m, 0), art_col(m, 0);
  std::vector<bool> flip(m, false), has_art(m, false);
  for (std::size_t r = 0; r < m; ++r) {
    flip[r] = Traits::is_negative(lp.rows[r].rhs);
    RowSense s = lp.rows[r].sense;
    if (flip[r] && s != RowSense::Equal) s = s == RowSense::LessEq ? RowSense::GreaterEq : RowSense::LessEq;
    if (s != RowSense::Equal) slack_col[r] = cols++;
    has_art[r] = s != RowSense::LessEq;
  }
  const std::size_t first_art = cols;
  for (std::size_t r = 0; r < m; ++r)
    if (has_art[r]) art_col[r] = cols++;

  detail::Tableau<Scalar> tab(m, cols);
  for (std::size_t r = 0; r < m; ++r) {
    const auto& row = lp.rows[r];
    Scalar sign = flip[r] ? Scalar(-1) : Scalar(1);
    RowSense s = row.sense;
    if (flip[r] && s != RowSense::Equal) s = s == RowSense::LessEq ? RowSense::GreaterEq : RowSense::LessEq;
    for (std::size_t j = 0; j < n; ++j) {
      tab.at(r, j) = sign * row.coef[j];
      if (lp.free_var[j]) tab.at(r, neg_col[j]) = -tab.at(r, j);
    }
    tab.rhs(r) = sign * row.rhs;
    if (s == RowSense::LessEq) {
      tab.at(r, slack_col[r]) = Scalar(1);
      tab.basis()[r] = slack_col[r];
    } else {
      if (s == RowSense::GreaterEq) tab.at(r, slack_col[r]) = Scalar(-1);
      tab.at(r, art_col[r]) = Scalar(1);
      tab.basis()[r] = art_col[r];
    }
  }

  LpSolution<Scalar> out;
  std::vector<bool> allowed(cols, true);
  if (first_art < cols) {
    std::vector<Scalar> phase1(cols, Scalar(0));
    for (std::size_t j = first_art; j < cols; ++j) phase1[j] = Scalar(-1);
    tab.load_objective(phase1);
    tab.optimize(allowed);
    if (Traits::is_negative(tab.value())) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (std::size_t r = tab.rows(); r-- > 0;) {
      if (tab.basis()[r] < first_art) continue;
      std::size_t c = first_art;
      for (std::size_t j = 0; j < first_art; ++j)
        if (!Traits::is_zero(tab.at(r, j))) {
          c = j;
          break;
        }
      if (c == first_art) tab.erase_row(r);
      else tab.pivot(r, c);
    }
    for (std::size_t j = first_art; j < cols; ++j) allowed[j] = false;
  }

  std::vector<Scalar> cost(cols, Scalar(0));
  for (std::size_t j = 0; j < n; ++j) {
    cost[j] = lp.objective[j];
    if (lp.free_var[j]) cost[neg_col[j]] = -lp.objective[j];
  }
  tab.load_objective(cost);
  if (!tab.optimize(allowed)) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  std::vector<Scalar> full(cols, Scalar(0));
  for (std::size_t r = 0; r < tab.rows(); ++r) full[tab.basis()[r]] = tab.rhs(r);
  out.x.assign(n, Scalar(0));
  for (std::size_t j = 0; j < n; ++j) {
    out.x[j] = full[j];
    if (lp.free_var[j]) out.x[j] -= full[neg_col[j]];
  }
  out.value = tab.value();
  out.status = LpStatus::Optimal;
  return out;
}

}  // namespace bwg
