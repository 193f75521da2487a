#pragma once

// Quantitative nested fixpoints for concurrent two-sided games with
// edge-colored parity conditions (Büchi and co-Büchi as special cases).
// The maximizer picks a row, the coalition a column; the one-step
// predecessor at each state is the value of a matrix game solved by LP.

#include "bwg/oneshot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace bwg {

struct ConcurrentArena {
  struct State {
    std::size_t rows = 1, cols = 1;
    std::vector<StateId> next;             // [row * cols + col]
    std::vector<std::uint32_t> priority;   // [row * cols + col], min-even parity
  };
  std::vector<State> states;

  std::size_t num_states() const { return states.size(); }
};

class UnsupportedObjective : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FixpointOptions {
  double tol = 1e-6;
  std::size_t max_iter = 10000;
  std::size_t max_levels = 3;
};

/// One recorded update of the outermost fixpoint variable.
struct FixpointStep {
  std::size_t level = 0;
  std::vector<double> values;
};

struct FixpointResult {
  std::vector<double> value;
  std::vector<double> lower, upper;  // bracket from the last two outer iterates
  bool converged = true;
  bool monotone = true;  // every iterate moved in its fixpoint's direction
  std::size_t predecessor_calls = 0;
  std::vector<FixpointStep> outer_trace;
};

/// Maps raw priorities to consecutive levels starting at 0 or 1 while
/// preserving order and parity; equal-parity neighbours merge.
inline std::vector<std::uint32_t> compress_priorities(const std::vector<std::uint32_t>& raw, std::uint32_t* base,
                                                      std::uint32_t* top) {
  std::vector<std::uint32_t> distinct(raw);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.empty()) throw std::invalid_argument("no priorities");
  std::vector<std::uint32_t> level(distinct.size());
  level[0] = distinct[0] % 2;
  for (std::size_t k = 1; k < distinct.size(); ++k)
    level[k] = level[k - 1] + ((distinct[k] % 2) != (distinct[k - 1] % 2) ? 1 : 0);
  std::vector<std::uint32_t> out(raw.size());
  for (std::size_t a = 0; a < raw.size(); ++a)
    out[a] = level[static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), raw[a]) -
                                            distinct.begin())];
  *base = level.front();
  *top = level.back();
  return out;
}

namespace detail {

class ParityFixpoint {
 public:
  ParityFixpoint(const ConcurrentArena& arena, const FixpointOptions& opt, std::uint32_t base, std::uint32_t top)
      : arena_(arena), opt_(opt), base_(base), top_(top),
        z_(top + 1, std::vector<double>(arena.num_states(), 0.0)) {}

  FixpointResult run() {
    result_.value = solve(base_);
    return std::move(result_);
  }

 private:
  static constexpr double slack = 1e-12;

  std::vector<double> predecessor() {
    ++result_.predecessor_calls;
    std::vector<double> out(arena_.num_states());
    for (StateId s = 0; s < arena_.num_states(); ++s) {
      const auto& st = arena_.states[s];
      std::vector<std::vector<double>> m(st.rows, std::vector<double>(st.cols));
      for (std::size_t r = 0; r < st.rows; ++r)
        for (std::size_t c = 0; c < st.cols; ++c) {
          std::size_t e = r * st.cols + c;
          m[r][c] = z_[st.priority[e]][st.next[e]];
        }
      out[s] = std::clamp(maxmin_lp(m).first, 0.0, 1.0);
    }
    return out;
  }

  // Greatest fixpoint for even levels, least for odd ones.
  std::vector<double> solve(std::uint32_t level) {
    const bool greatest = level % 2 == 0;
    auto& z = z_[level];
    std::fill(z.begin(), z.end(), greatest ? 1.0 : 0.0);
    std::vector<double> previous = z;
    for (std::size_t iter = 0;; ++iter) {
      auto next = level == top_ ? predecessor() : solve(level + 1);
      double diff = 0;
      for (std::size_t s = 0; s < z.size(); ++s) {
        diff = std::max(diff, std::abs(next[s] - z[s]));
        if (greatest ? next[s] > z[s] + slack : next[s] < z[s] - slack) result_.monotone = false;
      }
      previous = z;
      z = next;
      if (level == base_) result_.outer_trace.push_back({level, z});
      if (diff < opt_.tol) break;
      if (iter + 1 >= opt_.max_iter) {
        result_.converged = false;
        break;
      }
    }
    if (level == base_) {
      result_.lower.resize(z.size());
      result_.upper.resize(z.size());
      for (std::size_t s = 0; s < z.size(); ++s) {
        result_.lower[s] = std::min(previous[s], z[s]);
        result_.upper[s] = std::max(previous[s], z[s]);
      }
    }
    return z;
  }

  const ConcurrentArena& arena_;
  FixpointOptions opt_;
  std::uint32_t base_, top_;
  std::vector<std::vector<double>> z_;
  FixpointResult result_;
};

}  // namespace detail

/// Maximizer's value of the min-even parity condition on edge priorities.
/// Priorities are compressed first; more than `max_levels` levels is
/// rejected with UnsupportedObjective.
inline FixpointResult solve_concurrent_parity(ConcurrentArena arena, const FixpointOptions& opt = {}) {
  if (!(opt.tol > 0)) throw std::invalid_argument("fixpoint tolerance must be positive");
  std::vector<std::uint32_t> all;
  for (const auto& st : arena.states) {
    if (st.next.size() != st.rows * st.cols || st.priority.size() != st.rows * st.cols)
      throw std::invalid_argument("arena state tables have wrong size");
    all.insert(all.end(), st.priority.begin(), st.priority.end());
  }
  std::uint32_t base = 0, top = 0;
  auto levels = compress_priorities(all, &base, &top);
  if (top - base + 1 > opt.max_levels)
    throw UnsupportedObjective("parity condition with " + std::to_string(top - base + 1) +
                               " priority levels is not supported");
  std::size_t k = 0;
  for (auto& st : arena.states)
    for (auto& p : st.priority) p = levels[k++];
  return detail::ParityFixpoint(arena, opt, base, top).run();
}

/// νY.μX. Pre(target → Y, otherwise X).
inline FixpointResult solve_concurrent_buchi(ConcurrentArena arena, const FixpointOptions& opt = {}) {
  for (auto& st : arena.states)
    for (auto& p : st.priority) p = p != 0 ? 0 : 1;
  return solve_concurrent_parity(std::move(arena), opt);
}

/// μY.νX. Pre(avoid → Y, otherwise X).
inline FixpointResult solve_concurrent_cobuchi(ConcurrentArena arena, const FixpointOptions& opt = {}) {
  for (auto& st : arena.states)
    for (auto& p : st.priority) p = p != 0 ? 1 : 2;
  return solve_concurrent_parity(std::move(arena), opt);
}

/// The repeated game seen by player i against the correlated coalition of
/// the others: a single state, rows A_i, columns A_{-i}, edge colors taken
/// from player i's objective.
inline ConcurrentArena repeated_game_arena(const GameSpec& game, Player i) {
  const auto& space = game.space;
  ConcurrentArena arena;
  ConcurrentArena::State st;
  st.rows = space.num_actions(i);
  st.cols = space.others_count(i);
  st.next.assign(st.rows * st.cols, 0);
  st.priority.resize(st.rows * st.cols);
  for (std::size_t r = 0; r < st.rows; ++r)
    for (std::size_t c = 0; c < st.cols; ++c) st.priority[r * st.cols + c] = game.objectives[i].colors.at(space.join(i, r, c));
  arena.states.push_back(std::move(st));
  return arena;
}

}  // namespace bwg
