#pragma once

// Finite one-shot games: product expectations, correlated and independent
// minmax of a designated player, and Nash equilibria by support enumeration.

#include "bwg/game_model.hpp"
#include "bwg/linalg.hpp"
#include "bwg/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace bwg {

/// Payoff of one designated player for every action profile.
struct PayoffTensor {
  Player player = 0;
  std::vector<Rational> values;  // indexed by ProfileIndex
};

inline PayoffTensor stage_tensor(const GameSpec& game, Player i) {
  const auto& obj = game.objectives.at(i);
  if (!obj.uses_weights()) throw GameSpecError("player '" + game.players[i] + "' has no stage weights");
  return PayoffTensor{i, obj.weights};
}

/// Indicator tensor of the profiles carrying a nonzero color for player i.
inline PayoffTensor color_indicator_tensor(const GameSpec& game, Player i) {
  const auto& obj = game.objectives.at(i);
  PayoffTensor t{i, std::vector<Rational>(game.num_profiles(), Rational(0))};
  for (ProfileIndex a = 0; a < game.num_profiles(); ++a) t.values[a] = obj.colors.at(a) != 0 ? 1 : 0;
  return t;
}

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void check_profile_shape(const ProfileSpace& space, const MixedProfile& x) {
  if (x.size() != space.num_players()) throw DimensionMismatch("profile has wrong number of players");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i].prob.size() != space.num_actions(i))
      throw DimensionMismatch("mixed action of player " + std::to_string(i) + " has wrong size");
}

/// Σ_a Π_j x_j(a_j) · tensor(a), exact.
inline Rational product_expectation(const ProfileSpace& space, const PayoffTensor& tensor, const MixedProfile& x) {
  if (tensor.values.size() != space.count()) throw DimensionMismatch("tensor does not cover the profile space");
  check_profile_shape(space, x);
  Rational total = 0;
  for (ProfileIndex a = 0; a < space.count(); ++a) {
    if (sgn(tensor.values[a]) == 0) continue;
    Rational p = profile_probability(space, x, a);
    if (sgn(p) != 0) total += p * tensor.values[a];
  }
  return total;
}

/// Player i's payoff from each own pure action against x_{-i}.
inline std::vector<Rational> pure_action_payoffs(const ProfileSpace& space, const PayoffTensor& tensor,
                                                 const MixedProfile& x, Player i) {
  std::vector<Rational> out(space.num_actions(i), Rational(0));
  for (ProfileIndex a = 0; a < space.count(); ++a) {
    Rational p = 1;
    for (std::size_t j = 0; j < x.size() && sgn(p) != 0; ++j)
      if (j != i) p *= x[j].prob[space.action(a, j)];
    if (sgn(p) != 0) out[space.action(a, i)] += p * tensor.values[a];
  }
  return out;
}

/// Largest amount any player gains by a pure unilateral deviation from x.
inline Rational max_pure_deviation_gain(const ProfileSpace& space, const std::vector<PayoffTensor>& tensors,
                                        const MixedProfile& x) {
  Rational worst = 0;
  for (Player i = 0; i < tensors.size(); ++i) {
    auto payoffs = pure_action_payoffs(space, tensors[i], x, i);
    Rational current = 0;
    for (std::size_t a = 0; a < payoffs.size(); ++a) current += x[i].prob[a] * payoffs[a];
    for (const auto& v : payoffs) worst = std::max<Rational>(worst, v - current);
  }
  return worst;
}

enum class MinmaxMode { Correlated, Independent };

struct OneShotMinmaxResult {
  MinmaxMode mode = MinmaxMode::Correlated;
  Rational value = 0;  // exact value certified by `coalition` / `opponents`
  bool exact = true;   // true when `value` is the exact optimum
  /// Correlated distribution over the joint actions of i's opponents, in
  /// ProfileSpace::join order. Filled in correlated mode.
  std::vector<Rational> coalition;
  /// Product strategy (entry i is uniform and meaningless). Filled in
  /// independent mode and in correlated mode when there is one opponent.
  MixedProfile opponents;
  double tolerance = 0.0;
  bool converged = true;
};

namespace detail {

// min over q in Δ(cols) of max over rows of (q · M[row]); returns (value, q).
template <class Scalar>
std::pair<Scalar, std::vector<Scalar>> minmax_lp(const std::vector<std::vector<Scalar>>& m) {
  const std::size_t rows = m.size(), cols = m.front().size();
  LinearProgram<Scalar> lp(cols + 1);
  lp.free_var[cols] = true;
  lp.objective[cols] = Scalar(-1);  // maximize -v
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<Scalar> c(cols + 1, Scalar(0));
    for (std::size_t k = 0; k < cols; ++k) c[k] = m[r][k];
    c[cols] = Scalar(-1);
    lp.add_row(std::move(c), RowSense::LessEq, Scalar(0));
  }
  std::vector<Scalar> sum(cols + 1, Scalar(1));
  sum[cols] = Scalar(0);
  lp.add_row(std::move(sum), RowSense::Equal, Scalar(1));
  auto sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal) throw std::runtime_error("matrix-game LP failed");
  std::vector<Scalar> q(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(cols));
  return {Scalar(sol.x[cols]), q};
}

// max over x in Δ(rows) of min over cols of (x · M[.][col]).
template <class Scalar>
std::pair<Scalar, std::vector<Scalar>> maxmin_lp(const std::vector<std::vector<Scalar>>& m) {
  const std::size_t rows = m.size(), cols = m.front().size();
  LinearProgram<Scalar> lp(rows + 1);
  lp.free_var[rows] = true;
  lp.objective[rows] = Scalar(1);
  for (std::size_t k = 0; k < cols; ++k) {
    std::vector<Scalar> c(rows + 1, Scalar(0));
    for (std::size_t r = 0; r < rows; ++r) c[r] = -m[r][k];
    c[rows] = Scalar(1);
    lp.add_row(std::move(c), RowSense::LessEq, Scalar(0));
  }
  std::vector<Scalar> sum(rows + 1, Scalar(1));
  sum[rows] = Scalar(0);
  lp.add_row(std::move(sum), RowSense::Equal, Scalar(1));
  auto sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal) throw std::runtime_error("matrix-game LP failed");
  std::vector<Scalar> x(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(rows));
  return {Scalar(sol.x[rows]), x};
}

inline std::vector<std::vector<Rational>> own_vs_coalition(const ProfileSpace& space, const PayoffTensor& t,
                                                            Player i) {
  std::vector<std::vector<Rational>> m(space.num_actions(i), std::vector<Rational>(space.others_count(i)));
  for (std::size_t a = 0; a < space.num_actions(i); ++a)
    for (std::size_t k = 0; k < space.others_count(i); ++k) m[a][k] = t.values[space.join(i, a, k)];
  return m;
}

}  // namespace detail

/// Matrix game in which player i (rows) faces the coalition of all other
/// players acting as one correlated player (columns), exact.
/// Returns min_q max_{a_i} E_q[tensor].
inline OneShotMinmaxResult correlated_minmax(const ProfileSpace& space, const PayoffTensor& tensor, Player i) {
  if (tensor.values.size() != space.count()) throw DimensionMismatch("tensor does not cover the profile space");
  auto m = detail::own_vs_coalition(space, tensor, i);
  auto [value, q] = detail::minmax_lp(m);
  OneShotMinmaxResult r;
  r.mode = MinmaxMode::Correlated;
  r.value = value;
  r.coalition = q;
  if (space.num_players() == 2) {
    Player j = 1 - i;
    r.opponents = {MixedAction::uniform(0, space.num_actions(0)), MixedAction::uniform(1, space.num_actions(1))};
    r.opponents[j].prob = q;
  }
  return r;
}

/// max over x_i of min over opponents' joint actions; equals the correlated
/// minmax by LP duality.
inline Rational correlated_maxmin(const ProfileSpace& space, const PayoffTensor& tensor, Player i) {
  return detail::maxmin_lp(detail::own_vs_coalition(space, tensor, i)).first;
}

struct IndependentMinmaxOptions {
  double tol = 1e-9;
  std::size_t random_starts = 16;
  std::size_t max_rounds = 500;
  std::uint64_t seed = 0x5eed;
};

namespace detail {

// Best response value of i against a product of opponents' doubles.
inline double threat_of(const ProfileSpace& space, const std::vector<double>& t, Player i,
                        const std::vector<std::vector<double>>& y) {
  std::vector<double> payoff(space.num_actions(i), 0.0);
  for (ProfileIndex a = 0; a < space.count(); ++a) {
    double p = 1;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (j != i) p *= y[j][space.action(a, j)];
    payoff[space.action(a, i)] += p * t[a];
  }
  return *std::max_element(payoff.begin(), payoff.end());
}

inline Rational exact_threat(const ProfileSpace& space, const PayoffTensor& t, Player i, const MixedProfile& y) {
  auto payoffs = pure_action_payoffs(space, t, y, i);
  return *std::max_element(payoffs.begin(), payoffs.end());
}

// Short rational approximations of a double distribution, renormalized exactly.
inline MixedAction snap(Player j, const std::vector<double>& p, double width) {
  MixedAction x{j, {}};
  Rational total = 0;
  for (double v : p) {
    v = std::max(0.0, v);
    x.prob.push_back(simplest_between(from_double(std::max(0.0, v - width)), from_double(v + width)));
    total += x.prob.back();
  }
  if (sgn(total) == 0) return MixedAction::from_doubles(j, p);
  for (auto& q : x.prob) q /= total;
  return x;
}

}  // namespace detail

/// Upper approximation of min over independent opponent mixed actions of
/// max over a_i, by alternating LP best responses of single opponents with
/// multistart. The returned `value` is exact for the returned product
/// profile, hence an upper bound on the true independent minmax.
inline OneShotMinmaxResult independent_minmax(const ProfileSpace& space, const PayoffTensor& tensor, Player i,
                                              const IndependentMinmaxOptions& opt = {}) {
  if (!(opt.tol > 0)) throw std::invalid_argument("independent_minmax needs tol > 0");
  if (tensor.values.size() != space.count()) throw DimensionMismatch("tensor does not cover the profile space");
  const std::size_t n = space.num_players();
  OneShotMinmaxResult r;
  r.mode = MinmaxMode::Independent;
  r.tolerance = opt.tol;
  for (std::size_t j = 0; j < n; ++j) r.opponents.push_back(MixedAction::uniform(j, space.num_actions(j)));

  if (n == 1) {
    r.value = *std::max_element(tensor.values.begin(), tensor.values.end());
    return r;
  }
  if (n == 2) {
    auto c = correlated_minmax(space, tensor, i);
    r.value = c.value;
    r.opponents = c.opponents;
    return r;
  }

  r.exact = false;
  std::vector<double> t(tensor.values.size());
  for (std::size_t a = 0; a < t.size(); ++a) t[a] = to_double(tensor.values[a]);

  std::vector<std::vector<std::vector<double>>> starts;
  auto uniform_start = [&] {
    std::vector<std::vector<double>> y(n);
    for (std::size_t j = 0; j < n; ++j) y[j].assign(space.num_actions(j), 1.0 / static_cast<double>(space.num_actions(j)));
    return y;
  };
  starts.push_back(uniform_start());
  if (space.others_count(i) <= 64) {
    for (std::size_t k = 0; k < space.others_count(i); ++k) {
      auto y = uniform_start();
      ProfileIndex a = space.join(i, 0, k);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        std::fill(y[j].begin(), y[j].end(), 0.0);
        y[j][space.action(a, j)] = 1.0;
      }
      starts.push_back(std::move(y));
    }
  }
  std::mt19937_64 rng(opt.seed);
  std::exponential_distribution<double> expo(1.0);
  for (std::size_t s = 0; s < opt.random_starts; ++s) {
    auto y = uniform_start();
    for (std::size_t j = 0; j < n; ++j) {
      double total = 0;
      for (auto& v : y[j]) total += (v = expo(rng));
      for (auto& v : y[j]) v /= total;
    }
    starts.push_back(std::move(y));
  }

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> best_y;
  bool all_converged = true;
  for (auto y : starts) {
    double current = detail::threat_of(space, t, i, y);
    bool converged = false;
    for (std::size_t round = 0; round < opt.max_rounds; ++round) {
      double before = current;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        // Rows: own actions of i; columns: actions of j; others fixed.
        std::vector<std::vector<double>> m(space.num_actions(i), std::vector<double>(space.num_actions(j), 0.0));
        for (ProfileIndex a = 0; a < space.count(); ++a) {
          double p = 1;
          for (std::size_t k = 0; k < n; ++k)
            if (k != i && k != j) p *= y[k][space.action(a, k)];
          m[space.action(a, i)][space.action(a, j)] += p * t[a];
        }
        auto [v, q] = detail::minmax_lp(m);
        if (v < current - 1e-15) {
          for (auto& e : q) e = std::max(0.0, e);
          y[j] = q;
          current = detail::threat_of(space, t, i, y);
        }
      }
      if (before - current <= opt.tol * 1e-3) {
        converged = true;
        break;
      }
    }
    all_converged = all_converged && converged;
    if (current < best - 1e-15) {
      best = current;
      best_y = y;
    }
  }

  // Exact certification; prefer a short rational snap when it is no worse.
  MixedProfile raw = r.opponents, snapped = r.opponents;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    raw[j] = MixedAction::from_doubles(j, best_y[j]);
    snapped[j] = detail::snap(j, best_y[j], 1e-9);
  }
  Rational raw_value = detail::exact_threat(space, tensor, i, raw);
  Rational snapped_value = detail::exact_threat(space, tensor, i, snapped);
  if (snapped_value <= raw_value) {
    r.opponents = snapped;
    r.value = snapped_value;
  } else {
    r.opponents = raw;
    r.value = raw_value;
  }
  r.converged = all_converged;
  return r;
}

class NashBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NashOptions {
  std::size_t max_support_profiles = 200000;
  std::size_t newton_starts = 12;
  std::uint64_t seed = 0x4a5e;
};

namespace detail {

// All nonempty subsets of {0..k-1} as bitmasks, by size then lexicographically.
inline std::vector<std::uint32_t> supports_by_size(std::size_t k) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) out.push_back(mask);
  auto key = [](std::uint32_t m) {
    std::vector<int> bits;
    for (int b = 0; b < 32; ++b)
      if (m >> b & 1u) bits.push_back(b);
    return std::make_pair(static_cast<int>(bits.size()), bits);
  };
  std::stable_sort(out.begin(), out.end(), [&](auto a, auto b) { return key(a) < key(b); });
  return out;
}

inline std::vector<std::size_t> bits_of(std::uint32_t m) {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < 32; ++b)
    if (m >> b & 1u) out.push_back(b);
  return out;
}

// Player j's distribution on support `own` that makes player k (with pure or
// fixed opponents folded into `m`, rows = k's actions, columns = j's actions)
// indifferent over `target` and not better off elsewhere. Exact LP.
inline std::optional<std::vector<Rational>> indifference_mix(const std::vector<std::vector<Rational>>& m,
                                                             const std::vector<std::size_t>& own,
                                                             const std::vector<std::size_t>& target) {
  const std::size_t cols = m.front().size();
  LinearProgram<Rational> lp(cols + 1);
  lp.free_var[cols] = true;
  std::vector<bool> in_target(m.size(), false);
  for (auto a : target) in_target[a] = true;
  for (std::size_t a = 0; a < m.size(); ++a) {
    std::vector<Rational> c(cols + 1, Rational(0));
    for (auto b : own) c[b] = m[a][b];
    c[cols] = -1;
    lp.add_row(std::move(c), in_target[a] ? RowSense::Equal : RowSense::LessEq, Rational(0));
  }
  std::vector<Rational> sum(cols + 1, Rational(0));
  for (auto b : own) sum[b] = 1;
  lp.add_row(std::move(sum), RowSense::Equal, Rational(1));
  for (std::size_t b = 0; b < cols; ++b)
    if (std::find(own.begin(), own.end(), b) == own.end()) {
      std::vector<Rational> z(cols + 1, Rational(0));
      z[b] = 1;
      lp.add_row(std::move(z), RowSense::Equal, Rational(0));
    }
  auto sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal) return std::nullopt;
  sol.x.resize(cols);
  return sol.x;
}

// Newton's method on the support indifference system of an n-player game.
inline std::optional<MixedProfile> newton_support(const ProfileSpace& space, const std::vector<PayoffTensor>& tensors,
                                                  const std::vector<std::vector<std::size_t>>& supp,
                                                  std::size_t starts, std::mt19937_64& rng) {
  const std::size_t n = space.num_players();
  std::vector<std::vector<double>> t(n, std::vector<double>(space.count()));
  for (std::size_t i = 0; i < n; ++i)
    for (ProfileIndex a = 0; a < space.count(); ++a) t[i][a] = to_double(tensors[i].values[a]);
  // Unknown layout: for each player, probabilities on its support, then u_i.
  std::vector<std::size_t> offset(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offset[i + 1] = offset[i] + supp[i].size() + 1;
  const std::size_t dim = offset[n];

  auto unpack = [&](const std::vector<double>& z) {
    std::vector<std::vector<double>> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i].assign(space.num_actions(i), 0.0);
      for (std::size_t k = 0; k < supp[i].size(); ++k) x[i][supp[i][k]] = z[offset[i] + k];
    }
    return x;
  };
  // Expected payoff of player i for action a_i, and derivatives in x_j(b).
  auto residual = [&](const std::vector<double>& z, Matrix<double>* jac) {
    auto x = unpack(z);
    std::vector<double> f(dim, 0.0);
    if (jac) jac->assign(dim, std::vector<double>(dim, 0.0));
    std::size_t row = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < supp[i].size(); ++k, ++row) {
        std::size_t act = supp[i][k];
        for (ProfileIndex a = 0; a < space.count(); ++a) {
          if (space.action(a, i) != act) continue;
          double p = 1;
          for (std::size_t j = 0; j < n; ++j)
            if (j != i) p *= x[j][space.action(a, j)];
          f[row] += p * t[i][a];
          if (!jac) continue;
          for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            std::size_t b = space.action(a, j);
            auto it = std::find(supp[j].begin(), supp[j].end(), b);
            if (it == supp[j].end()) continue;
            double q = 1;
            for (std::size_t l = 0; l < n; ++l)
              if (l != i && l != j) q *= x[l][space.action(a, l)];
            (*jac)[row][offset[j] + static_cast<std::size_t>(it - supp[j].begin())] += q * t[i][a];
          }
        }
        f[row] -= z[offset[i + 1] - 1];
        if (jac) (*jac)[row][offset[i + 1] - 1] = -1.0;
      }
      double total = -1.0;
      for (std::size_t k = 0; k < supp[i].size(); ++k) {
        total += z[offset[i] + k];
        if (jac) (*jac)[row][offset[i] + k] = 1.0;
      }
      f[row++] = total;
    }
    return f;
  };

  std::exponential_distribution<double> expo(1.0);
  for (std::size_t s = 0; s < starts; ++s) {
    std::vector<double> z(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double total = 0;
      for (std::size_t k = 0; k < supp[i].size(); ++k) total += (z[offset[i] + k] = s == 0 ? 1.0 : expo(rng));
      for (std::size_t k = 0; k < supp[i].size(); ++k) z[offset[i] + k] /= total;
    }
    for (int iter = 0; iter < 60; ++iter) {
      Matrix<double> jac;
      auto f = residual(z, &jac);
      double norm = 0;
      for (double v : f) norm = std::max(norm, std::abs(v));
      if (norm < 1e-14) break;
      for (auto& v : f) v = -v;
      auto step = solve_linear(jac, f);
      if (!step) break;
      for (std::size_t k = 0; k < dim; ++k) z[k] += (*step)[k];
    }
    auto x = unpack(z);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (double v : x[i]) ok = ok && v > -1e-10 && std::isfinite(v);
    if (!ok) continue;
    MixedProfile prof;
    for (std::size_t i = 0; i < n; ++i) prof.push_back(MixedAction::from_doubles(i, x[i]));
    if (max_pure_deviation_gain(space, tensors, prof) <= Rational(1, 1000000000)) return prof;
  }
  return std::nullopt;
}

}  // namespace detail

/// A product profile from which no player gains more than 1e-9 by any pure
/// deviation. Supports are enumerated by total size, then lexicographically;
/// two-player games and supports with at most one mixing player are solved
/// by exact LP feasibility, larger supports by Newton's method followed by
/// an exact deviation check.
inline MixedProfile one_shot_nash(const ProfileSpace& space, const std::vector<PayoffTensor>& tensors,
                                  const NashOptions& opt = {}) {
  const std::size_t n = space.num_players();
  if (tensors.size() != n) throw DimensionMismatch("need one tensor per player");
  for (const auto& t : tensors)
    if (t.values.size() != space.count()) throw DimensionMismatch("tensor does not cover the profile space");
  for (std::size_t i = 0; i < n; ++i)
    if (space.num_actions(i) > 16) throw NashBudgetExceeded("action set too large for support enumeration");

  std::vector<std::vector<std::uint32_t>> masks(n);
  for (std::size_t i = 0; i < n; ++i) masks[i] = detail::supports_by_size(space.num_actions(i));

  // Support profiles ordered by total size, then lexicographically.
  std::vector<std::vector<std::size_t>> order;
  {
    std::size_t total = 1;
    for (auto& m : masks) {
      total *= m.size();
      if (total > opt.max_support_profiles) throw NashBudgetExceeded("support enumeration budget exhausted");
    }
    std::vector<std::size_t> idx(n, 0);
    for (std::size_t c = 0; c < total; ++c) {
      order.push_back(idx);
      for (std::size_t i = n; i-- > 0;) {
        if (++idx[i] < masks[i].size()) break;
        idx[i] = 0;
      }
    }
    auto size_of = [&](const std::vector<std::size_t>& v) {
      std::size_t s = 0;
      for (std::size_t i = 0; i < n; ++i) s += static_cast<std::size_t>(__builtin_popcount(masks[i][v[i]]));
      return s;
    };
    std::stable_sort(order.begin(), order.end(), [&](auto& a, auto& b) { return size_of(a) < size_of(b); });
  }

  std::mt19937_64 rng(opt.seed);
  for (const auto& choice : order) {
    std::vector<std::vector<std::size_t>> supp(n);
    std::size_t mixers = 0;
    for (std::size_t i = 0; i < n; ++i) {
      supp[i] = detail::bits_of(masks[i][choice[i]]);
      mixers += supp[i].size() > 1;
    }

    if (n == 1) {
      // Single player: every support action must be optimal.
      Rational best = *std::max_element(tensors[0].values.begin(), tensors[0].values.end());
      bool ok = true;
      for (auto a : supp[0]) ok = ok && tensors[0].values[a] == best;
      if (!ok) continue;
      MixedProfile x{MixedAction{0, std::vector<Rational>(space.num_actions(0), Rational(0))}};
      for (auto a : supp[0]) x[0].prob[a] = Rational(1, static_cast<unsigned long>(supp[0].size()));
      return x;
    }

    if (n == 2) {
      std::vector<std::vector<Rational>> m0(space.num_actions(0), std::vector<Rational>(space.num_actions(1)));
      std::vector<std::vector<Rational>> m1(space.num_actions(1), std::vector<Rational>(space.num_actions(0)));
      for (ProfileIndex a = 0; a < space.count(); ++a) {
        std::size_t a0 = space.action(a, 0), a1 = space.action(a, 1);
        m0[a0][a1] = tensors[0].values[a];
        m1[a1][a0] = tensors[1].values[a];
      }
      auto y = detail::indifference_mix(m0, supp[1], supp[0]);
      if (!y) continue;
      auto x = detail::indifference_mix(m1, supp[0], supp[1]);
      if (!x) continue;
      return MixedProfile{MixedAction{0, *x}, MixedAction{1, *y}};
    }

    if (mixers <= 1) {
      // Pure players fixed; at most one mixer j.
      std::size_t j = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (supp[i].size() > 1) j = i;
      MixedProfile base;
      for (std::size_t i = 0; i < n; ++i) base.push_back(MixedAction::pure(i, space.num_actions(i), supp[i][0]));
      // j must be indifferent over its support against the pure others.
      auto own = pure_action_payoffs(space, tensors[j], base, j);
      Rational top = *std::max_element(own.begin(), own.end());
      bool ok = true;
      for (auto a : supp[j]) ok = ok && own[a] == top;
      if (!ok) continue;
      // Each pure player k must best-respond to the mixture of j: linear in x_j.
      LinearProgram<Rational> lp(space.num_actions(j));
      for (std::size_t b = 0; b < space.num_actions(j); ++b)
        if (std::find(supp[j].begin(), supp[j].end(), b) == supp[j].end()) {
          std::vector<Rational> z(space.num_actions(j), Rational(0));
          z[b] = 1;
          lp.add_row(std::move(z), RowSense::Equal, Rational(0));
        }
      lp.add_row(std::vector<Rational>(space.num_actions(j), Rational(1)), RowSense::Equal, Rational(1));
      for (std::size_t k = 0; k < n; ++k) {
        if (k == j) continue;
        for (std::size_t alt = 0; alt < space.num_actions(k); ++alt) {
          if (alt == supp[k][0]) continue;
          std::vector<Rational> row(space.num_actions(j), Rational(0));
          for (std::size_t b = 0; b < space.num_actions(j); ++b) {
            ProfileIndex on = space.encode([&] {
              std::vector<std::size_t> v(n);
              for (std::size_t l = 0; l < n; ++l) v[l] = supp[l][0];
              v[j] = b;
              return v;
            }());
            row[b] = tensors[k].values[space.with_action(on, k, alt)] - tensors[k].values[on];
          }
          lp.add_row(std::move(row), RowSense::LessEq, Rational(0));
        }
      }
      auto sol = solve_lp(lp);
      if (sol.status != LpStatus::Optimal) continue;
      base[j].prob = sol.x;
      return base;
    }

    if (auto x = detail::newton_support(space, tensors, supp, opt.newton_starts, rng)) return *x;
  }
  throw NashBudgetExceeded("no equilibrium found within the support enumeration budget");
}

}  // namespace bwg
