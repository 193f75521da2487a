#pragma once

// Punishment (minmax) levels of the repeated game for each supported
// objective class, with stationary punishment profiles that realize them.
// Minmax values of tail objectives do not depend on the history, so nothing
// here takes a history argument.

#include "bwg/concurrent.hpp"
#include "bwg/oneshot.hpp"
#include "bwg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bwg {

enum class ThreatMethod { OneshotLp, BuchiFixpoint, CobuchiFixpoint, ParityReduction, MonteCarloEstimate, Override };

inline const char* to_string(ThreatMethod m) {
  switch (m) {
    case ThreatMethod::OneshotLp: return "oneshot-lp";
    case ThreatMethod::BuchiFixpoint: return "buchi-fixpoint";
    case ThreatMethod::CobuchiFixpoint: return "cobuchi-fixpoint";
    case ThreatMethod::ParityReduction: return "parity-reduction";
    case ThreatMethod::MonteCarloEstimate: return "monte-carlo-estimate";
    case ThreatMethod::Override: return "override";
  }
  return "?";
}

struct PlayerThreat {
  Player player = 0;
  /// Threat level when the punishers may correlate (a lower bound on the
  /// independent minmax). Exact for the one-shot LP; fixpoint values are
  /// converted from double.
  Rational correlated = 0;
  /// Exact best-response value of the player against `punishment`.
  Rational independent = 0;
  /// Stationary punishment; entry `player` is uniform and unused.
  MixedProfile punishment;
  ThreatMethod method = ThreatMethod::OneshotLp;
  double error_bound = 0.0;
  bool converged = true;
  bool monotone = true;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  std::size_t iterations = 0;

  /// True when the value comes from estimation rather than a solver.
  bool is_estimate() const { return method == ThreatMethod::MonteCarloEstimate; }
};

struct PunishmentReport {
  std::vector<PlayerThreat> players;
};

struct ThreatOptions {
  double tol = 1e-6;
  std::size_t max_iter = 10000;
  std::uint64_t seed = 1;
  IndependentMinmaxOptions independent{};
  std::size_t mc_runs = 200;
  std::size_t mc_horizon = 2000;
};

class ObjectiveMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mean-payoff punishment: the one-shot minmax of the stage weights.
inline PlayerThreat punish_meanpayoff(const GameSpec& game, Player i, const ThreatOptions& opt = {}) {
  if (!is_mean_payoff(game.objectives.at(i).kind))
    throw ObjectiveMismatch("player '" + game.players[i] + "' does not have a mean-payoff objective");
  auto tensor = stage_tensor(game, i);
  auto corr = correlated_minmax(game.space, tensor, i);
  auto opts = opt.independent;
  opts.seed = opt.seed ^ (0x9e37ULL * (i + 1));
  auto ind = independent_minmax(game.space, tensor, i, opts);
  PlayerThreat t;
  t.player = i;
  t.correlated = corr.value;
  t.independent = ind.value;
  t.punishment = ind.opponents;
  t.method = ThreatMethod::OneshotLp;
  t.error_bound = ind.exact ? 0.0 : opts.tol;
  t.converged = ind.converged;
  t.bracket_lo = to_double(corr.value);
  t.bracket_hi = to_double(ind.value);
  return t;
}

namespace detail {

// Stationary product punishment for a color objective: uniform play on each
// opponent's support, supports searched exhaustively (by total size, then
// lexicographically) when the product space is small, otherwise among pure
// profiles and the fully uniform one. Returns (exact BR value, profile).
inline std::pair<Rational, MixedProfile> best_stationary_color_punishment(const GameSpec& game, Player i) {
  const auto& space = game.space;
  const std::size_t n = game.num_players();
  std::vector<std::vector<std::uint32_t>> masks(n);
  std::size_t total = 1;
  for (Player j = 0; j < n; ++j) {
    if (j == i) {
      masks[j] = {(1u << space.num_actions(j)) - 1};
      continue;
    }
    masks[j] = supports_by_size(space.num_actions(j));
    total *= masks[j].size();
  }
  std::vector<std::vector<std::uint32_t>> candidates;
  if (total <= 4096) {
    std::vector<std::size_t> idx(n, 0);
    for (std::size_t c = 0; c < total; ++c) {
      std::vector<std::uint32_t> pick(n);
      for (Player j = 0; j < n; ++j) pick[j] = masks[j][idx[j]];
      candidates.push_back(pick);
      for (std::size_t j = n; j-- > 0;) {
        if (++idx[j] < masks[j].size()) break;
        idx[j] = 0;
      }
    }
    auto size_of = [](const std::vector<std::uint32_t>& v) {
      std::size_t s = 0;
      for (auto m : v) s += static_cast<std::size_t>(__builtin_popcount(m));
      return s;
    };
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](const auto& a, const auto& b) { return size_of(a) < size_of(b); });
  } else {
    for (std::size_t k = 0; k < space.others_count(i); ++k) {
      ProfileIndex a = space.join(i, 0, k);
      std::vector<std::uint32_t> pick(n);
      for (Player j = 0; j < n; ++j) pick[j] = j == i ? masks[i][0] : 1u << space.action(a, j);
      candidates.push_back(pick);
    }
    std::vector<std::uint32_t> full(n);
    for (Player j = 0; j < n; ++j) full[j] = (1u << space.num_actions(j)) - 1;
    candidates.push_back(full);
  }

  std::optional<Rational> best;
  MixedProfile best_profile;
  for (const auto& pick : candidates) {
    MixedProfile x;
    for (Player j = 0; j < n; ++j) {
      auto bits = bits_of(pick[j]);
      MixedAction y{j, std::vector<Rational>(space.num_actions(j), Rational(0))};
      for (auto b : bits) y.prob[b] = Rational(1, static_cast<unsigned long>(bits.size()));
      x.push_back(std::move(y));
    }
    auto machine = FiniteMemoryProfile::constant(game, x);
    Rational v = best_response_values(game, machine, i)[0];
    if (!best || v < *best) {
      best = v;
      best_profile = std::move(x);
      if (sgn(*best) == 0) break;
    }
  }
  return {*best, best_profile};
}

inline PlayerThreat color_threat(const GameSpec& game, Player i, const FixpointResult& fp, ThreatMethod method,
                                 const ThreatOptions& opt) {
  PlayerThreat t;
  t.player = i;
  auto [value, profile] = best_stationary_color_punishment(game, i);
  t.independent = value;
  // Simplest rational inside the fixpoint bracket (capped by the exact
  // stationary value, which the correlated threat cannot exceed).
  t.bracket_lo = fp.lower.empty() ? fp.value[0] : fp.lower[0];
  t.bracket_hi = fp.upper.empty() ? fp.value[0] : fp.upper[0];
  Rational lo = from_double(std::clamp(t.bracket_lo, 0.0, 1.0));
  Rational hi = std::min<Rational>(from_double(std::clamp(t.bracket_hi, 0.0, 1.0)), value);
  t.correlated = lo <= hi ? simplest_between(lo, hi) : from_double(fp.value[0]);
  t.punishment = std::move(profile);
  t.method = method;
  t.error_bound = opt.tol;
  t.converged = fp.converged;
  t.monotone = fp.monotone;
  t.iterations = fp.predecessor_calls;
  return t;
}

}  // namespace detail

/// Büchi punishment: value of the concurrent Büchi game against the
/// correlated coalition by nested value iteration, plus the best stationary
/// product punishment found by exact support search.
inline PlayerThreat punish_buchi(const GameSpec& game, Player i, const ThreatOptions& opt = {},
                                 FixpointResult* trace = nullptr) {
  if (game.objectives.at(i).kind != ObjectiveKind::Buchi)
    throw ObjectiveMismatch("player '" + game.players[i] + "' does not have a Buchi objective");
  auto fp = solve_concurrent_buchi(repeated_game_arena(game, i), {opt.tol, opt.max_iter});
  if (trace) *trace = fp;
  return detail::color_threat(game, i, fp, ThreatMethod::BuchiFixpoint, opt);
}

/// Co-Büchi by the dual fixpoint; parity with at most three priority levels
/// by the alternating nesting. More levels raise UnsupportedObjective.
inline PlayerThreat punish_cobuchi_parity(const GameSpec& game, Player i, const ThreatOptions& opt = {},
                                          FixpointResult* trace = nullptr) {
  auto kind = game.objectives.at(i).kind;
  if (kind != ObjectiveKind::CoBuchi && kind != ObjectiveKind::Parity)
    throw ObjectiveMismatch("player '" + game.players[i] + "' has neither a co-Buchi nor a parity objective");
  auto arena = repeated_game_arena(game, i);
  auto fp = kind == ObjectiveKind::CoBuchi ? solve_concurrent_cobuchi(std::move(arena), {opt.tol, opt.max_iter})
                                           : solve_concurrent_parity(std::move(arena), {opt.tol, opt.max_iter});
  if (trace) *trace = fp;
  return detail::color_threat(game, i, fp,
                              kind == ObjectiveKind::CoBuchi ? ThreatMethod::CobuchiFixpoint
                                                             : ThreatMethod::ParityReduction,
                              opt);
}

/// Monte Carlo estimate of player i's punishment level, for objectives
/// without an exact solver here (limsup weights, parity with many
/// priorities). Candidate punishments are the pure opponent profiles and
/// the uniform one; against each, player i's stationary strategies (each
/// pure action and uniform play) are simulated and the second half of every
/// run scored (max weight, or parity of the least priority). The reported
/// value is the smallest estimated best response; error_bound is a Hoeffding
/// half-width at 95% for that candidate. Not a certified value.
inline PlayerThreat estimate_threat_monte_carlo(const GameSpec& game, Player i, const ThreatOptions& opt = {}) {
  const auto& space = game.space;
  const auto& obj = game.objectives.at(i);
  const std::size_t n = game.num_players();
  std::vector<MixedProfile> candidates;
  for (std::size_t k = 0; k < space.others_count(i); ++k) {
    ProfileIndex a = space.join(i, 0, k);
    MixedProfile x;
    for (Player j = 0; j < n; ++j)
      x.push_back(j == i ? MixedAction::uniform(j, space.num_actions(j))
                         : MixedAction::pure(j, space.num_actions(j), space.action(a, j)));
    candidates.push_back(std::move(x));
  }
  {
    MixedProfile x;
    for (Player j = 0; j < n; ++j) x.push_back(MixedAction::uniform(j, space.num_actions(j)));
    candidates.push_back(std::move(x));
  }
  double lo_w = 0, hi_w = 1;
  if (obj.uses_weights()) {
    lo_w = to_double(*std::min_element(obj.weights.begin(), obj.weights.end()));
    hi_w = to_double(*std::max_element(obj.weights.begin(), obj.weights.end()));
  }
  const double range = std::max(hi_w - lo_w, 1e-300);
  const double half_width = range * std::sqrt(std::log(2.0 / 0.05) / (2.0 * static_cast<double>(opt.mc_runs)));

  PlayerThreat best;
  bool have = false;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    double best_response = -std::numeric_limits<double>::infinity();
    for (std::size_t own = 0; own <= space.num_actions(i); ++own) {
      MixedProfile x = candidates[c];
      x[i] = own < space.num_actions(i) ? MixedAction::pure(i, space.num_actions(i), own)
                                        : MixedAction::uniform(i, space.num_actions(i));
      ProfileSampler sampler(game, FiniteMemoryProfile::constant(game, x));
      double total = 0;
      for (std::size_t r = 0; r < opt.mc_runs; ++r) {
        auto rng = run_rng(opt.seed ^ splitmix64(c * 131 + own), r);
        double stat = obj.uses_weights() ? -std::numeric_limits<double>::infinity() : 0.0;
        std::uint32_t least = UINT32_MAX;
        std::vector<std::size_t> acts(n);
        for (std::size_t t = 0; t < opt.mc_horizon; ++t) {
          for (Player j = 0; j < n; ++j) acts[j] = sampler.draw(0, j, rng);
          ProfileIndex a = space.encode(acts);
          if (t < opt.mc_horizon / 2) continue;
          if (obj.uses_weights()) stat = std::max(stat, to_double(obj.weights[a]));
          else least = std::min(least, obj.colors[a]);
        }
        if (!obj.uses_weights()) stat = least % 2 == 0 ? 1.0 : 0.0;
        total += stat;
      }
      best_response = std::max(best_response, total / static_cast<double>(opt.mc_runs));
    }
    if (!have || from_double(best_response) < best.independent) {
      have = true;
      best.player = i;
      best.independent = from_double(best_response);
      best.correlated = best.independent;
      best.punishment = candidates[c];
    }
  }
  best.method = ThreatMethod::MonteCarloEstimate;
  best.error_bound = half_width;
  best.converged = true;
  best.bracket_lo = to_double(best.independent) - half_width;
  best.bracket_hi = to_double(best.independent) + half_width;
  return best;
}

/// Dispatches on each player's objective. Limsup-weight players and parity
/// conditions beyond three levels fall back to the Monte Carlo estimate.
inline PunishmentReport compute_threats(const GameSpec& game, const ThreatOptions& opt = {}) {
  PunishmentReport report;
  for (Player i = 0; i < game.num_players(); ++i) {
    switch (game.objectives[i].kind) {
      case ObjectiveKind::MeanPayoffLimsup:
      case ObjectiveKind::MeanPayoffLiminf:
        report.players.push_back(punish_meanpayoff(game, i, opt));
        break;
      case ObjectiveKind::Buchi:
        report.players.push_back(punish_buchi(game, i, opt));
        break;
      case ObjectiveKind::CoBuchi:
      case ObjectiveKind::Parity:
        try {
          report.players.push_back(punish_cobuchi_parity(game, i, opt));
        } catch (const UnsupportedObjective&) {
          report.players.push_back(estimate_threat_monte_carlo(game, i, opt));
        }
        break;
      case ObjectiveKind::LimsupWeight:
        report.players.push_back(estimate_threat_monte_carlo(game, i, opt));
        break;
    }
  }
  return report;
}

/// Replaces player i's threat by a user-supplied value; the punishment
/// profile already in the report is kept.
inline void override_threat(PunishmentReport& report, Player i, const Rational& value) {
  auto& t = report.players.at(i);
  t.correlated = value;
  t.independent = value;
  t.method = ThreatMethod::Override;
  t.error_bound = 0.0;
  t.bracket_lo = t.bracket_hi = to_double(value);
}

}  // namespace bwg
