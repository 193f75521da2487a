#pragma once

// Exact best responses and on-path values against finite-memory profiles,
// plus seeded Monte Carlo simulation and blame-rate estimation.
//
// Against a finite-memory profile of the opponents, player i faces a finite
// MDP whose states are machine states: the opponents' behaviour depends on
// the history only through the machine state, and every supported objective
// is a tail function of the realized profiles. An optimal strategy of that
// MDP (stationary deterministic over machine states) is therefore optimal
// among all behaviour strategies of player i, so no deviation needs memory
// beyond the machine state.

#include "bwg/concurrent.hpp"
#include "bwg/machine.hpp"
#include "bwg/mdp.hpp"

#include <boost/math/distributions/binomial.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace bwg {

/// Decision process of player i against the other players' outputs.
/// Action k of every state is own action k; outcomes with zero probability
/// are dropped.
inline Mdp best_response_mdp(const GameSpec& game, const FiniteMemoryProfile& machine, Player i) {
  const auto& space = game.space;
  Mdp mdp;
  mdp.actions.resize(machine.num_states);
  for (StateId s = 0; s < machine.num_states; ++s) {
    const auto& out = machine.output[s];
    for (std::size_t own = 0; own < space.num_actions(i); ++own) {
      MdpAction act;
      act.label = own;
      for (std::size_t k = 0; k < space.others_count(i); ++k) {
        ProfileIndex a = space.join(i, own, k);
        Rational p = 1;
        for (Player j = 0; j < game.num_players() && sgn(p) != 0; ++j)
          if (j != i) p *= out[j].prob[space.action(a, j)];
        if (sgn(p) == 0) continue;
        act.outcomes.push_back({p, machine.step(s, a), a});
      }
      mdp.actions[s].push_back(std::move(act));
    }
  }
  return mdp;
}

/// The Markov chain induced when every player follows the machine, as a
/// one-action MDP.
inline Mdp on_path_chain(const GameSpec& game, const FiniteMemoryProfile& machine) {
  Mdp mdp;
  mdp.actions.resize(machine.num_states);
  for (StateId s = 0; s < machine.num_states; ++s) {
    MdpAction act;
    for (ProfileIndex a = 0; a < game.num_profiles(); ++a) {
      Rational p = profile_probability(game.space, machine.output[s], a);
      if (sgn(p) != 0) act.outcomes.push_back({p, machine.step(s, a), a});
    }
    mdp.actions[s].push_back(std::move(act));
  }
  return mdp;
}

inline void require_verifiable(const GameSpec& game, Player i) {
  auto k = game.objectives.at(i).kind;
  if (k == ObjectiveKind::LimsupWeight)
    throw UnsupportedObjective("exact verification of limsup-weight objectives is not supported (player '" +
                               game.players[i] + "')");
  if (k == ObjectiveKind::Parity) {
    std::uint32_t base = 0, top = 0;
    compress_priorities(game.objectives[i].colors, &base, &top);
    if (top - base + 1 > 3) throw UnsupportedObjective("parity with more than 3 priority levels");
  }
}

/// Values of player i's optimal deviation from every machine state.
inline std::vector<Rational> best_response_values(const GameSpec& game, const FiniteMemoryProfile& machine,
                                                  Player i) {
  require_verifiable(game, i);
  Mdp mdp = best_response_mdp(game, machine, i);
  const auto& obj = game.objectives[i];
  if (is_mean_payoff(obj.kind)) return optimal_mean_payoff(mdp, obj.weights).gain;
  return optimal_color_value(mdp, obj);
}

inline Rational best_response_value(const GameSpec& game, const EquilibriumMachine& m, Player i) {
  return best_response_values(game, m.machine, i)[m.machine.initial];
}

/// Player i's expected payoff from every machine state when all comply.
inline std::vector<Rational> on_path_values(const GameSpec& game, const FiniteMemoryProfile& machine, Player i) {
  require_verifiable(game, i);
  Mdp chain = on_path_chain(game, machine);
  const auto& obj = game.objectives[i];
  if (is_mean_payoff(obj.kind)) return evaluate_policy(chain, Policy(chain.num_states(), 0), obj.weights).gain;
  // Recurrent classes of a chain are its maximal end components.
  std::vector<bool> good(chain.num_states(), false);
  for (const auto& ec : maximal_end_components(chain, full_mask(chain))) {
    std::vector<ProfileIndex> recurring;
    for (auto s : ec.states)
      for (const auto& o : chain.actions[s][0].outcomes) recurring.push_back(o.profile);
    if (obj.accepts_recurring(recurring))
      for (auto s : ec.states) good[s] = true;
  }
  return max_reachability(chain, good);
}

inline Rational on_path_value(const GameSpec& game, const EquilibriumMachine& m, Player i) {
  return on_path_values(game, m.machine, i)[m.machine.initial];
}

// ---------------------------------------------------------------------------
// Simulation

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream for run `k` of a seeded experiment.
inline std::mt19937_64 run_rng(std::uint64_t seed, std::uint64_t k) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(k + 1)));
}

inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Cumulative double tables for fast sampling from a machine's outputs.
class ProfileSampler {
 public:
  ProfileSampler(const GameSpec& game, const FiniteMemoryProfile& machine) : game_(&game) {
    cdf_.resize(machine.num_states);
    for (StateId s = 0; s < machine.num_states; ++s)
      for (const auto& x : machine.output[s]) cdf_[s].push_back(make_cdf(x));
  }

  static std::vector<double> make_cdf(const MixedAction& x) {
    std::vector<double> c;
    double acc = 0;
    for (const auto& q : x.prob) c.push_back(acc += to_double(q));
    c.back() = 1.0;
    return c;
  }

  static std::size_t draw(const std::vector<double>& cdf, std::mt19937_64& rng) {
    double u = uniform01(rng);
    std::size_t a = 0;
    while (a + 1 < cdf.size() && u >= cdf[a]) ++a;
    return a;
  }

  std::size_t draw(StateId s, Player i, std::mt19937_64& rng) const { return draw(cdf_[s][i], rng); }

 private:
  const GameSpec* game_;
  std::vector<std::vector<std::vector<double>>> cdf_;
};

struct SimulationOptions {
  std::size_t horizon = 1000;
  std::size_t runs = 100;
  std::uint64_t seed = 1;
  std::size_t trajectory_stride = 0;  // record running averages every k stages (0: never)
  bool keep_histories = false;
};

/// Optional unilateral deviation: `deviator` plays the output of `strategy`
/// (a machine over the same profiles) instead of the equilibrium machine.
struct Deviation {
  Player deviator = 0;
  const FiniteMemoryProfile* strategy = nullptr;
};

struct RunRecord {
  std::vector<double> final_average;
  std::vector<std::vector<double>> trajectory;  // [sample][player]
  std::vector<ProfileIndex> history;
  bool triggered = false;
  std::size_t trigger_stage = 0;
  Player blamed = 0;
};

struct SimulationStats {
  std::size_t horizon = 0;
  std::vector<RunRecord> runs;
  std::vector<double> mean_average;    // per player, over runs
  std::vector<double> stddev_average;  // per player, over runs
  double trigger_rate = 0.0;
};

inline RunRecord simulate_run(const GameSpec& game, const EquilibriumMachine& m, const ProfileSampler& sampler,
                              const MonitorSpec* monitor, const std::optional<Deviation>& deviation,
                              std::size_t horizon, std::mt19937_64& rng, const SimulationOptions& opt) {
  const std::size_t n = game.num_players();
  RunRecord rec;
  std::vector<double> sums(n, 0.0);
  StateId s = m.machine.initial;
  StateId dev_state = deviation ? deviation->strategy->initial : 0;
  std::optional<MonitorRuntime> mon;
  if (monitor) mon.emplace(game, *monitor);
  std::vector<std::vector<double>> dev_cdf;
  if (deviation)
    for (const auto& out : deviation->strategy->output) dev_cdf.push_back(ProfileSampler::make_cdf(out[deviation->deviator]));
  std::vector<std::vector<double>> weight(n);
  for (Player i = 0; i < n; ++i)
    if (game.objectives[i].uses_weights())
      for (const auto& w : game.objectives[i].weights) weight[i].push_back(to_double(w));
  std::vector<std::size_t> acts(n);
  for (std::size_t t = 0; t < horizon; ++t) {
    for (Player i = 0; i < n; ++i) acts[i] = sampler.draw(s, i, rng);
    if (deviation) acts[deviation->deviator] = ProfileSampler::draw(dev_cdf[dev_state], rng);
    ProfileIndex a = game.space.encode(acts);
    for (Player i = 0; i < n; ++i)
      if (!weight[i].empty()) sums[i] += weight[i][a];
    if (opt.keep_histories) rec.history.push_back(a);
    bool fired = mon && mon->observe(m.machine.output[s], a);
    StateId next = m.machine.step(s, a);
    if (fired) {
      rec.triggered = true;
      rec.trigger_stage = t + 1;
      rec.blamed = mon->blamed();
      if (auto p = m.punishment_state(rec.blamed)) next = *p;
    }
    s = next;
    if (deviation) dev_state = deviation->strategy->step(dev_state, a);
    if (opt.trajectory_stride && (t + 1) % opt.trajectory_stride == 0) {
      std::vector<double> avg(n);
      for (Player i = 0; i < n; ++i) avg[i] = sums[i] / static_cast<double>(t + 1);
      rec.trajectory.push_back(std::move(avg));
    }
  }
  rec.final_average.resize(n);
  for (Player i = 0; i < n; ++i) rec.final_average[i] = sums[i] / static_cast<double>(horizon);
  return rec;
}

/// Seeded Monte Carlo runs; run k uses its own stream, so results do not
/// depend on execution order.
inline SimulationStats simulate(const GameSpec& game, const EquilibriumMachine& m, const SimulationOptions& opt,
                                const MonitorSpec* monitor = nullptr,
                                const std::optional<Deviation>& deviation = std::nullopt) {
  if (opt.horizon == 0 || opt.runs == 0) throw std::invalid_argument("simulate needs horizon >= 1 and runs >= 1");
  const std::size_t n = game.num_players();
  ProfileSampler sampler(game, m.machine);
  SimulationStats st;
  st.horizon = opt.horizon;
  std::size_t triggers = 0;
  for (std::size_t k = 0; k < opt.runs; ++k) {
    auto rng = run_rng(opt.seed, k);
    st.runs.push_back(simulate_run(game, m, sampler, monitor, deviation, opt.horizon, rng, opt));
    triggers += st.runs.back().triggered;
  }
  st.mean_average.assign(n, 0.0);
  st.stddev_average.assign(n, 0.0);
  for (Player i = 0; i < n; ++i) {
    for (const auto& r : st.runs) st.mean_average[i] += r.final_average[i];
    st.mean_average[i] /= static_cast<double>(opt.runs);
    for (const auto& r : st.runs) st.stddev_average[i] += std::pow(r.final_average[i] - st.mean_average[i], 2);
    st.stddev_average[i] = opt.runs > 1 ? std::sqrt(st.stddev_average[i] / static_cast<double>(opt.runs - 1)) : 0.0;
  }
  st.trigger_rate = static_cast<double>(triggers) / static_cast<double>(opt.runs);
  return st;
}

/// Two-sided Clopper-Pearson interval for k successes out of n.
struct BinomialInterval {
  double low = 0.0, high = 1.0;
};

inline BinomialInterval clopper_pearson(std::size_t k, std::size_t n, double confidence = 0.95) {
  using boost::math::binomial_distribution;
  double alpha = (1.0 - confidence) / 2.0;
  BinomialInterval ci;
  ci.low = binomial_distribution<>::find_lower_bound_on_p(static_cast<double>(n), static_cast<double>(k), alpha);
  ci.high = binomial_distribution<>::find_upper_bound_on_p(static_cast<double>(n), static_cast<double>(k), alpha);
  return ci;
}

/// 2·sqrt((|I|-1)·δ): the misidentification bound for blame functions.
inline double blame_bound(std::size_t num_players, double delta) {
  return 2.0 * std::sqrt(static_cast<double>(num_players - 1) * delta);
}

struct BlameEstimate {
  std::size_t runs = 0;
  std::size_t triggers = 0;
  std::size_t misblamed = 0;  // trigger fired and blamed someone else
  double rate = 0.0;
  BinomialInterval ci;
  double bound = 0.0;
  bool below_bound = false;  // upper confidence limit < bound
};

/// Empirical P(trigger and blame != deviator) with a 95% interval.
inline BlameEstimate blame_error_rate(const GameSpec& game, const EquilibriumMachine& monitored,
                                      const MonitorSpec& monitor, Player deviator,
                                      const FiniteMemoryProfile& deviation, std::size_t runs, std::size_t horizon,
                                      std::uint64_t seed) {
  deviation.validate(game);
  SimulationOptions opt;
  opt.runs = runs;
  opt.horizon = horizon;
  opt.seed = seed;
  auto st = simulate(game, monitored, opt, &monitor, Deviation{deviator, &deviation});
  BlameEstimate e;
  e.runs = runs;
  for (const auto& r : st.runs) {
    e.triggers += r.triggered;
    e.misblamed += r.triggered && r.blamed != deviator;
  }
  e.rate = static_cast<double>(e.misblamed) / static_cast<double>(runs);
  e.ci = clopper_pearson(e.misblamed, runs);
  e.bound = blame_bound(game.num_players(), monitor.delta);
  e.below_bound = e.ci.high < e.bound;
  return e;
}

}  // namespace bwg
