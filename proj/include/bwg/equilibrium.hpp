#pragma once

// Constructive ε-equilibria: grim trigger along a target play, stationary
// acceptable profiles from one-shot equilibria of the stage game, and the
// monitored profile that punishes a blamed player once running averages
// leave a band around the expected payoff vector.

#include "bwg/certify.hpp"
#include "bwg/machine.hpp"
#include "bwg/oneshot.hpp"
#include "bwg/repeated.hpp"
#include "bwg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bwg {

class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No play meets every player's threat; `binding` lists the players whose
/// constraint cannot be met.
class NoFeasiblePlay : public ConstructionError {
 public:
  NoFeasiblePlay(const std::string& what, std::vector<Player> binding)
      : ConstructionError(what), binding(std::move(binding)) {}
  std::vector<Player> binding;
};

class MonteCarloBudgetExhausted : public ConstructionError {
 public:
  using ConstructionError::ConstructionError;
};

/// Right-hand side of the budget inequality
///   ε > 4δ + 4(sqrt(2(n-1)δ) + δ)·M.
inline double delta_budget(double delta, std::size_t num_players, double max_payoff_norm) {
  return 4.0 * delta +
         4.0 * (std::sqrt(2.0 * static_cast<double>(num_players - 1) * delta) + delta) * max_payoff_norm;
}

/// Largest δ (to relative precision 1e-9) for which the budget inequality
/// holds strictly. The budget is increasing in δ, so bisection on (0, ε/4].
inline double select_delta(double epsilon, std::size_t num_players, double max_payoff_norm) {
  if (!(epsilon > 0)) throw std::invalid_argument("select_delta needs epsilon > 0");
  if (num_players < 1) throw std::invalid_argument("select_delta needs at least one player");
  if (max_payoff_norm < 0) throw std::invalid_argument("payoff norm must be nonnegative");
  double lo = 0.0, hi = epsilon / 4.0;
  while (delta_budget(lo == 0.0 ? hi / 2 : lo, num_players, max_payoff_norm) >= epsilon && lo == 0.0) {
    hi /= 2.0;
    if (delta_budget(hi, num_players, max_payoff_norm) < epsilon) {
      lo = hi;
      hi *= 2.0;
    }
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-9 * lo; ++iter) {
    double mid = lo + (hi - lo) / 2.0;
    if (delta_budget(mid, num_players, max_payoff_norm) < epsilon) lo = mid;
    else hi = mid;
  }
  return lo;
}

inline double max_payoff_norm(const GameSpec& game) {
  double m = 0.0;
  for (const auto& obj : game.objectives) m = std::max(m, to_double(obj.sup_norm()));
  return m;
}

inline void require_solved_threats(const GameSpec& game, const PunishmentReport& threats) {
  if (threats.players.size() != game.num_players()) throw ConstructionError("threat report does not cover all players");
  for (const auto& t : threats.players)
    if (t.is_estimate())
      throw ConstructionError("threat of player '" + game.players[t.player] +
                              "' is only a Monte Carlo estimate; supply an override");
}

struct TargetPlayOptions {
  std::size_t max_subsets = 500000;
  std::size_t max_cycle_length = 100000;
};

namespace detail {

// Counts c_b >= 1 summing to N with c_b ~ q_b N (largest remainders).
inline std::optional<std::vector<std::size_t>> apportion(const std::vector<Rational>& q, std::size_t total) {
  const std::size_t k = q.size();
  if (total < k) return std::nullopt;
  std::vector<std::size_t> counts(k, 1);
  std::size_t left = total - k;
  std::vector<Rational> want(k);
  Rational scale(static_cast<unsigned long>(left));
  std::vector<std::pair<Rational, std::size_t>> rem;
  for (std::size_t b = 0; b < k; ++b) {
    Rational share = q[b] * scale;
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), share.get_num_mpz_t(), share.get_den_mpz_t());
    counts[b] += fl.get_ui();
    left -= fl.get_ui();
    rem.push_back({share - Rational(fl), b});
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t r = 0; r < left; ++r) ++counts[rem[r % k].second];
  return counts;
}

}  // namespace detail

/// Eventually periodic play p* with f_i(p*) > threat_i - ε for every player,
/// using each player's independent threat. Candidate sets B of profiles
/// visited infinitely often are enumerated by size, then lexicographically.
/// Color and limsup objectives are decided by B itself; for mean-payoff
/// players an LP over distributions on B maximizes the smallest slack, and
/// the distribution is rounded to a short cycle whose exact averages keep
/// every slack positive.
inline LassoPlay find_target_play(const GameSpec& game, const PunishmentReport& threats, double epsilon,
                                  const TargetPlayOptions& opt = {}) {
  if (!(epsilon > 0)) throw std::invalid_argument("find_target_play needs epsilon > 0");
  require_solved_threats(game, threats);
  const std::size_t n = game.num_players(), num_profiles = game.num_profiles();
  const Rational eps = from_double(epsilon);
  std::vector<Rational> need(n);  // payoff must strictly exceed need[i]
  std::vector<Player> averaged, set_based;
  for (Player i = 0; i < n; ++i) {
    need[i] = threats.players[i].independent - eps;
    (is_mean_payoff(game.objectives[i].kind) ? averaged : set_based).push_back(i);
  }

  // Relaxation over all of A; infeasible here means infeasible everywhere.
  auto slack_lp = [&](const std::vector<ProfileIndex>& support) {
    const std::size_t k = support.size();
    LinearProgram<Rational> lp(k + 1);
    lp.free_var[k] = true;
    lp.objective[k] = 1;
    for (Player i : averaged) {
      std::vector<Rational> row(k + 1);
      for (std::size_t b = 0; b < k; ++b) row[b] = game.objectives[i].weights[support[b]] - need[i];
      row[k] = -1;
      lp.add_row(std::move(row), RowSense::GreaterEq, Rational(0));
    }
    std::vector<Rational> sum(k + 1, Rational(1));
    sum[k] = 0;
    lp.add_row(std::move(sum), RowSense::Equal, Rational(1));
    if (averaged.empty()) {
      std::vector<Rational> cap(k + 1, Rational(0));
      cap[k] = 1;
      lp.add_row(std::move(cap), RowSense::LessEq, Rational(1));
    }
    return solve_lp(lp);
  };

  std::vector<ProfileIndex> everything(num_profiles);
  std::iota(everything.begin(), everything.end(), ProfileIndex{0});
  std::vector<Player> binding;
  {
    auto relax = slack_lp(everything);
    if (!averaged.empty() && sgn(relax.value) <= 0) {
      // Players who cannot be satisfied on their own come first.
      for (Player i : averaged) {
        const auto& w = game.objectives[i].weights;
        if (*std::max_element(w.begin(), w.end()) <= need[i]) binding.push_back(i);
      }
      if (binding.empty())
        for (Player i : averaged) {
          Rational s = -need[i];
          for (std::size_t b = 0; b < num_profiles; ++b) s += relax.x[b] * game.objectives[i].weights[b];
          if (s <= relax.value) binding.push_back(i);
        }
    }
    for (Player i : set_based) {
      const auto& obj = game.objectives[i];
      // Best value achievable by any recurring set.
      Rational best = 0;
      if (obj.uses_weights()) best = *std::max_element(obj.weights.begin(), obj.weights.end());
      else
        for (ProfileIndex a = 0; a < num_profiles && best == 0; ++a)
          if (obj.accepts_recurring(std::vector<ProfileIndex>{a})) best = 1;
      if (best <= need[i]) binding.push_back(i);
    }
    if (!binding.empty()) {
      std::sort(binding.begin(), binding.end());
      std::string names;
      for (Player i : binding) names += (names.empty() ? "" : ", ") + game.players[i];
      throw NoFeasiblePlay("no play meets the threats of: " + names, binding);
    }
  }

  auto set_value_ok = [&](Player i, const std::vector<ProfileIndex>& support) {
    const auto& obj = game.objectives[i];
    Rational v;
    if (obj.kind == ObjectiveKind::LimsupWeight) {
      v = obj.weights[support[0]];
      for (auto b : support) v = std::max<Rational>(v, obj.weights[b]);
    } else {
      v = obj.accepts_recurring(support) ? 1 : 0;
    }
    return v > need[i];
  };

  const std::size_t max_size = std::min(num_profiles, 2 * n + 1);
  std::size_t visited = 0;
  for (std::size_t k = 1; k <= max_size; ++k) {
    std::vector<ProfileIndex> support(k);
    std::iota(support.begin(), support.end(), ProfileIndex{0});
    for (;;) {
      if (++visited > opt.max_subsets) throw ConstructionError("target-play search budget exhausted");
      bool ok = true;
      for (Player i : set_based) ok = ok && set_value_ok(i, support);
      if (ok && averaged.empty()) return LassoPlay{{}, support};
      if (ok) {
        auto sol = slack_lp(support);
        if (sol.status == LpStatus::Optimal && sgn(sol.value) > 0) {
          // Strictly positive weights on all of B, slack kept positive.
          std::vector<Rational> q(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(k));
          auto slack_of = [&](const std::vector<Rational>& dist) {
            std::optional<Rational> worst;
            for (Player i : averaged) {
              Rational s = -need[i];
              for (std::size_t b = 0; b < k; ++b) s += dist[b] * game.objectives[i].weights[support[b]];
              if (!worst || s < *worst) worst = s;
            }
            return *worst;
          };
          if (std::any_of(q.begin(), q.end(), [](const Rational& v) { return sgn(v) == 0; })) {
            std::vector<Rational> u(k, Rational(1, static_cast<unsigned long>(k)));
            Rational su = slack_of(u);
            Rational eta = sgn(su) >= 0 ? Rational(1, 2) : Rational(sol.value / (2 * (sol.value - su)));
            for (std::size_t b = 0; b < k; ++b) q[b] = (1 - eta) * q[b] + eta * u[b];
          }
          for (std::size_t total = k; total <= opt.max_cycle_length; ++total) {
            auto counts = detail::apportion(q, total);
            if (!counts) continue;
            std::vector<Rational> freq(k);
            for (std::size_t b = 0; b < k; ++b)
              freq[b] = Rational(static_cast<unsigned long>((*counts)[b]), static_cast<unsigned long>(total));
            if (sgn(slack_of(freq)) <= 0) continue;
            LassoPlay p;
            for (std::size_t b = 0; b < k; ++b) p.cycle.insert(p.cycle.end(), (*counts)[b], support[b]);
            return p;
          }
          throw ConstructionError("could not round the target distribution to a cycle");
        }
      }
      // Next k-combination in lexicographic order.
      std::size_t pos = k;
      while (pos > 0 && support[pos - 1] == num_profiles - k + pos - 1) --pos;
      if (pos == 0) break;
      ++support[pos - 1];
      for (std::size_t j = pos; j < k; ++j) support[j] = support[j - 1] + 1;
    }
  }
  throw NoFeasiblePlay("no recurring profile set meets every threat", {});
}

namespace detail {

inline void add_punishment_states(const GameSpec& game, const PunishmentReport& threats, EquilibriumMachine& em) {
  const std::size_t n = game.num_players(), num_profiles = game.num_profiles();
  auto& m = em.machine;
  for (Player j = 0; j < n; ++j) {
    if (em.punishment_state(j)) continue;
    StateId s = m.num_states++;
    m.next.resize(m.num_states * num_profiles, s);
    for (ProfileIndex a = 0; a < num_profiles; ++a) m.next[s * num_profiles + a] = s;
    MixedProfile out = threats.players.at(j).punishment;
    out.at(j) = MixedAction::uniform(j, game.space.num_actions(j));
    m.output.push_back(std::move(out));
    m.state_names.push_back("punish-" + game.players[j]);
    em.classes.push_back(StateClass::punish(j));
  }
}

}  // namespace detail

/// Follow p*; the first deviation (lowest index among simultaneous
/// deviators) switches everyone else to the stationary punishment of the
/// deviator forever. The deviator herself plays uniformly while punished.
inline EquilibriumMachine build_grim_trigger(const GameSpec& game, const LassoPlay& target,
                                             const PunishmentReport& threats) {
  if (target.cycle.empty()) throw ConstructionError("target play has an empty cycle");
  const std::size_t n = game.num_players(), num_profiles = game.num_profiles();
  for (auto a : target.prefix)
    if (a >= num_profiles) throw ConstructionError("target play uses an unknown profile");
  for (auto a : target.cycle)
    if (a >= num_profiles) throw ConstructionError("target play uses an unknown profile");
  if (n > 1) require_solved_threats(game, threats);

  std::vector<ProfileIndex> path(target.prefix);
  path.insert(path.end(), target.cycle.begin(), target.cycle.end());
  const std::size_t len = path.size(), loop = target.prefix.size();

  EquilibriumMachine em;
  em.method = ConstructionMethod::GrimTrigger;
  auto& m = em.machine;
  m.num_states = len;
  m.num_profiles = num_profiles;
  m.initial = 0;
  m.next.assign(len * num_profiles, 0);
  for (std::size_t pos = 0; pos < len; ++pos) {
    MixedProfile out;
    for (Player i = 0; i < n; ++i)
      out.push_back(MixedAction::pure(i, game.space.num_actions(i), game.space.action(path[pos], i)));
    m.output.push_back(std::move(out));
    m.state_names.push_back("path" + std::to_string(pos));
    em.classes.push_back(StateClass::on_path());
  }
  if (n > 1) detail::add_punishment_states(game, threats, em);
  for (std::size_t pos = 0; pos < len; ++pos) {
    StateId follow = pos + 1 < len ? pos + 1 : loop;
    for (ProfileIndex a = 0; a < num_profiles; ++a) {
      StateId to = follow;
      if (a != path[pos] && n > 1) {
        Player j = 0;
        while (game.space.action(a, j) == game.space.action(path[pos], j)) ++j;
        to = *em.punishment_state(j);
      }
      m.next[pos * num_profiles + a] = to;
    }
  }
  return em;
}

class AcceptabilityError : public ConstructionError {
 public:
  AcceptabilityError(const std::string& what, Player player) : ConstructionError(what), player(player) {}
  Player player;
};

/// Single-state machine playing a Nash equilibrium x of the stage game, after
/// checking that every player's long-run payoff under x is at least her
/// correlated threat minus δ.
inline EquilibriumMachine build_acceptable_stationary(const GameSpec& game, double delta,
                                                      const PunishmentReport* threats = nullptr,
                                                      const NashOptions& nash = {}) {
  if (delta < 0) throw std::invalid_argument("delta must be nonnegative");
  std::vector<PayoffTensor> tensors;
  for (Player i = 0; i < game.num_players(); ++i) {
    if (!is_mean_payoff(game.objectives[i].kind))
      throw ConstructionError("acceptable stationary profiles need mean-payoff objectives");
    tensors.push_back(stage_tensor(game, i));
  }
  MixedProfile x = one_shot_nash(game.space, tensors, nash);
  const Rational d = from_double(delta);
  for (Player i = 0; i < game.num_players(); ++i) {
    Rational threat = threats ? threats->players.at(i).correlated : correlated_minmax(game.space, tensors[i], i).value;
    Rational payoff = product_expectation(game.space, tensors[i], x);
    if (payoff < threat - d)
      throw AcceptabilityError("stationary profile pays player '" + game.players[i] + "' " +
                                   std::to_string(to_double(payoff)) + " < threat - delta",
                               i);
  }
  EquilibriumMachine em;
  em.machine = FiniteMemoryProfile::constant(game, std::move(x));
  em.machine.state_names = {"stationary"};
  em.classes = {StateClass::on_path()};
  em.method = ConstructionMethod::AcceptableStationary;
  em.delta = delta;
  return em;
}

struct MonitorOptions {
  std::optional<double> delta;  // overrides the budget-derived δ
  std::size_t runs = 1000;
  std::size_t max_horizon = 400000;
  std::uint64_t seed = 1;
  double confidence = 0.95;
};

struct MonitoredEquilibrium {
  EquilibriumMachine machine;
  MonitorSpec monitor;
};

namespace detail {

// Deterministic on-path run: exact smallest warmup after which every running
// average stays inside the band forever.
inline std::optional<std::size_t> exact_warmup(const GameSpec& game, const EquilibriumMachine& base,
                                               const std::vector<Rational>& center, const Rational& delta) {
  const auto& m = base.machine;
  std::vector<StateId> seen(m.num_states, static_cast<StateId>(-1));
  std::vector<ProfileIndex> path;
  StateId s = m.initial;
  while (seen[s] == static_cast<StateId>(-1)) {
    seen[s] = path.size();
    ProfileIndex a = 0;
    for (Player i = 0; i < game.num_players(); ++i) {
      const auto& x = m.output[s][i];
      if (!x.is_pure()) return std::nullopt;
      a = game.space.with_action(a, i, x.support().front());
    }
    path.push_back(a);
    s = m.step(s, a);
  }
  const std::size_t prefix = seen[s], cycle = path.size() - prefix;
  std::size_t horizon = path.size();
  for (Player i = 0; i < game.num_players(); ++i) {
    const auto& w = game.objectives[i].weights;
    // |S_t - t c| is bounded by the largest partial deviation D over one
    // prefix plus one cycle; outside t > D/δ the band cannot be left.
    Rational dev = 0, worst = 0;
    for (std::size_t t = 0; t < path.size(); ++t) {
      dev += w[path[t]] - center[i];
      worst = std::max<Rational>(worst, abs(dev));
    }
    Rational bound = worst / delta;
    mpz_class ceil_bound;
    mpz_cdiv_q(ceil_bound.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
    horizon = std::max<std::size_t>(horizon, ceil_bound.get_ui() + path.size() + 1);
  }
  std::size_t last_violation = 0;
  std::vector<Rational> sum(game.num_players(), Rational(0));
  for (std::size_t t = 1; t <= horizon; ++t) {
    ProfileIndex a = t <= path.size() ? path[t - 1] : path[prefix + (t - 1 - prefix) % cycle];
    for (Player i = 0; i < game.num_players(); ++i) {
      sum[i] += game.objectives[i].weights[a];
      if (abs(sum[i] / static_cast<unsigned long>(t) - center[i]) >= delta) last_violation = t;
    }
  }
  return last_violation + 1;
}

}  // namespace detail

/// Wraps an acceptable-stationary or grim-trigger base with a running-average
/// monitor. δ comes from the budget inequality for ε unless overridden; the
/// band center is the base's exact long-run payoff vector; the warmup is the
/// first stage after which on-path running averages stay in the band with
/// probability above 1 - 2δ. For a deterministic on-path play the warmup is
/// exact. For a stationary mixed base it combines a Monte Carlo estimate up
/// to a horizon T (Clopper-Pearson upper limit at the given confidence) with
/// the Hoeffding tail bound sum_{t>=T} 2 exp(-2 t δ² / r²) beyond T, r being
/// the range of the on-path stage weights.
inline MonitoredEquilibrium build_monitored_equilibrium(const GameSpec& game, const EquilibriumMachine& base,
                                                        double epsilon, const PunishmentReport& threats,
                                                        const MonitorOptions& opt = {}) {
  const std::size_t n = game.num_players();
  for (Player i = 0; i < n; ++i)
    if (!is_mean_payoff(game.objectives[i].kind))
      throw ConstructionError("monitored equilibria need mean-payoff objectives");
  if (base.method == ConstructionMethod::MonitoredBlame) throw ConstructionError("base is already monitored");
  require_solved_threats(game, threats);
  base.machine.validate(game);

  MonitoredEquilibrium out;
  auto& spec = out.monitor;
  spec.delta = opt.delta ? *opt.delta : select_delta(epsilon, n, max_payoff_norm(game));
  if (!(spec.delta > 0)) throw std::invalid_argument("delta must be positive");
  for (Player i = 0; i < n; ++i) spec.center.push_back(on_path_values(game, base.machine, i)[base.machine.initial]);

  out.machine = base;
  out.machine.method = ConstructionMethod::MonitoredBlame;
  out.machine.epsilon = epsilon;
  out.machine.delta = spec.delta;
  detail::add_punishment_states(game, threats, out.machine);

  const Rational delta_q = from_double(spec.delta);
  if (auto w = detail::exact_warmup(game, base, spec.center, delta_q)) {
    spec.warmup = *w;
    spec.false_alarm_bound = 0.0;
    return out;
  }

  std::size_t on_path_states = 0;
  for (StateId s = 0; s < base.machine.num_states; ++s) on_path_states += !base.classes[s].punishing;
  if (on_path_states != 1)
    throw ConstructionError("a mixed base must be stationary (one on-path state) to bound its running averages");
  const StateId s0 = base.machine.initial;

  // Per-player range of on-path stage weights.
  std::vector<double> range(n, 0.0);
  for (Player i = 0; i < n; ++i) {
    std::optional<Rational> lo, hi;
    for (ProfileIndex a = 0; a < game.num_profiles(); ++a) {
      if (sgn(profile_probability(game.space, base.machine.output[s0], a)) == 0) continue;
      const auto& w = game.objectives[i].weights[a];
      if (!lo || w < *lo) lo = w;
      if (!hi || w > *hi) hi = w;
    }
    range[i] = to_double(*hi - *lo);
  }
  auto tail = [&](std::size_t horizon) {
    double total = 0;
    for (Player i = 0; i < n; ++i) {
      if (range[i] == 0) continue;
      double rate = 2.0 * spec.delta * spec.delta / (range[i] * range[i]);
      total += 2.0 * std::exp(-rate * static_cast<double>(horizon)) / -std::expm1(-rate);
    }
    return total;
  };
  const double tail_budget = spec.delta / 2.0;
  std::size_t horizon = 1;
  while (tail(horizon) > tail_budget) {
    horizon *= 2;
    if (horizon > 2 * opt.max_horizon) break;
  }
  {  // refine below the doubling overshoot
    std::size_t lo = horizon / 2, hi = horizon;
    while (lo + 1 < hi) {
      std::size_t mid = lo + (hi - lo) / 2;
      (tail(mid) > tail_budget ? lo : hi) = mid;
    }
    horizon = hi;
  }
  if (horizon > opt.max_horizon || tail(horizon) > tail_budget)
    throw MonteCarloBudgetExhausted("warmup horizon " + std::to_string(horizon) + " exceeds the simulation budget");

  // last[r]: last stage at which run r was outside the band (0: never).
  std::vector<std::size_t> last(opt.runs, 0);
  ProfileSampler sampler(game, base.machine);
  std::vector<double> center(n);
  for (Player i = 0; i < n; ++i) center[i] = to_double(spec.center[i]);
  std::vector<std::vector<double>> weight(n, std::vector<double>(game.num_profiles()));
  for (Player i = 0; i < n; ++i)
    for (ProfileIndex a = 0; a < game.num_profiles(); ++a) weight[i][a] = to_double(game.objectives[i].weights[a]);
  std::vector<std::size_t> acts(n);
  for (std::size_t r = 0; r < opt.runs; ++r) {
    auto rng = run_rng(opt.seed, r);
    std::vector<double> sum(n, 0.0);
    for (std::size_t t = 1; t <= horizon; ++t) {
      for (Player i = 0; i < n; ++i) acts[i] = sampler.draw(s0, i, rng);
      ProfileIndex a = game.space.encode(acts);
      for (Player i = 0; i < n; ++i) {
        sum[i] += weight[i][a];
        if (std::abs(sum[i] / static_cast<double>(t) - center[i]) >= spec.delta) last[r] = t;
      }
    }
  }
  std::sort(last.begin(), last.end());
  const double tail_mass = tail(horizon);
  // Smallest t with UCL(#{runs with last >= t}) + tail < 2δ.
  std::optional<std::size_t> warmup;
  for (std::size_t idx = 0; idx <= opt.runs; ++idx) {
    std::size_t exceed = opt.runs - idx;  // runs with last >= candidate
    std::size_t candidate = idx == 0 ? 1 : last[idx - 1] + 1;
    if (idx > 0 && idx < opt.runs && last[idx] == last[idx - 1]) continue;
    double ucl = clopper_pearson(exceed, opt.runs, opt.confidence).high;
    if (ucl + tail_mass < 2.0 * spec.delta) {
      warmup = candidate;
      spec.false_alarm_bound = ucl + tail_mass;
      break;
    }
  }
  if (!warmup) throw MonteCarloBudgetExhausted("Monte Carlo runs too few to certify the on-path false-alarm rate");
  spec.warmup = *warmup;
  return out;
}

}  // namespace bwg
