#pragma once

// Equilibrium machines (finite-memory profiles annotated with on-path and
// punishing states) and the running-average monitor with its blame rule.

#include "bwg/game_model.hpp"

#include <cmath>
#include <limits>
#include <deque>
#include <optional>
#include <string>
#include <vector>

namespace bwg {

enum class ConstructionMethod { GrimTrigger, AcceptableStationary, MonitoredBlame };

inline const char* to_string(ConstructionMethod m) {
  switch (m) {
    case ConstructionMethod::GrimTrigger: return "grim-trigger";
    case ConstructionMethod::AcceptableStationary: return "acceptable-stationary";
    case ConstructionMethod::MonitoredBlame: return "monitored-blame";
  }
  return "?";
}

inline ConstructionMethod parse_method(const std::string& s) {
  for (auto m : {ConstructionMethod::GrimTrigger, ConstructionMethod::AcceptableStationary,
                 ConstructionMethod::MonitoredBlame})
    if (s == to_string(m)) return m;
  throw std::invalid_argument("unknown construction method '" + s + "'");
}

struct StateClass {
  bool punishing = false;
  Player target = 0;  // punished player when `punishing`

  static StateClass on_path() { return {}; }
  static StateClass punish(Player j) { return {true, j}; }
  bool operator==(const StateClass&) const = default;
};

struct EquilibriumMachine {
  FiniteMemoryProfile machine;
  std::vector<StateClass> classes;  // per state
  ConstructionMethod method = ConstructionMethod::GrimTrigger;
  double epsilon = 0.0;
  double delta = 0.0;

  /// The punishing(j) state, if the machine has one.
  std::optional<StateId> punishment_state(Player j) const {
    for (StateId s = 0; s < classes.size(); ++s)
      if (classes[s].punishing && classes[s].target == j) return s;
    return std::nullopt;
  }

  /// punishing(j) states only lead to punishing(j) states, on every profile.
  bool punishments_absorbing() const {
    for (StateId s = 0; s < machine.num_states; ++s) {
      if (!classes[s].punishing) continue;
      for (ProfileIndex a = 0; a < machine.num_profiles; ++a)
        if (!(classes[machine.step(s, a)] == classes[s])) return false;
    }
    return true;
  }
};

/// Running statistic used to pick a suspect once the monitor fires: the
/// excess negative log-likelihood of each player's realized actions under
/// the on-path mixed action, ties to the lowest index.
struct BlameRule {
  std::string scoring = "excess-nll";
  std::string tie_break = "lowest-index";
};

/// Running-average band monitor. From stage `warmup` on, the first stage at
/// which some player's running average of stage weights leaves the open band
/// (center[i] - delta, center[i] + delta) is a trigger; the set of such
/// histories is prefix-free because the first exit ends monitoring.
struct MonitorSpec {
  std::vector<Rational> center;
  double delta = 0.0;
  std::size_t warmup = 0;
  BlameRule blame;
  /// Probability bound on on-path false alarms used when choosing `warmup`.
  double false_alarm_bound = 0.0;
};

/// Incremental evaluation of a MonitorSpec along a play.
class MonitorRuntime {
 public:
  MonitorRuntime(const GameSpec& game, const MonitorSpec& spec)
      : game_(&game), spec_(&spec), sums_(game.num_players(), 0.0), excess_(game.num_players(), 0.0) {
    for (const auto& c : spec.center) center_.push_back(to_double(c));
    weights_.resize(game.num_players());
    for (Player i = 0; i < game.num_players(); ++i)
      if (game.objectives[i].uses_weights())
        for (const auto& w : game.objectives[i].weights) weights_[i].push_back(to_double(w));
  }

  /// Feeds one stage: the on-path profile prescribed before the stage and
  /// the realized profile. Returns true when this stage fires the trigger.
  bool observe(const MixedProfile& prescribed, ProfileIndex realized) {
    if (fired_) return false;
    ++stage_;
    const std::size_t n = game_->num_players();
    const auto& sc = scores(prescribed);
    for (Player i = 0; i < n; ++i) {
      excess_[i] += sc[i][game_->space.action(realized, i)];
      if (!weights_[i].empty()) sums_[i] += weights_[i][realized];
    }
    if (stage_ < spec_->warmup || stage_ == 0) return false;
    for (Player i = 0; i < n; ++i) {
      if (weights_[i].empty()) continue;
      double avg = sums_[i] / static_cast<double>(stage_);
      if (std::abs(avg - center_[i]) >= spec_->delta) {
        fired_ = true;
        blamed_ = suspect();
        return true;
      }
    }
    return false;
  }

  bool fired() const { return fired_; }
  Player blamed() const { return blamed_; }
  std::size_t stage() const { return stage_; }
  const std::vector<double>& excess_nll() const { return excess_; }
  double running_average(Player i) const { return stage_ ? sums_[i] / static_cast<double>(stage_) : 0.0; }

  /// Highest excess negative log-likelihood, lowest index on ties.
  Player suspect() const {
    Player best = 0;
    for (Player i = 1; i < excess_.size(); ++i)
      if (excess_[i] > excess_[best]) best = i;
    return best;
  }

 private:
  // Per player and action: -log p(action) minus the entropy of the
  // prescribed mixed action. Cached per prescribed profile.
  const std::vector<std::vector<double>>& scores(const MixedProfile& x) {
    for (const auto& [key, val] : cache_)
      if (key == &x) return val;
    std::vector<std::vector<double>> sc;
    for (const auto& xi : x) {
      double entropy = 0;
      for (const auto& q : xi.prob) {
        double v = to_double(q);
        if (v > 0) entropy -= v * std::log(v);
      }
      std::vector<double> row;
      for (const auto& q : xi.prob) {
        double v = to_double(q);
        row.push_back((v > 0 ? -std::log(v) : std::numeric_limits<double>::infinity()) - entropy);
      }
      sc.push_back(std::move(row));
    }
    cache_.emplace_back(&x, std::move(sc));
    return cache_.back().second;
  }

  const GameSpec* game_;
  const MonitorSpec* spec_;
  std::vector<std::vector<double>> weights_;
  std::deque<std::pair<const MixedProfile*, std::vector<std::vector<double>>>> cache_;
  std::vector<double> center_;
  std::vector<double> sums_;
  std::vector<double> excess_;
  std::size_t stage_ = 0;
  bool fired_ = false;
  Player blamed_ = 0;
};

/// Whether history h is a trigger history of the monitor: the band is first
/// left (at or after the warmup) exactly at the last stage of h. Monitoring
/// follows the machine's prescriptions along h.
inline bool is_trigger_history(const GameSpec& game, const EquilibriumMachine& m, const MonitorSpec& spec,
                               const History& h) {
  MonitorRuntime mon(game, spec);
  StateId s = m.machine.initial;
  for (std::size_t t = 0; t < h.stages.size(); ++t) {
    bool fired = mon.observe(m.machine.output[s], h.stages[t]);
    if (fired) return t + 1 == h.stages.size();
    s = m.machine.step(s, h.stages[t]);
  }
  return false;
}

}  // namespace bwg
