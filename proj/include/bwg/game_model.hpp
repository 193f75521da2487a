#pragma once

// Games, plays, histories, finite-memory strategy profiles and exact payoff
// evaluation on eventually periodic plays.
//
// Every supported objective is a function of the per-stage action profile
// only: weight objectives through long-run statistics of the stage weights,
// color objectives through the set of profiles occurring infinitely often.
// Tail-measurability therefore holds by construction.

#include "bwg/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bwg {

using Player = std::size_t;
using ProfileIndex = std::size_t;
using StateId = std::size_t;

class GameSpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ObjectiveKind { MeanPayoffLimsup, MeanPayoffLiminf, LimsupWeight, Buchi, CoBuchi, Parity };

inline const char* to_string(ObjectiveKind k) {
  switch (k) {
    case ObjectiveKind::MeanPayoffLimsup: return "mean-payoff-limsup";
    case ObjectiveKind::MeanPayoffLiminf: return "mean-payoff-liminf";
    case ObjectiveKind::LimsupWeight: return "limsup-weight";
    case ObjectiveKind::Buchi: return "buchi";
    case ObjectiveKind::CoBuchi: return "cobuchi";
    case ObjectiveKind::Parity: return "parity";
  }
  return "?";
}

inline ObjectiveKind parse_objective_kind(const std::string& s) {
  for (auto k : {ObjectiveKind::MeanPayoffLimsup, ObjectiveKind::MeanPayoffLiminf, ObjectiveKind::LimsupWeight,
                 ObjectiveKind::Buchi, ObjectiveKind::CoBuchi, ObjectiveKind::Parity})
    if (s == to_string(k)) return k;
  throw GameSpecError("unknown objective kind '" + s + "'");
}

inline bool is_weight_kind(ObjectiveKind k) {
  return k == ObjectiveKind::MeanPayoffLimsup || k == ObjectiveKind::MeanPayoffLiminf ||
         k == ObjectiveKind::LimsupWeight;
}

inline bool is_mean_payoff(ObjectiveKind k) {
  return k == ObjectiveKind::MeanPayoffLimsup || k == ObjectiveKind::MeanPayoffLiminf;
}

/// One player's objective. `weights` is indexed by profile for weight kinds;
/// `colors` is indexed by profile for color kinds: for Buchi a nonzero color
/// marks the target set, for CoBuchi it marks the avoid set, for Parity it is
/// the priority (the play is won iff the least priority seen infinitely
/// often is even).
struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::MeanPayoffLimsup;
  std::vector<Rational> weights;
  std::vector<std::uint32_t> colors;

  bool uses_weights() const { return is_weight_kind(kind); }

  /// Value of a color objective when exactly the profiles in `recurring`
  /// (nonempty) occur infinitely often.
  template <class Range>
  bool accepts_recurring(const Range& recurring) const {
    switch (kind) {
      case ObjectiveKind::Buchi:
        return std::any_of(std::begin(recurring), std::end(recurring),
                           [&](ProfileIndex a) { return colors[a] != 0; });
      case ObjectiveKind::CoBuchi:
        return std::none_of(std::begin(recurring), std::end(recurring),
                            [&](ProfileIndex a) { return colors[a] != 0; });
      case ObjectiveKind::Parity: {
        std::uint32_t least = UINT32_MAX;
        for (ProfileIndex a : recurring) least = std::min(least, colors[a]);
        return least % 2 == 0;
      }
      default:
        throw GameSpecError("accepts_recurring called on a weight objective");
    }
  }

  /// Sup norm of the payoff function: max |weight| or 1 for color kinds.
  Rational sup_norm() const {
    if (!uses_weights()) return Rational(1);
    Rational m = 0;
    for (const auto& w : weights) m = std::max<Rational>(m, abs(w));
    return m;
  }
};

/// Mixed-radix indexing of the profile space A = A_1 x ... x A_n. Player 0 is
/// the most significant digit, so index order is lexicographic order.
class ProfileSpace {
 public:
  ProfileSpace() = default;
  explicit ProfileSpace(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)), stride_(sizes_.size(), 1) {
    count_ = 1;
    for (std::size_t i = sizes_.size(); i-- > 0;) {
      if (sizes_[i] == 0) throw GameSpecError("player " + std::to_string(i) + " has no actions");
      stride_[i] = count_;
      count_ *= sizes_[i];
    }
  }

  std::size_t num_players() const { return sizes_.size(); }
  std::size_t num_actions(Player i) const { return sizes_[i]; }
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  std::size_t count() const { return count_; }

  std::size_t action(ProfileIndex a, Player i) const { return (a / stride_[i]) % sizes_[i]; }

  ProfileIndex encode(const std::vector<std::size_t>& actions) const {
    if (actions.size() != sizes_.size()) throw std::invalid_argument("profile arity mismatch");
    ProfileIndex a = 0;
    for (std::size_t i = 0; i < actions.size(); ++i) {
      if (actions[i] >= sizes_[i]) throw std::out_of_range("action index out of range");
      a += actions[i] * stride_[i];
    }
    return a;
  }

  std::vector<std::size_t> decode(ProfileIndex a) const {
    std::vector<std::size_t> out(sizes_.size());
    for (std::size_t i = 0; i < sizes_.size(); ++i) out[i] = action(a, i);
    return out;
  }

  /// Profile `a` with player i's action replaced by `act`.
  ProfileIndex with_action(ProfileIndex a, Player i, std::size_t act) const {
    return a - action(a, i) * stride_[i] + act * stride_[i];
  }

  /// Number of joint actions of all players other than i.
  std::size_t others_count(Player i) const { return count_ / sizes_[i]; }

  /// Enumerates joint actions of the players other than i in lexicographic
  /// order; `k`-th joint action combined with own action `act`.
  ProfileIndex join(Player i, std::size_t act, std::size_t k) const {
    // k is a mixed-radix number over the other players, player order kept.
    ProfileIndex a = act * stride_[i];
    for (std::size_t j = sizes_.size(); j-- > 0;) {
      if (j == i) continue;
      a += (k % sizes_[j]) * stride_[j];
      k /= sizes_[j];
    }
    return a;
  }

  /// Index of a's opponents-of-i component in the `join` enumeration.
  std::size_t others_index(ProfileIndex a, Player i) const {
    std::size_t k = 0;
    for (std::size_t j = 0; j < sizes_.size(); ++j) {
      if (j == i) continue;
      k = k * sizes_[j] + action(a, j);
    }
    return k;
  }

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> stride_;
  std::size_t count_ = 0;
};

/// A finite Blackwell game whose payoffs are color/weight objectives.
struct GameSpec {
  std::vector<std::string> players;
  std::vector<std::vector<std::string>> actions;
  std::vector<ObjectiveSpec> objectives;
  ProfileSpace space;

  std::size_t num_players() const { return players.size(); }
  std::size_t num_profiles() const { return space.count(); }

  /// Builds and validates; throws GameSpecError naming the offending item.
  static GameSpec create(std::vector<std::string> players, std::vector<std::vector<std::string>> actions,
                         std::vector<ObjectiveSpec> objectives) {
    GameSpec g;
    g.players = std::move(players);
    g.actions = std::move(actions);
    g.objectives = std::move(objectives);
    if (g.players.empty()) throw GameSpecError("a game needs at least one player");
    if (g.actions.size() != g.players.size() || g.objectives.size() != g.players.size())
      throw GameSpecError("players, actions and objectives must have equal length");
    std::vector<std::size_t> sizes;
    for (std::size_t i = 0; i < g.players.size(); ++i) {
      if (g.actions[i].empty()) throw GameSpecError("player '" + g.players[i] + "' has no actions");
      sizes.push_back(g.actions[i].size());
    }
    g.space = ProfileSpace(sizes);
    g.validate();
    return g;
  }

  void validate() const {
    for (std::size_t i = 0; i < players.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (players[i] == players[j]) throw GameSpecError("duplicate player '" + players[i] + "'");
    for (std::size_t i = 0; i < players.size(); ++i) {
      const auto& labels = actions[i];
      for (std::size_t a = 0; a < labels.size(); ++a)
        for (std::size_t b = 0; b < a; ++b)
          if (labels[a] == labels[b])
            throw GameSpecError("duplicate action '" + labels[a] + "' for player '" + players[i] + "'");
      const auto& obj = objectives[i];
      if (obj.uses_weights()) {
        if (obj.weights.size() != num_profiles())
          throw GameSpecError("player '" + players[i] + "' needs a weight for every profile");
      } else if (obj.colors.size() != num_profiles()) {
        throw GameSpecError("player '" + players[i] + "' needs a color for every profile");
      }
    }
  }

  std::size_t player_index(const std::string& name) const {
    for (std::size_t i = 0; i < players.size(); ++i)
      if (players[i] == name) return i;
    throw GameSpecError("unknown player '" + name + "'");
  }

  std::size_t action_index(Player i, const std::string& label) const {
    const auto& labels = actions[i];
    for (std::size_t a = 0; a < labels.size(); ++a)
      if (labels[a] == label) return a;
    throw GameSpecError("unknown action '" + label + "' for player '" + players[i] + "'");
  }

  std::string profile_label(ProfileIndex a) const {
    std::string s;
    for (std::size_t i = 0; i < players.size(); ++i) {
      if (i) s += ',';
      s += actions[i][space.action(a, i)];
    }
    return s;
  }
};

/// Eventually periodic play prefix · cycle^ω.
struct LassoPlay {
  std::vector<ProfileIndex> prefix;
  std::vector<ProfileIndex> cycle;

  bool operator==(const LassoPlay&) const = default;
};

struct History {
  std::vector<ProfileIndex> stages;

  std::size_t length() const { return stages.size(); }
  bool operator==(const History&) const = default;
};

/// Exact payoff of the infinite play prefix · cycle^ω.
inline Rational eval_lasso(const ObjectiveSpec& objective, const LassoPlay& play) {
  if (play.cycle.empty()) throw std::invalid_argument("lasso play needs a nonempty cycle");
  const std::size_t table = objective.uses_weights() ? objective.weights.size() : objective.colors.size();
  for (auto a : play.prefix)
    if (a >= table) throw std::out_of_range("play contains an unknown profile");
  for (auto a : play.cycle)
    if (a >= table) throw std::out_of_range("play contains an unknown profile");
  switch (objective.kind) {
    case ObjectiveKind::MeanPayoffLimsup:
    case ObjectiveKind::MeanPayoffLiminf: {
      Rational sum = 0;
      for (auto a : play.cycle) sum += objective.weights[a];
      return sum / static_cast<unsigned long>(play.cycle.size());
    }
    case ObjectiveKind::LimsupWeight: {
      Rational best = objective.weights[play.cycle.front()];
      for (auto a : play.cycle) best = std::max<Rational>(best, objective.weights[a]);
      return best;
    }
    default:
      return objective.accepts_recurring(play.cycle) ? Rational(1) : Rational(0);
  }
}

/// True iff replacing the prefix leaves the payoff unchanged.
inline bool tail_invariance_check(const ObjectiveSpec& objective, const LassoPlay& play,
                                  const std::vector<ProfileIndex>& altered_prefix) {
  LassoPlay altered{altered_prefix, play.cycle};
  return eval_lasso(objective, play) == eval_lasso(objective, altered);
}

/// Distribution of one player over her actions.
struct MixedAction {
  Player player = 0;
  std::vector<Rational> prob;

  static MixedAction pure(Player i, std::size_t num_actions, std::size_t a) {
    MixedAction x{i, std::vector<Rational>(num_actions, Rational(0))};
    x.prob.at(a) = 1;
    return x;
  }

  static MixedAction uniform(Player i, std::size_t num_actions) {
    return MixedAction{i, std::vector<Rational>(num_actions, Rational(1, static_cast<unsigned long>(num_actions)))};
  }

  /// Exact renormalization of nonnegative doubles.
  static MixedAction from_doubles(Player i, const std::vector<double>& p) {
    MixedAction x{i, {}};
    Rational total = 0;
    for (double v : p) {
      x.prob.push_back(from_double(std::max(0.0, v)));
      total += x.prob.back();
    }
    if (sgn(total) <= 0) throw std::invalid_argument("distribution has zero mass");
    for (auto& q : x.prob) q /= total;
    return x;
  }

  bool is_valid() const {
    if (prob.empty()) return false;
    Rational total = 0;
    for (const auto& q : prob) {
      if (sgn(q) < 0) return false;
      total += q;
    }
    return total == 1;
  }

  bool is_pure() const {
    return std::count_if(prob.begin(), prob.end(), [](const Rational& q) { return sgn(q) > 0; }) == 1;
  }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    for (std::size_t a = 0; a < prob.size(); ++a)
      if (sgn(prob[a]) > 0) s.push_back(a);
    return s;
  }

  bool operator==(const MixedAction&) const = default;
};

using MixedProfile = std::vector<MixedAction>;

/// Probability of profile `a` under a product of mixed actions.
inline Rational profile_probability(const ProfileSpace& space, const MixedProfile& x, ProfileIndex a) {
  Rational p = 1;
  for (std::size_t i = 0; i < x.size() && sgn(p) != 0; ++i) p *= x[i].prob[space.action(a, i)];
  return p;
}

/// Mealy machine over full action profiles realizing a strategy profile.
struct FiniteMemoryProfile {
  std::size_t num_states = 0;
  StateId initial = 0;
  std::size_t num_profiles = 0;
  std::vector<StateId> next;                 // [state * num_profiles + profile]
  std::vector<MixedProfile> output;          // [state][player]
  std::vector<std::string> state_names;

  static FiniteMemoryProfile constant(const GameSpec& game, MixedProfile x) {
    FiniteMemoryProfile m;
    m.num_states = 1;
    m.num_profiles = game.num_profiles();
    m.next.assign(m.num_profiles, 0);
    m.output.push_back(std::move(x));
    m.state_names = {"s0"};
    return m;
  }

  StateId step(StateId s, ProfileIndex a) const {
    if (s >= num_states) throw std::out_of_range("unknown machine state");
    if (a >= num_profiles) throw std::out_of_range("unknown action profile in history");
    return next[s * num_profiles + a];
  }

  StateId state_after(const History& h, StateId from) const {
    StateId s = from;
    for (auto a : h.stages) s = step(s, a);
    return s;
  }

  StateId state_after(const History& h) const { return state_after(h, initial); }

  void validate(const GameSpec& game) const {
    if (num_states == 0) throw GameSpecError("machine has no states");
    if (initial >= num_states) throw GameSpecError("initial state out of range");
    if (num_profiles != game.num_profiles()) throw GameSpecError("machine profile count does not match game");
    if (next.size() != num_states * num_profiles) throw GameSpecError("transition table is not total");
    for (auto t : next)
      if (t >= num_states) throw GameSpecError("transition to unknown state");
    if (output.size() != num_states) throw GameSpecError("output table is not total");
    for (std::size_t s = 0; s < num_states; ++s) {
      if (output[s].size() != game.num_players()) throw GameSpecError("output row has wrong number of players");
      for (std::size_t i = 0; i < game.num_players(); ++i) {
        const auto& x = output[s][i];
        if (x.prob.size() != game.space.num_actions(i) || !x.is_valid())
          throw GameSpecError("invalid distribution for player '" + game.players[i] + "' in state " +
                              std::to_string(s));
      }
    }
  }
};

/// σ(h): the mixed action profile the machine prescribes after history h.
inline const MixedProfile& run_machine(const FiniteMemoryProfile& machine, const History& history) {
  return machine.output[machine.state_after(history)];
}

}  // namespace bwg
