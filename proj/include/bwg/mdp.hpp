#pragma once

// Exact finite Markov decision processes whose transitions carry action
// profiles: multichain policy iteration for mean payoff, maximal end
// component decomposition, maximal reachability, and color objectives.

#include "bwg/game_model.hpp"
#include "bwg/linalg.hpp"
#include "bwg/lp.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

namespace bwg {

struct MdpOutcome {
  Rational prob;
  StateId next;
  ProfileIndex profile;
};

struct MdpAction {
  std::size_t label = 0;  // caller's action id (e.g. own action index)
  std::vector<MdpOutcome> outcomes;
};

struct Mdp {
  std::vector<std::vector<MdpAction>> actions;  // per state, nonempty

  std::size_t num_states() const { return actions.size(); }
};

/// Deterministic stationary policy: index into Mdp::actions[s].
using Policy = std::vector<std::size_t>;

/// Tarjan's algorithm; returns the component id of each node. Component ids
/// are assigned in reverse topological order (sinks first).
inline std::vector<std::size_t> strongly_connected_components(const std::vector<std::vector<std::size_t>>& adj,
                                                              std::size_t* num_components = nullptr) {
  const std::size_t n = adj.size();
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unset), low(n, 0), comp(n, unset), stack;
  std::vector<bool> on_stack(n, false);
  std::size_t counter = 0, comps = 0;
  struct Frame {
    std::size_t v, edge;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unset) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& f = call.back();
      if (f.edge < adj[f.v].size()) {
        std::size_t w = adj[f.v][f.edge++];
        if (index[w] == unset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      std::size_t v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = comps;
        } while (w != v);
        ++comps;
      }
    }
  }
  if (num_components) *num_components = comps;
  return comp;
}

/// Enabled-action mask, [state][action index].
using ActionMask = std::vector<std::vector<bool>>;

inline ActionMask full_mask(const Mdp& mdp) {
  ActionMask m(mdp.num_states());
  for (StateId s = 0; s < mdp.num_states(); ++s) m[s].assign(mdp.actions[s].size(), true);
  return m;
}

struct EndComponent {
  std::vector<StateId> states;
  ActionMask enabled;  // restricted to this component; other states all false
};

/// Maximal end components of the sub-MDP given by `mask`.
inline std::vector<EndComponent> maximal_end_components(const Mdp& mdp, ActionMask mask) {
  const std::size_t n = mdp.num_states();
  std::vector<std::size_t> comp;
  for (;;) {
    std::vector<std::vector<std::size_t>> adj(n);
    for (StateId s = 0; s < n; ++s)
      for (std::size_t k = 0; k < mdp.actions[s].size(); ++k)
        if (mask[s][k])
          for (const auto& o : mdp.actions[s][k].outcomes) adj[s].push_back(o.next);
    comp = strongly_connected_components(adj);
    bool changed = false;
    for (StateId s = 0; s < n; ++s)
      for (std::size_t k = 0; k < mdp.actions[s].size(); ++k) {
        if (!mask[s][k]) continue;
        for (const auto& o : mdp.actions[s][k].outcomes)
          if (comp[o.next] != comp[s] ||
              std::none_of(mask[o.next].begin(), mask[o.next].end(), [](bool b) { return b; })) {
            mask[s][k] = false;
            changed = true;
            break;
          }
      }
    if (!changed) break;
  }
  std::vector<EndComponent> out;
  std::vector<std::size_t> slot(n, static_cast<std::size_t>(-1));
  for (StateId s = 0; s < n; ++s) {
    if (std::none_of(mask[s].begin(), mask[s].end(), [](bool b) { return b; })) continue;
    std::size_t c = comp[s];
    if (slot[c] == static_cast<std::size_t>(-1)) {
      slot[c] = out.size();
      EndComponent ec;
      ec.enabled.resize(n);
      for (StateId t = 0; t < n; ++t) ec.enabled[t].assign(mdp.actions[t].size(), false);
      out.push_back(std::move(ec));
    }
    auto& ec = out[slot[c]];
    ec.states.push_back(s);
    ec.enabled[s] = mask[s];
  }
  return out;
}

/// Maximal probability of eventually reaching `target`, exact (LP).
inline std::vector<Rational> max_reachability(const Mdp& mdp, const std::vector<bool>& target) {
  const std::size_t n = mdp.num_states();
  // Backward graph search for states that can reach the target at all.
  std::vector<std::vector<StateId>> pred(n);
  for (StateId s = 0; s < n; ++s)
    for (const auto& act : mdp.actions[s])
      for (const auto& o : act.outcomes) pred[o.next].push_back(s);
  std::vector<bool> can(n, false);
  std::vector<StateId> queue;
  for (StateId s = 0; s < n; ++s)
    if (target[s]) {
      can[s] = true;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    StateId s = queue.back();
    queue.pop_back();
    for (StateId p : pred[s])
      if (!can[p]) {
        can[p] = true;
        queue.push_back(p);
      }
  }
  std::vector<Rational> value(n, Rational(0));
  std::vector<std::size_t> var(n, static_cast<std::size_t>(-1));
  std::size_t num_vars = 0;
  for (StateId s = 0; s < n; ++s) {
    if (target[s]) value[s] = 1;
    else if (can[s]) var[s] = num_vars++;
  }
  if (num_vars == 0) return value;
  LinearProgram<Rational> lp(num_vars);
  for (auto& c : lp.objective) c = -1;
  for (StateId s = 0; s < n; ++s) {
    if (var[s] == static_cast<std::size_t>(-1)) continue;
    for (const auto& act : mdp.actions[s]) {
      std::vector<Rational> row(num_vars, Rational(0));
      Rational rhs = 0;
      row[var[s]] += 1;
      for (const auto& o : act.outcomes) {
        if (target[o.next]) rhs += o.prob;
        else if (var[o.next] != static_cast<std::size_t>(-1)) row[var[o.next]] -= o.prob;
      }
      lp.add_row(std::move(row), RowSense::GreaterEq, rhs);
    }
    std::vector<Rational> cap(num_vars, Rational(0));
    cap[var[s]] = 1;
    lp.add_row(std::move(cap), RowSense::LessEq, Rational(1));
  }
  auto sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal) throw std::runtime_error("reachability LP failed");
  for (StateId s = 0; s < n; ++s)
    if (var[s] != static_cast<std::size_t>(-1)) value[s] = sol.x[var[s]];
  return value;
}

/// Gain and bias of a stationary deterministic policy, exact.
struct PolicyEvaluation {
  std::vector<Rational> gain;
  std::vector<Rational> bias;
};

inline Rational expected_reward(const MdpAction& act, const std::vector<Rational>& weights) {
  Rational r = 0;
  for (const auto& o : act.outcomes) r += o.prob * weights[o.profile];
  return r;
}

/// Solves (I-P)g = 0, g + (I-P)h = r with h fixed to 0 at one state of each
/// recurrent class of the policy's chain.
inline PolicyEvaluation evaluate_policy(const Mdp& mdp, const Policy& policy, const std::vector<Rational>& weights) {
  const std::size_t n = mdp.num_states();
  std::vector<std::vector<std::size_t>> adj(n);
  for (StateId s = 0; s < n; ++s)
    for (const auto& o : mdp.actions[s][policy[s]].outcomes) adj[s].push_back(o.next);
  std::size_t comps = 0;
  auto comp = strongly_connected_components(adj, &comps);
  std::vector<bool> bottom(comps, true);
  for (StateId s = 0; s < n; ++s)
    for (auto t : adj[s])
      if (comp[t] != comp[s]) bottom[comp[s]] = false;
  std::vector<StateId> refs;
  std::vector<bool> seen(comps, false);
  for (StateId s = 0; s < n; ++s)
    if (bottom[comp[s]] && !seen[comp[s]]) {
      seen[comp[s]] = true;
      refs.push_back(s);
    }

  Matrix<Rational> a(2 * n + refs.size(), std::vector<Rational>(2 * n, Rational(0)));
  std::vector<Rational> b(2 * n + refs.size(), Rational(0));
  for (StateId s = 0; s < n; ++s) {
    const auto& act = mdp.actions[s][policy[s]];
    a[s][s] += 1;
    a[n + s][s] += 1;
    a[n + s][n + s] += 1;
    for (const auto& o : act.outcomes) {
      a[s][o.next] -= o.prob;
      a[n + s][n + o.next] -= o.prob;
    }
    b[n + s] = expected_reward(act, weights);
  }
  for (std::size_t k = 0; k < refs.size(); ++k) a[2 * n + k][n + refs[k]] = 1;
  auto sol = solve_linear(std::move(a), std::move(b));
  if (!sol) throw std::runtime_error("policy evaluation system is singular");
  PolicyEvaluation ev;
  ev.gain.assign(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(n));
  ev.bias.assign(sol->begin() + static_cast<std::ptrdiff_t>(n), sol->end());
  return ev;
}

struct MeanPayoffSolution {
  std::vector<Rational> gain;
  Policy policy;
  std::size_t iterations = 0;
};

/// Optimal long-run average reward by multichain policy iteration (gain
/// improvement first, then bias improvement among gain-optimal actions;
/// the incumbent action is kept on ties).
inline MeanPayoffSolution optimal_mean_payoff(const Mdp& mdp, const std::vector<Rational>& weights,
                                              Policy initial = {}) {
  const std::size_t n = mdp.num_states();
  Policy d = initial.empty() ? Policy(n, 0) : std::move(initial);
  MeanPayoffSolution out;
  for (;;) {
    ++out.iterations;
    auto ev = evaluate_policy(mdp, d, weights);
    bool changed = false;
    std::vector<std::vector<std::size_t>> gain_best(n);
    for (StateId s = 0; s < n; ++s) {
      std::vector<Rational> pg(mdp.actions[s].size(), Rational(0));
      for (std::size_t k = 0; k < mdp.actions[s].size(); ++k)
        for (const auto& o : mdp.actions[s][k].outcomes) pg[k] += o.prob * ev.gain[o.next];
      Rational best = *std::max_element(pg.begin(), pg.end());
      for (std::size_t k = 0; k < pg.size(); ++k)
        if (pg[k] == best) gain_best[s].push_back(k);
      if (pg[d[s]] != best) {
        d[s] = gain_best[s].front();
        changed = true;
      }
    }
    if (!changed) {
      for (StateId s = 0; s < n; ++s) {
        auto lookahead = [&](std::size_t k) {
          Rational v = expected_reward(mdp.actions[s][k], weights);
          for (const auto& o : mdp.actions[s][k].outcomes) v += o.prob * ev.bias[o.next];
          return v;
        };
        std::size_t arg = gain_best[s].front();
        Rational best = lookahead(arg);
        for (std::size_t k : gain_best[s]) {
          Rational v = lookahead(k);
          if (v > best) {
            best = v;
            arg = k;
          }
        }
        if (lookahead(d[s]) != best) {
          d[s] = arg;
          changed = true;
        }
      }
    }
    if (!changed) {
      out.gain = std::move(ev.gain);
      out.policy = std::move(d);
      return out;
    }
  }
}

/// States from which the controller can win the color objective almost
/// surely by staying inside some end component.
inline std::vector<bool> winning_end_component_states(const Mdp& mdp, const ObjectiveSpec& objective) {
  const std::size_t n = mdp.num_states();
  std::vector<bool> good(n, false);
  auto mark = [&](const std::vector<EndComponent>& ecs, const std::function<bool(const EndComponent&)>& accept) {
    for (const auto& ec : ecs)
      if (accept(ec))
        for (auto s : ec.states) good[s] = true;
  };
  auto restricted = [&](const std::function<bool(std::uint32_t)>& allowed_color) {
    ActionMask mask = full_mask(mdp);
    for (StateId s = 0; s < n; ++s)
      for (std::size_t k = 0; k < mdp.actions[s].size(); ++k)
        for (const auto& o : mdp.actions[s][k].outcomes)
          if (!allowed_color(objective.colors[o.profile])) mask[s][k] = false;
    return mask;
  };
  auto contains_color = [&](const EndComponent& ec, const std::function<bool(std::uint32_t)>& pred) {
    for (auto s : ec.states)
      for (std::size_t k = 0; k < mdp.actions[s].size(); ++k)
        if (ec.enabled[s][k])
          for (const auto& o : mdp.actions[s][k].outcomes)
            if (pred(objective.colors[o.profile])) return true;
    return false;
  };
  switch (objective.kind) {
    case ObjectiveKind::Buchi:
      mark(maximal_end_components(mdp, full_mask(mdp)),
           [&](const EndComponent& ec) { return contains_color(ec, [](std::uint32_t c) { return c != 0; }); });
      break;
    case ObjectiveKind::CoBuchi:
      mark(maximal_end_components(mdp, restricted([](std::uint32_t c) { return c == 0; })),
           [](const EndComponent&) { return true; });
      break;
    case ObjectiveKind::Parity: {
      std::vector<std::uint32_t> priorities(objective.colors.begin(), objective.colors.end());
      std::sort(priorities.begin(), priorities.end());
      priorities.erase(std::unique(priorities.begin(), priorities.end()), priorities.end());
      for (auto p : priorities) {
        if (p % 2 != 0) continue;
        mark(maximal_end_components(mdp, restricted([p](std::uint32_t c) { return c >= p; })),
             [&](const EndComponent& ec) { return contains_color(ec, [p](std::uint32_t c) { return c == p; }); });
      }
      break;
    }
    default:
      throw std::invalid_argument("winning_end_component_states needs a color objective");
  }
  return good;
}

/// Optimal probability of satisfying a color objective from each state.
inline std::vector<Rational> optimal_color_value(const Mdp& mdp, const ObjectiveSpec& objective) {
  return max_reachability(mdp, winning_end_component_states(mdp, objective));
}

}  // namespace bwg
