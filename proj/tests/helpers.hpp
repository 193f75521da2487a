#pragma once

#include "bwg/bwg.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <string>

namespace bwg::testing {

inline Rational frac(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline std::string fixture(const std::string& name) { return std::string(BWG_FIXTURES) + "/" + name; }

inline GameSpec load_fixture(const std::string& name) { return load_game(fixture(name)); }

/// Random game with small integer weights (or colors in [0, max_color]).
inline GameSpec random_game(std::mt19937_64& rng, std::vector<std::size_t> sizes, ObjectiveKind kind,
                            int lo = 0, int hi = 4, std::uint32_t max_color = 1) {
  std::vector<std::string> players;
  std::vector<std::vector<std::string>> actions;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    players.push_back("p" + std::to_string(i));
    std::vector<std::string> labels;
    for (std::size_t a = 0; a < sizes[i]; ++a) labels.push_back("a" + std::to_string(a));
    actions.push_back(labels);
  }
  ProfileSpace space(sizes);
  std::uniform_int_distribution<int> w(lo, hi);
  std::uniform_int_distribution<std::uint32_t> c(0, max_color);
  std::vector<ObjectiveSpec> objectives(sizes.size());
  for (auto& o : objectives) {
    o.kind = kind;
    for (ProfileIndex a = 0; a < space.count(); ++a) {
      if (is_weight_kind(kind)) o.weights.push_back(Rational(w(rng)));
      else o.colors.push_back(c(rng));
    }
  }
  return GameSpec::create(players, actions, objectives);
}

inline std::vector<PayoffTensor> stage_tensors(const GameSpec& g) {
  std::vector<PayoffTensor> t;
  for (Player i = 0; i < g.num_players(); ++i) t.push_back(stage_tensor(g, i));
  return t;
}

inline ProfileIndex profile(const GameSpec& g, std::vector<std::string> labels) {
  std::vector<std::size_t> act;
  for (Player i = 0; i < labels.size(); ++i) act.push_back(g.action_index(i, labels[i]));
  return g.space.encode(act);
}

inline MixedProfile pure_profile(const GameSpec& g, ProfileIndex a) {
  MixedProfile x;
  for (Player i = 0; i < g.num_players(); ++i) x.push_back(MixedAction::pure(i, g.space.num_actions(i), g.space.action(a, i)));
  return x;
}

inline MixedProfile uniform_profile(const GameSpec& g) {
  MixedProfile x;
  for (Player i = 0; i < g.num_players(); ++i) x.push_back(MixedAction::uniform(i, g.space.num_actions(i)));
  return x;
}

/// Random machine with up to `max_states` states, random transitions and
/// random rational outputs with denominators up to 4.
inline FiniteMemoryProfile random_machine(std::mt19937_64& rng, const GameSpec& g, std::size_t num_states) {
  FiniteMemoryProfile m;
  m.num_states = num_states;
  m.num_profiles = g.num_profiles();
  std::uniform_int_distribution<StateId> st(0, num_states - 1);
  for (std::size_t k = 0; k < num_states * m.num_profiles; ++k) m.next.push_back(st(rng));
  std::uniform_int_distribution<int> wt(0, 3);
  for (StateId s = 0; s < num_states; ++s) {
    MixedProfile out;
    for (Player i = 0; i < g.num_players(); ++i) {
      MixedAction x;
      x.player = i;
      int total = 0;
      std::vector<int> raw;
      for (std::size_t a = 0; a < g.space.num_actions(i); ++a) {
        raw.push_back(wt(rng));
        total += raw.back();
      }
      if (total == 0) {
        raw[0] = 1;
        total = 1;
      }
      for (int r : raw) x.prob.push_back(frac(r, total));
      out.push_back(std::move(x));
    }
    m.output.push_back(std::move(out));
    m.state_names.push_back("m" + std::to_string(s));
  }
  return m;
}

using DMatrix = std::vector<std::vector<double>>;

inline DMatrix multiply(const DMatrix& a, const DMatrix& b) {
  const std::size_t n = a.size();
  DMatrix c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

// Cesàro limit of the chain: powers of the lazy chain (I + P) / 2 converge
// to it, so repeated squaring gives the limit matrix.
inline DMatrix limit_matrix(const DMatrix& p) {
  const std::size_t n = p.size();
  DMatrix l(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) l[i][j] = 0.5 * p[i][j] + (i == j ? 0.5 : 0.0);
  for (int k = 0; k < 64; ++k) {
    l = multiply(l, l);
    for (auto& row : l) {
      double total = 0;
      for (double v : row) total += v;
      for (double& v : row) v /= total;
    }
  }
  return l;
}


// Exhaustive best response of player i against machine m over deviations that
// pick stage-1 and stage-2 actions as a function of the observed history and
// then continue with a stationary (machine-state based) pure choice.
// Continuations are valued on the chain over (machine state, last profile)
// through its limit matrix, independently of the library's MDP solvers.
inline double brute_force_best_response(const GameSpec& g, const FiniteMemoryProfile& m, Player i) {
  const std::size_t S = m.num_states, P = g.num_profiles(), own = g.space.num_actions(i);
  const auto& obj = g.objectives[i];
  const bool averaged = is_mean_payoff(obj.kind);
  auto vertex = [&](StateId s, std::size_t last) { return s * (P + 1) + last; };  // last == P: none yet
  const std::size_t V = S * (P + 1);
  // Probability that the others play so that, with own action a, profile b results.
  auto others_prob = [&](StateId s, std::size_t a, ProfileIndex b) {
    if (g.space.action(b, i) != a) return 0.0;
    double p = 1.0;
    for (Player j = 0; j < g.num_players(); ++j)
      if (j != i) p *= to_double(m.output[s][j].prob[g.space.action(b, j)]);
    return p;
  };

  std::vector<std::size_t> sigma(S, 0);
  double best = -1e300;
  for (;;) {
    DMatrix chain(V, std::vector<double>(V, 0.0));
    for (StateId s = 0; s < S; ++s)
      for (std::size_t last = 0; last <= P; ++last)
        for (ProfileIndex b = 0; b < P; ++b) {
          double p = others_prob(s, sigma[s], b);
          if (p > 0) chain[vertex(s, last)][vertex(m.step(s, b), b)] += p;
        }
    auto lim = limit_matrix(chain);
    std::vector<double> cont(V, 0.0);
    for (std::size_t v = 0; v < V; ++v) {
      for (std::size_t u = 0; u < V; ++u) {
        if (lim[v][u] < 1e-12) continue;
        if (averaged) {
          if (u % (P + 1) < P) cont[v] += lim[v][u] * to_double(obj.weights[u % (P + 1)]);
          continue;
        }
        // u is recurrent; its bottom component is the support of its limit row.
        std::vector<ProfileIndex> seen;
        for (std::size_t w = 0; w < V; ++w)
          if (lim[u][w] > 1e-12 && w % (P + 1) < P) seen.push_back(w % (P + 1));
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        if (obj.accepts_recurring(seen)) cont[v] += lim[v][u];
      }
    }
    // Depth-2 prefix: stage-1 action a1, stage-2 action chosen per stage-1 profile.
    const StateId s0 = m.initial;
    for (std::size_t a1 = 0; a1 < own; ++a1) {
      double total = 0;
      for (ProfileIndex b1 = 0; b1 < P; ++b1) {
        double p1 = others_prob(s0, a1, b1);
        if (p1 == 0) continue;
        StateId s1 = m.step(s0, b1);
        double reply = -1e300;
        for (std::size_t a2 = 0; a2 < own; ++a2) {
          double v = 0;
          for (ProfileIndex b2 = 0; b2 < P; ++b2) {
            double p2 = others_prob(s1, a2, b2);
            if (p2 > 0) v += p2 * cont[vertex(m.step(s1, b2), b2)];
          }
          reply = std::max(reply, v);
        }
        total += p1 * reply;
      }
      best = std::max(best, total);
    }
    std::size_t k = 0;
    while (k < S && ++sigma[k] == own) sigma[k++] = 0;
    if (k == S) break;
  }
  return best;
}

// max over own mixed action (2 actions) of min over coalition joint actions,
// on a uniform grid of `points` values. Equals the correlated minmax by LP
// duality; the grid error is at most range / (2 (points - 1)).
inline double own_grid_maxmin(const GameSpec& g, Player i, int points) {
  const auto& space = g.space;
  double best = -1e300;
  for (int k = 0; k < points; ++k) {
    double x = static_cast<double>(k) / (points - 1);
    double worst = 1e300;
    for (std::size_t c = 0; c < space.others_count(i); ++c) {
      double v = x * to_double(g.objectives[i].weights[space.join(i, 0, c)]) +
                 (1 - x) * to_double(g.objectives[i].weights[space.join(i, 1, c)]);
      worst = std::min(worst, v);
    }
    best = std::max(best, worst);
  }
  return best;
}

// min over correlated q on the coalition (k joint actions) of max over own
// actions, on the simplex grid with step 1/steps.
inline double coalition_grid_minmax(const GameSpec& g, Player i, int steps) {
  const auto& space = g.space;
  const std::size_t k = space.others_count(i);
  double best = 1e300;
  std::vector<int> counts(k, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
    if (pos + 1 == k) {
      counts[pos] = left;
      double worst = -1e300;
      for (std::size_t a = 0; a < space.num_actions(i); ++a) {
        double v = 0;
        for (std::size_t c = 0; c < k; ++c)
          v += counts[c] / static_cast<double>(steps) * to_double(g.objectives[i].weights[space.join(i, a, c)]);
        worst = std::max(worst, v);
      }
      best = std::min(best, worst);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[pos] = c;
      rec(pos + 1, left - c);
    }
  };
  rec(0, steps);
  return best;
}

inline GameSpec random_unit_game(std::mt19937_64& rng, std::vector<std::size_t> sizes) {
  auto g = random_game(rng, sizes, ObjectiveKind::MeanPayoffLimsup, 0, 100);
  for (auto& o : g.objectives)
    for (auto& w : o.weights) w /= 100;
  return g;
}

}  // namespace bwg::testing
