#pragma once

// Line-oriented text formats. '#' starts a comment; tokens are separated by
// whitespace.
//
// Game file:
//   players <name>...
//   actions <player> <label>...          (one line per player)
//   objective <player> <kind>            (one line per player)
//   profile <a_1> ... <a_n> | <v_1> ... <v_n>
// There is one profile line per action profile. v_i is a rational weight for
// weight objectives and a nonnegative integer color/priority otherwise.
//
// Machine file:
//   states <name>...
//   initial <state>
//   trans <state> <a_1,...,a_n> -> <state>
//   trans <state> * -> <state>           (default for profiles not listed)
//   out <state> <player> <label>:<prob>...
// Annotations: method, epsilon, delta, class <state> on-path|punish <player>,
// and for monitored machines monitor-center / monitor-delta / monitor-warmup /
// monitor-blame / monitor-false-alarm.

#include "bwg/certify.hpp"
#include "bwg/equilibrium.hpp"
#include "bwg/machine.hpp"
#include "bwg/repeated.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace bwg {

class ParseError : public GameSpecError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& msg)
      : GameSpecError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line(line),
        column(column) {}
  std::size_t line, column;
};

namespace io_detail {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

struct Line {
  std::size_t number;
  std::vector<Token> tokens;
};

inline std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r')) ++i;
      std::size_t start = i;
      while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t' && raw[i] != '\r') ++i;
      if (i > start) line.tokens.push_back({std::string(raw.substr(start, i - start)), start + 1});
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

[[noreturn]] inline void fail(const Line& l, std::size_t tok, const std::string& msg) {
  std::size_t col = tok < l.tokens.size() ? l.tokens[tok].column
                                          : (l.tokens.empty() ? 1 : l.tokens.back().column + l.tokens.back().text.size());
  throw ParseError(l.number, col, msg);
}

inline Rational rational_at(const Line& l, std::size_t tok) {
  if (tok >= l.tokens.size()) fail(l, tok, "expected a number");
  try {
    return parse_rational(l.tokens[tok].text);
  } catch (const std::exception&) {
    fail(l, tok, "'" + l.tokens[tok].text + "' is not a number");
  }
}

inline std::uint64_t integer_at(const Line& l, std::size_t tok) {
  if (tok >= l.tokens.size()) fail(l, tok, "expected an integer");
  const auto& s = l.tokens[tok].text;
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) fail(l, tok, "'" + s + "' is not a nonnegative integer");
  return v;
}

inline double double_at(const Line& l, std::size_t tok) {
  if (tok >= l.tokens.size()) fail(l, tok, "expected a number");
  const auto& s = l.tokens[tok].text;
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) fail(l, tok, "'" + s + "' is not a number");
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t p = s.find(sep, start);
    out.push_back(s.substr(start, p == std::string::npos ? std::string::npos : p - start));
    if (p == std::string::npos) return out;
    start = p + 1;
  }
}

}  // namespace io_detail

/// Shortest round-trip decimal form.
inline std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

/// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string content_hash(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

// ---------------------------------------------------------------- games

inline GameSpec parse_game(std::string_view text) {
  using namespace io_detail;
  auto lines = tokenize(text);
  std::vector<std::string> players;
  std::map<std::string, const Line*> actions_line, objective_line;
  std::vector<const Line*> profile_lines;
  const Line* players_line = nullptr;
  for (const auto& l : lines) {
    const auto& key = l.tokens[0].text;
    if (key == "players") {
      if (players_line) fail(l, 0, "duplicate 'players' line");
      players_line = &l;
      if (l.tokens.size() < 2) fail(l, 1, "'players' needs at least one name");
      for (std::size_t t = 1; t < l.tokens.size(); ++t) {
        for (const auto& p : players)
          if (p == l.tokens[t].text) fail(l, t, "duplicate player '" + p + "'");
        players.push_back(l.tokens[t].text);
      }
    } else if (key == "actions" || key == "objective") {
      if (!players_line) fail(l, 0, "'" + key + "' before 'players'");
      if (l.tokens.size() < 2) fail(l, 1, "expected a player name");
      const auto& who = l.tokens[1].text;
      if (std::find(players.begin(), players.end(), who) == players.end()) fail(l, 1, "unknown player '" + who + "'");
      auto& slot = key == "actions" ? actions_line : objective_line;
      if (slot.count(who)) fail(l, 0, "duplicate '" + key + "' line for player '" + who + "'");
      slot[who] = &l;
    } else if (key == "profile") {
      profile_lines.push_back(&l);
    } else {
      fail(l, 0, "unknown keyword '" + key + "'");
    }
  }
  if (!players_line) throw ParseError(1, 1, "missing 'players' line");
  const std::size_t n = players.size();
  std::vector<std::vector<std::string>> actions(n);
  std::vector<ObjectiveSpec> objectives(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = actions_line.find(players[i]);
    if (it == actions_line.end())
      throw GameSpecError("missing 'actions' line for player '" + players[i] + "'");
    const Line& l = *it->second;
    if (l.tokens.size() < 3) fail(l, 2, "player '" + players[i] + "' needs at least one action");
    for (std::size_t t = 2; t < l.tokens.size(); ++t) {
      const auto& lab = l.tokens[t].text;
      if (lab.find(',') != std::string::npos || lab == "*" || lab == "|" || lab == "->")
        fail(l, t, "reserved character in action label '" + lab + "'");
      if (std::find(actions[i].begin(), actions[i].end(), lab) != actions[i].end())
        fail(l, t, "duplicate action '" + lab + "'");
      actions[i].push_back(lab);
    }
    auto jt = objective_line.find(players[i]);
    if (jt == objective_line.end())
      throw GameSpecError("missing 'objective' line for player '" + players[i] + "'");
    const Line& o = *jt->second;
    if (o.tokens.size() != 3) fail(o, std::min<std::size_t>(o.tokens.size(), 3), "expected 'objective <player> <kind>'");
    try {
      objectives[i].kind = parse_objective_kind(o.tokens[2].text);
    } catch (const std::exception&) {
      fail(o, 2, "unknown objective kind '" + o.tokens[2].text + "'");
    }
  }
  std::vector<std::size_t> sizes;
  for (const auto& a : actions) sizes.push_back(a.size());
  ProfileSpace space(sizes);
  const std::size_t count = space.count();
  for (std::size_t i = 0; i < n; ++i) {
    if (objectives[i].uses_weights()) objectives[i].weights.assign(count, Rational(0));
    else objectives[i].colors.assign(count, 0);
  }
  std::vector<bool> seen(count, false);
  for (const Line* lp : profile_lines) {
    const Line& l = *lp;
    if (l.tokens.size() != 2 * n + 2 || l.tokens[n + 1].text != "|")
      fail(l, std::min(l.tokens.size(), n + 1), "expected 'profile' followed by " + std::to_string(n) +
                                                    " actions, '|', and " + std::to_string(n) + " values");
    std::vector<std::size_t> act(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& lab = l.tokens[1 + i].text;
      auto it = std::find(actions[i].begin(), actions[i].end(), lab);
      if (it == actions[i].end()) fail(l, 1 + i, "unknown action '" + lab + "' for player '" + players[i] + "'");
      act[i] = static_cast<std::size_t>(it - actions[i].begin());
    }
    ProfileIndex a = space.encode(act);
    if (seen[a]) fail(l, 0, "duplicate profile entry");
    seen[a] = true;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t tok = n + 2 + i;
      if (objectives[i].uses_weights()) {
        objectives[i].weights[a] = rational_at(l, tok);
      } else {
        const auto& s = l.tokens[tok].text;
        if (!s.empty() && s[0] == '-')
          fail(l, tok, "negative priority " + s + " for player '" + players[i] + "'");
        auto v = integer_at(l, tok);
        if (v > UINT32_MAX) fail(l, tok, "priority too large");
        objectives[i].colors[a] = static_cast<std::uint32_t>(v);
      }
    }
  }
  GameSpec g;
  g.players = players;
  g.actions = actions;
  g.objectives = objectives;
  g.space = space;
  for (ProfileIndex a = 0; a < count; ++a)
    if (!seen[a]) throw GameSpecError("missing profile entry for (" + g.profile_label(a) + ")");
  g.validate();
  return g;
}

inline GameSpec load_game(const std::string& path) { return parse_game(read_file(path)); }

inline std::string write_game(const GameSpec& g) {
  std::ostringstream out;
  out << "players";
  for (const auto& p : g.players) out << ' ' << p;
  out << '\n';
  for (Player i = 0; i < g.num_players(); ++i) {
    out << "actions " << g.players[i];
    for (const auto& a : g.actions[i]) out << ' ' << a;
    out << '\n';
  }
  for (Player i = 0; i < g.num_players(); ++i) out << "objective " << g.players[i] << ' ' << to_string(g.objectives[i].kind) << '\n';
  for (ProfileIndex a = 0; a < g.num_profiles(); ++a) {
    out << "profile";
    for (Player i = 0; i < g.num_players(); ++i) out << ' ' << g.actions[i][g.space.action(a, i)];
    out << " |";
    for (Player i = 0; i < g.num_players(); ++i) {
      if (g.objectives[i].uses_weights()) out << ' ' << to_string(g.objectives[i].weights[a]);
      else out << ' ' << g.objectives[i].colors[a];
    }
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------- plays

inline std::string write_play(const GameSpec& g, const LassoPlay& p) {
  std::ostringstream out;
  out << "prefix";
  for (auto a : p.prefix) out << ' ' << g.profile_label(a);
  out << "\ncycle";
  for (auto a : p.cycle) out << ' ' << g.profile_label(a);
  out << '\n';
  for (Player i = 0; i < g.num_players(); ++i)
    out << "value " << g.players[i] << ' ' << to_string(eval_lasso(g.objectives[i], p)) << '\n';
  return out.str();
}

inline ProfileIndex parse_profile_label(const GameSpec& g, const io_detail::Line& l, std::size_t tok) {
  auto parts = io_detail::split(l.tokens[tok].text, ',');
  if (parts.size() != g.num_players())
    io_detail::fail(l, tok, "profile '" + l.tokens[tok].text + "' needs " + std::to_string(g.num_players()) + " actions");
  std::vector<std::size_t> act(parts.size());
  for (Player i = 0; i < parts.size(); ++i) {
    const auto& labels = g.actions[i];
    auto it = std::find(labels.begin(), labels.end(), parts[i]);
    if (it == labels.end())
      io_detail::fail(l, tok, "unknown action '" + parts[i] + "' for player '" + g.players[i] + "'");
    act[i] = static_cast<std::size_t>(it - labels.begin());
  }
  return g.space.encode(act);
}

inline LassoPlay parse_play(const GameSpec& g, std::string_view text) {
  LassoPlay p;
  bool have_cycle = false;
  for (const auto& l : io_detail::tokenize(text)) {
    const auto& key = l.tokens[0].text;
    if (key == "value") continue;
    if (key != "prefix" && key != "cycle") io_detail::fail(l, 0, "unknown keyword '" + key + "'");
    auto& dst = key == "prefix" ? p.prefix : p.cycle;
    have_cycle |= key == "cycle";
    for (std::size_t t = 1; t < l.tokens.size(); ++t) dst.push_back(parse_profile_label(g, l, t));
  }
  if (!have_cycle || p.cycle.empty()) throw GameSpecError("play has an empty cycle");
  return p;
}

// ---------------------------------------------------------------- machines

struct MachineFile {
  EquilibriumMachine machine;
  std::optional<MonitorSpec> monitor;
};

inline std::string write_machine(const GameSpec& g, const EquilibriumMachine& em, const MonitorSpec* monitor = nullptr) {
  const auto& m = em.machine;
  std::ostringstream out;
  out << "method " << to_string(em.method) << '\n';
  if (em.epsilon > 0) out << "epsilon " << format_double(em.epsilon) << '\n';
  if (em.delta > 0) out << "delta " << format_double(em.delta) << '\n';
  out << "states";
  for (const auto& s : m.state_names) out << ' ' << s;
  out << "\ninitial " << m.state_names[m.initial] << '\n';
  for (StateId s = 0; s < m.num_states; ++s) {
    if (s < em.classes.size()) {
      out << "class " << m.state_names[s];
      if (em.classes[s].punishing) out << " punish " << g.players[em.classes[s].target] << '\n';
      else out << " on-path\n";
    }
  }
  for (StateId s = 0; s < m.num_states; ++s) {
    for (Player i = 0; i < g.num_players(); ++i) {
      out << "out " << m.state_names[s] << ' ' << g.players[i];
      const auto& x = m.output[s][i];
      for (std::size_t a = 0; a < x.prob.size(); ++a) out << ' ' << g.actions[i][a] << ':' << to_string(x.prob[a]);
      out << '\n';
    }
  }
  for (StateId s = 0; s < m.num_states; ++s) {
    // Most frequent target becomes the default row.
    std::map<StateId, std::size_t> freq;
    for (ProfileIndex a = 0; a < m.num_profiles; ++a) ++freq[m.step(s, a)];
    StateId common = freq.begin()->first;
    for (auto [t, c] : freq)
      if (c > freq[common]) common = t;
    for (ProfileIndex a = 0; a < m.num_profiles; ++a)
      if (m.step(s, a) != common)
        out << "trans " << m.state_names[s] << ' ' << g.profile_label(a) << " -> " << m.state_names[m.step(s, a)] << '\n';
    out << "trans " << m.state_names[s] << " * -> " << m.state_names[common] << '\n';
  }
  if (monitor) {
    for (Player i = 0; i < g.num_players(); ++i)
      out << "monitor-center " << g.players[i] << ' ' << to_string(monitor->center[i]) << '\n';
    out << "monitor-delta " << format_double(monitor->delta) << '\n';
    out << "monitor-warmup " << monitor->warmup << '\n';
    out << "monitor-blame " << monitor->blame.scoring << ' ' << monitor->blame.tie_break << '\n';
    out << "monitor-false-alarm " << format_double(monitor->false_alarm_bound) << '\n';
  }
  return out.str();
}

inline MachineFile parse_machine(const GameSpec& g, std::string_view text) {
  using namespace io_detail;
  auto lines = tokenize(text);
  MachineFile mf;
  auto& em = mf.machine;
  auto& m = em.machine;
  std::map<std::string, StateId> index;
  const Line* states_line = nullptr;
  for (const auto& l : lines)
    if (l.tokens[0].text == "states") {
      if (states_line) fail(l, 0, "duplicate 'states' line");
      states_line = &l;
      if (l.tokens.size() < 2) fail(l, 1, "a machine needs at least one state");
      for (std::size_t t = 1; t < l.tokens.size(); ++t) {
        if (index.count(l.tokens[t].text)) fail(l, t, "duplicate state '" + l.tokens[t].text + "'");
        index[l.tokens[t].text] = m.state_names.size();
        m.state_names.push_back(l.tokens[t].text);
      }
    }
  if (!states_line) throw ParseError(1, 1, "missing 'states' line");
  const std::size_t S = m.state_names.size(), P = g.num_profiles(), n = g.num_players();
  m.num_states = S;
  m.num_profiles = P;
  const StateId unset = static_cast<StateId>(-1);
  m.next.assign(S * P, unset);
  std::vector<StateId> fallback(S, unset);
  m.output.assign(S, MixedProfile(n));
  std::vector<std::vector<bool>> have_out(S, std::vector<bool>(n, false));
  em.classes.assign(S, StateClass::on_path());
  bool have_initial = false;
  MonitorSpec mon;
  mon.center.assign(n, Rational(0));
  bool any_monitor = false;
  auto state_at = [&](const Line& l, std::size_t t) {
    if (t >= l.tokens.size()) fail(l, t, "expected a state name");
    auto it = index.find(l.tokens[t].text);
    if (it == index.end()) fail(l, t, "unknown state '" + l.tokens[t].text + "'");
    return it->second;
  };
  auto player_at = [&](const Line& l, std::size_t t) -> Player {
    if (t >= l.tokens.size()) fail(l, t, "expected a player name");
    for (Player i = 0; i < n; ++i)
      if (g.players[i] == l.tokens[t].text) return i;
    fail(l, t, "unknown player '" + l.tokens[t].text + "'");
  };
  for (const auto& l : lines) {
    const auto& key = l.tokens[0].text;
    if (key == "states") continue;
    if (key == "initial") {
      m.initial = state_at(l, 1);
      have_initial = true;
    } else if (key == "method") {
      if (l.tokens.size() != 2) fail(l, 1, "expected 'method <name>'");
      try {
        em.method = parse_method(l.tokens[1].text);
      } catch (const std::exception&) {
        fail(l, 1, "unknown method '" + l.tokens[1].text + "'");
      }
    } else if (key == "epsilon") {
      em.epsilon = double_at(l, 1);
    } else if (key == "delta") {
      em.delta = double_at(l, 1);
    } else if (key == "class") {
      StateId s = state_at(l, 1);
      if (l.tokens.size() == 3 && l.tokens[2].text == "on-path") em.classes[s] = StateClass::on_path();
      else if (l.tokens.size() == 4 && l.tokens[2].text == "punish") em.classes[s] = StateClass::punish(player_at(l, 3));
      else fail(l, 2, "expected 'on-path' or 'punish <player>'");
    } else if (key == "trans") {
      if (l.tokens.size() != 5 || l.tokens[3].text != "->") fail(l, 0, "expected 'trans <state> <profile> -> <state>'");
      StateId s = state_at(l, 1), t = state_at(l, 4);
      if (l.tokens[2].text == "*") {
        if (fallback[s] != unset) fail(l, 2, "duplicate default transition");
        fallback[s] = t;
      } else {
        ProfileIndex a = parse_profile_label(g, l, 2);
        if (m.next[s * P + a] != unset) fail(l, 2, "duplicate transition");
        m.next[s * P + a] = t;
      }
    } else if (key == "out") {
      StateId s = state_at(l, 1);
      Player i = player_at(l, 2);
      if (have_out[s][i]) fail(l, 0, "duplicate output row");
      have_out[s][i] = true;
      MixedAction x;
      x.player = i;
      x.prob.assign(g.space.num_actions(i), Rational(0));
      for (std::size_t t = 3; t < l.tokens.size(); ++t) {
        auto parts = split(l.tokens[t].text, ':');
        if (parts.size() != 2) fail(l, t, "expected '<action>:<probability>'");
        auto it = std::find(g.actions[i].begin(), g.actions[i].end(), parts[0]);
        if (it == g.actions[i].end()) fail(l, t, "unknown action '" + parts[0] + "'");
        try {
          x.prob[static_cast<std::size_t>(it - g.actions[i].begin())] = parse_rational(parts[1]);
        } catch (const std::exception&) {
          fail(l, t, "'" + parts[1] + "' is not a probability");
        }
      }
      if (!x.is_valid()) fail(l, 3, "probabilities must be nonnegative and sum to 1");
      m.output[s][i] = std::move(x);
    } else if (key == "monitor-center") {
      any_monitor = true;
      mon.center[player_at(l, 1)] = rational_at(l, 2);
    } else if (key == "monitor-delta") {
      any_monitor = true;
      mon.delta = double_at(l, 1);
    } else if (key == "monitor-warmup") {
      any_monitor = true;
      mon.warmup = integer_at(l, 1);
    } else if (key == "monitor-blame") {
      any_monitor = true;
      if (l.tokens.size() != 3) fail(l, 1, "expected 'monitor-blame <scoring> <tie-break>'");
      if (l.tokens[1].text != "excess-nll") fail(l, 1, "unsupported blame scoring '" + l.tokens[1].text + "'");
      if (l.tokens[2].text != "lowest-index") fail(l, 2, "unsupported tie break '" + l.tokens[2].text + "'");
    } else if (key == "monitor-false-alarm") {
      any_monitor = true;
      mon.false_alarm_bound = double_at(l, 1);
    } else {
      fail(l, 0, "unknown keyword '" + key + "'");
    }
  }
  if (!have_initial) throw GameSpecError("machine has no 'initial' line");
  for (StateId s = 0; s < S; ++s) {
    for (Player i = 0; i < n; ++i)
      if (!have_out[s][i])
        throw GameSpecError("missing output for player '" + g.players[i] + "' in state '" + m.state_names[s] + "'");
    for (ProfileIndex a = 0; a < P; ++a) {
      auto& t = m.next[s * P + a];
      if (t == unset) t = fallback[s];
      if (t == unset)
        throw GameSpecError("missing transition from state '" + m.state_names[s] + "' on (" + g.profile_label(a) + ")");
    }
  }
  m.validate(g);
  if (any_monitor) {
    if (!(mon.delta > 0)) throw GameSpecError("monitor needs a positive monitor-delta");
    mf.monitor = mon;
  }
  return mf;
}

inline MachineFile load_machine(const GameSpec& g, const std::string& path) { return parse_machine(g, read_file(path)); }

// ---------------------------------------------------------------- reports

inline std::string write_threats(const GameSpec& g, const PunishmentReport& r) {
  std::ostringstream out;
  for (const auto& t : r.players) {
    const auto& name = g.players[t.player];
    out << "threat " << name << '\n';
    out << "  method " << to_string(t.method) << '\n';
    out << "  correlated " << to_string(t.correlated) << '\n';
    out << "  independent " << to_string(t.independent) << '\n';
    out << "  error-bound " << format_double(t.error_bound) << '\n';
    out << "  converged " << (t.converged ? "true" : "false") << '\n';
    out << "  monotone " << (t.monotone ? "true" : "false") << '\n';
    if (t.bracket_hi > t.bracket_lo)
      out << "  bracket " << format_double(t.bracket_lo) << ' ' << format_double(t.bracket_hi) << '\n';
    if (t.iterations) out << "  iterations " << t.iterations << '\n';
    for (Player j = 0; j < g.num_players(); ++j) {
      if (j == t.player) continue;
      out << "  punish " << g.players[j];
      const auto& x = t.punishment[j];
      for (std::size_t a = 0; a < x.prob.size(); ++a) out << ' ' << g.actions[j][a] << ':' << to_string(x.prob[a]);
      out << '\n';
    }
  }
  return out.str();
}

struct CertificateContext {
  std::string game_hash;
  std::string machine_hash;
  std::uint64_t seed = 0;
};

inline std::string write_certificate(const GameSpec& g, const EquilibriumCertificate& c, const CertificateContext& ctx,
                                     const PunishmentReport* threats = nullptr) {
  std::ostringstream out;
  out << "certificate\n";
  out << "game " << ctx.game_hash << '\n';
  out << "machine " << ctx.machine_hash << '\n';
  out << "method " << to_string(c.method) << '\n';
  out << "epsilon " << format_double(c.epsilon) << '\n';
  out << "tolerance " << format_double(c.tolerance) << '\n';
  out << "seed " << ctx.seed << '\n';
  for (const auto& p : c.players) {
    out << "player " << g.players[p.player] << '\n';
    out << "  on-path " << to_string(p.on_path) << " (" << format_double(to_double(p.on_path)) << ")\n";
    out << "  best-response " << to_string(p.best_response) << " (" << format_double(to_double(p.best_response)) << ")\n";
    out << "  gain " << to_string(p.gain) << " (" << format_double(to_double(p.gain)) << ")\n";
    if (p.threat_correlated)
      out << "  threat-correlated " << to_string(*p.threat_correlated) << " ("
          << format_double(to_double(*p.threat_correlated)) << ")\n";
    out << "  floor " << (p.floor_ok ? "ok" : "violated") << '\n';
  }
  out << "max-gain " << to_string(c.max_gain) << " (" << format_double(to_double(c.max_gain)) << ")\n";
  out << "gains " << (c.gains_ok ? "ok" : "violated") << '\n';
  out << "floor " << (c.floor_ok ? "ok" : "violated") << '\n';
  if (c.violating) out << "violating " << g.players[*c.violating] << '\n';
  if (!c.diagnosis.empty()) out << "diagnosis " << c.diagnosis << '\n';
  out << "valid " << (c.valid ? "true" : "false") << '\n';
  if (threats) out << write_threats(g, *threats);
  return out.str();
}

/// Per-player running-average summary plus one row per recorded sample.
inline std::string write_simulation(const GameSpec& g, const SimulationStats& st, std::uint64_t seed) {
  std::ostringstream out;
  out << "# runs " << st.runs.size() << " horizon " << st.horizon << " seed " << seed << '\n';
  out << "# trigger-rate " << format_double(st.trigger_rate) << '\n';
  out << "player\tmean\tstddev\n";
  for (Player i = 0; i < g.num_players(); ++i)
    out << g.players[i] << '\t' << format_double(st.mean_average[i]) << '\t' << format_double(st.stddev_average[i])
        << '\n';
  out << "\nrun\ttriggered\tstage\tblamed";
  for (const auto& p : g.players) out << '\t' << p;
  out << '\n';
  for (std::size_t r = 0; r < st.runs.size(); ++r) {
    const auto& rec = st.runs[r];
    out << r << '\t' << (rec.triggered ? 1 : 0) << '\t' << rec.trigger_stage << '\t'
        << (rec.triggered ? g.players[rec.blamed] : "-");
    for (double v : rec.final_average) out << '\t' << format_double(v);
    out << '\n';
  }
  return out.str();
}

inline std::string write_blame(const GameSpec& g, const BlameEstimate& e, const std::string& deviator_name,
                               std::uint64_t seed, std::size_t horizon) {
  std::ostringstream out;
  out << "blame-test\n";
  out << "deviator " << deviator_name << '\n';
  out << "runs " << e.runs << '\n';
  out << "horizon " << horizon << '\n';
  out << "seed " << seed << '\n';
  out << "triggers " << e.triggers << '\n';
  out << "misblamed " << e.misblamed << '\n';
  out << "rate " << format_double(e.rate) << '\n';
  out << "ci95 " << format_double(e.ci.low) << ' ' << format_double(e.ci.high) << '\n';
  out << "bound " << format_double(e.bound) << '\n';
  out << "below-bound " << (e.below_bound ? "true" : "false") << '\n';
  (void)g;
  return out.str();
}

}  // namespace bwg
