#pragma once

// Command-line front end. Every subcommand is a function returning an exit
// code, so the whole contract can be exercised in-process.

#include "bwg/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bwg::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInvalidSpec = 2,
  kThreatFailure = 3,
  kNoPlay = 4,
  kBuildFailure = 5,
  kInvalidCertificate = 6,
  kSimulationFailure = 7,
  kBlameBoundExceeded = 8,
  kUnsupported = 9,
  kIoError = 10,
};

// ---------------------------------------------------------------- logging

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// BWG_LOG_LEVEL: error, warn (default), info, debug.
inline LogLevel log_level() {
  const char* v = std::getenv("BWG_LOG_LEVEL");
  if (!v) return LogLevel::Warn;
  std::string s(v);
  if (s == "error") return LogLevel::Error;
  if (s == "info") return LogLevel::Info;
  if (s == "debug") return LogLevel::Debug;
  return LogLevel::Warn;
}

class Logger {
 public:
  explicit Logger(std::ostream& err) : err_(&err), level_(log_level()) {}
  void log(LogLevel l, const std::string& msg) const {
    static const char* names[] = {"error", "warn", "info", "debug"};
    if (l <= level_) *err_ << "[" << names[static_cast<int>(l)] << "] " << msg << '\n';
  }
  void error(const std::string& m) const { log(LogLevel::Error, m); }
  void warn(const std::string& m) const { log(LogLevel::Warn, m); }
  void info(const std::string& m) const { log(LogLevel::Info, m); }
  void debug(const std::string& m) const { log(LogLevel::Debug, m); }

 private:
  std::ostream* err_;
  LogLevel level_;
};

// ---------------------------------------------------------------- config

struct RunConfig {
  std::string subcommand;
  std::string game_path;
  std::string machine_path;
  std::string play_path;
  std::string build_method = "grim";
  std::string monitored_base = "acceptable";
  double epsilon = 0.1;
  std::optional<double> delta;
  std::vector<std::string> threat_overrides;     // player=value
  std::vector<std::string> objective_overrides;  // player=kind
  std::uint64_t seed = 1;
  std::size_t max_iter = 10000;
  double tol = 1e-6;
  std::string out;
  std::size_t runs = 100;
  std::size_t horizon = 1000;
  std::string deviator;
  std::string deviate = "pure:0";
  std::string deviation_machine;
};

class StageError : public std::runtime_error {
 public:
  StageError(int code, const std::string& msg) : std::runtime_error(msg), code(code) {}
  int code;
};

/// Player by name or 0-based index.
inline Player resolve_player(const GameSpec& g, const std::string& who) {
  for (Player i = 0; i < g.num_players(); ++i)
    if (g.players[i] == who) return i;
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(who.data(), who.data() + who.size(), v);
  if (ec == std::errc() && p == who.data() + who.size() && v < g.num_players()) return static_cast<Player>(v);
  throw StageError(kUsage, "unknown player '" + who + "'");
}

inline std::pair<std::string, std::string> split_assignment(const std::string& s, const char* flag) {
  auto p = s.find('=');
  if (p == std::string::npos || p == 0 || p + 1 == s.size())
    throw StageError(kUsage, std::string(flag) + " expects <player>=<value>, got '" + s + "'");
  return {s.substr(0, p), s.substr(p + 1)};
}

inline GameSpec load_game_checked(const RunConfig& cfg) {
  GameSpec g;
  try {
    g = load_game(cfg.game_path);
  } catch (const GameSpecError& e) {
    throw StageError(kInvalidSpec, cfg.game_path + ": " + e.what());
  } catch (const std::exception& e) {
    throw StageError(kIoError, e.what());
  }
  for (const auto& o : cfg.objective_overrides) {
    auto [who, kind_name] = split_assignment(o, "--objective");
    try {
      Player i = resolve_player(g, who);
      ObjectiveKind kind = parse_objective_kind(kind_name);
      if (is_weight_kind(kind) != g.objectives[i].uses_weights())
        throw GameSpecError("objective override for '" + who + "' must stay within weight or color kinds");
      g.objectives[i].kind = kind;
    } catch (const std::exception& e) {
      throw StageError(kInvalidSpec, e.what());
    }
  }
  return g;
}

inline PunishmentReport threats_for(const GameSpec& g, const RunConfig& cfg, const Logger& log) {
  ThreatOptions opt;
  opt.tol = cfg.tol;
  opt.max_iter = cfg.max_iter;
  opt.seed = cfg.seed;
  opt.independent.seed = cfg.seed;
  PunishmentReport r;
  try {
    r = compute_threats(g, opt);
  } catch (const std::exception& e) {
    throw StageError(kThreatFailure, std::string("threat computation failed: ") + e.what());
  }
  for (const auto& o : cfg.threat_overrides) {
    auto [who, value] = split_assignment(o, "--threat");
    try {
      override_threat(r, resolve_player(g, who), parse_rational(value));
    } catch (const std::exception& e) {
      throw StageError(kUsage, std::string("bad --threat: ") + e.what());
    }
  }
  for (const auto& t : r.players) {
    if (!t.converged) log.warn("threat of '" + g.players[t.player] + "' did not converge");
    log.info("threat " + g.players[t.player] + " " + to_string(t.method) + " correlated=" +
             format_double(to_double(t.correlated)) + " independent=" + format_double(to_double(t.independent)));
  }
  return r;
}

/// Deviation scripts for blame tests, played by one player:
///   pure:<action>             always that action
///   cycle:<a1>,<a2>,...       repeat the sequence
///   mixed:<a1>=<p1>,...       stationary mixed action
/// Actions may be labels or 0-based indices.
inline FiniteMemoryProfile scripted_deviation(const GameSpec& g, Player dev, const std::string& script) {
  auto colon = script.find(':');
  if (colon == std::string::npos) throw StageError(kUsage, "deviation script needs '<kind>:<args>'");
  std::string kind = script.substr(0, colon), args = script.substr(colon + 1);
  const std::size_t k = g.space.num_actions(dev);
  auto action = [&](const std::string& s) -> std::size_t {
    for (std::size_t a = 0; a < k; ++a)
      if (g.actions[dev][a] == s) return a;
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || v >= k)
      throw StageError(kUsage, "unknown action '" + s + "' in deviation script");
    return v;
  };
  std::vector<MixedAction> seq;
  if (kind == "pure") {
    seq.push_back(MixedAction::pure(dev, k, action(args)));
  } else if (kind == "cycle") {
    for (const auto& a : io_detail::split(args, ',')) seq.push_back(MixedAction::pure(dev, k, action(a)));
  } else if (kind == "mixed") {
    MixedAction x;
    x.player = dev;
    x.prob.assign(k, Rational(0));
    for (const auto& part : io_detail::split(args, ',')) {
      auto eq = part.find('=');
      if (eq == std::string::npos) throw StageError(kUsage, "mixed deviation needs <action>=<prob>");
      try {
        x.prob[action(part.substr(0, eq))] = parse_rational(part.substr(eq + 1));
      } catch (const StageError&) {
        throw;
      } catch (const std::exception&) {
        throw StageError(kUsage, "bad probability in '" + part + "'");
      }
    }
    if (!x.is_valid()) throw StageError(kUsage, "mixed deviation probabilities must sum to 1");
    seq.push_back(std::move(x));
  } else {
    throw StageError(kUsage, "unknown deviation kind '" + kind + "'");
  }
  FiniteMemoryProfile m;
  m.num_states = seq.size();
  m.num_profiles = g.num_profiles();
  m.initial = 0;
  for (StateId s = 0; s < seq.size(); ++s) {
    MixedProfile out;
    for (Player i = 0; i < g.num_players(); ++i)
      out.push_back(i == dev ? seq[s] : MixedAction::uniform(i, g.space.num_actions(i)));
    m.output.push_back(std::move(out));
    m.state_names.push_back("d" + std::to_string(s));
    m.next.insert(m.next.end(), m.num_profiles, (s + 1) % seq.size());
  }
  return m;
}

// ---------------------------------------------------------------- helpers

inline void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) {
    out << text;
  } else {
    try {
      write_file(cfg.out, text);
    } catch (const std::exception& e) {
      throw StageError(kIoError, e.what());
    }
  }
}

struct Built {
  EquilibriumMachine machine;
  std::optional<MonitorSpec> monitor;
  std::optional<LassoPlay> play;
};

inline LassoPlay find_play_stage(const GameSpec& g, const PunishmentReport& r, const RunConfig& cfg) {
  try {
    return find_target_play(g, r, cfg.epsilon);
  } catch (const NoFeasiblePlay& e) {
    throw StageError(kNoPlay, e.what());
  } catch (const std::exception& e) {
    throw StageError(kNoPlay, std::string("target-play search failed: ") + e.what());
  }
}

inline Built build_stage(const GameSpec& g, const PunishmentReport& r, const RunConfig& cfg, const std::string& method,
                         const Logger& log) {
  Built b;
  try {
    if (method == "grim") {
      b.play = cfg.play_path.empty() ? find_play_stage(g, r, cfg) : parse_play(g, read_file(cfg.play_path));
      b.machine = build_grim_trigger(g, *b.play, r);
      b.machine.epsilon = cfg.epsilon;
    } else if (method == "acceptable") {
      double d = cfg.delta ? *cfg.delta : select_delta(cfg.epsilon, g.num_players(), max_payoff_norm(g));
      b.machine = build_acceptable_stationary(g, d, &r);
      b.machine.epsilon = cfg.epsilon;
    } else if (method == "monitored") {
      RunConfig inner = cfg;
      inner.delta.reset();
      Built base = build_stage(g, r, inner, cfg.monitored_base, log);
      MonitorOptions mo;
      mo.delta = cfg.delta;
      mo.seed = cfg.seed;
      auto me = build_monitored_equilibrium(g, base.machine, cfg.epsilon, r, mo);
      b.machine = me.machine;
      b.monitor = me.monitor;
      b.play = base.play;
      log.info("monitor delta=" + format_double(me.monitor.delta) + " warmup=" + std::to_string(me.monitor.warmup));
    } else {
      throw StageError(kUsage, "unknown build method '" + method + "' (grim, acceptable, monitored)");
    }
  } catch (const StageError&) {
    throw;
  } catch (const MonteCarloBudgetExhausted& e) {
    throw StageError(kSimulationFailure, e.what());
  } catch (const GameSpecError& e) {
    throw StageError(kInvalidSpec, e.what());
  } catch (const std::exception& e) {
    throw StageError(kBuildFailure, std::string("build failed: ") + e.what());
  }
  return b;
}

inline EquilibriumCertificate certify_stage(const GameSpec& g, const EquilibriumMachine& m, double epsilon,
                                            const PunishmentReport& r, double tolerance) {
  try {
    return certify(g, m, epsilon, &r, tolerance);
  } catch (const UnsupportedObjective& e) {
    throw StageError(kUnsupported, std::string("cannot certify: ") + e.what());
  } catch (const std::exception& e) {
    throw StageError(kUnsupported, std::string("certification failed: ") + e.what());
  }
}

inline MachineFile load_machine_checked(const GameSpec& g, const std::string& path) {
  try {
    return load_machine(g, path);
  } catch (const GameSpecError& e) {
    throw StageError(kInvalidSpec, path + ": " + e.what());
  } catch (const std::exception& e) {
    throw StageError(kIoError, e.what());
  }
}

// ---------------------------------------------------------------- commands

inline int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  GameSpec g = load_game_checked(cfg);
  out << "valid\n";
  out << "players " << g.num_players() << '\n';
  out << "profiles " << g.num_profiles() << '\n';
  for (Player i = 0; i < g.num_players(); ++i)
    out << "player " << g.players[i] << " actions " << g.actions[i].size() << " objective "
        << to_string(g.objectives[i].kind) << '\n';
  return kOk;
}

inline int cmd_minmax(const RunConfig& cfg, std::ostream& out, const Logger& log) {
  GameSpec g = load_game_checked(cfg);
  emit(cfg, out, write_threats(g, threats_for(g, cfg, log)));
  return kOk;
}

inline int cmd_find_play(const RunConfig& cfg, std::ostream& out, const Logger& log) {
  GameSpec g = load_game_checked(cfg);
  auto r = threats_for(g, cfg, log);
  emit(cfg, out, write_play(g, find_play_stage(g, r, cfg)));
  return kOk;
}

inline int cmd_build(const RunConfig& cfg, std::ostream& out, const Logger& log) {
  GameSpec g = load_game_checked(cfg);
  auto r = threats_for(g, cfg, log);
  auto b = build_stage(g, r, cfg, cfg.build_method, log);
  emit(cfg, out, write_machine(g, b.machine, b.monitor ? &*b.monitor : nullptr));
  return kOk;
}

inline int cmd_certify(const RunConfig& cfg, std::ostream& out, const Logger& log) {
  GameSpec g = load_game_checked(cfg);
  auto mf = load_machine_checked(g, cfg.machine_path);
  auto r = threats_for(g, cfg, log);
  auto c = certify_stage(g, mf.machine, cfg.epsilon, r, cfg.tol);
  CertificateContext ctx{content_hash(read_file(cfg.game_path)), content_hash(read_file(cfg.machine_path)), cfg.seed};
  emit(cfg, out, write_certificate(g, c, ctx, &r));
  if (!c.valid) log.error("certificate invalid: " + c.diagnosis);
  return c.valid ? kOk : kInvalidCertificate;
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out, const Logger&) {
  GameSpec g = load_game_checked(cfg);
  auto mf = load_machine_checked(g, cfg.machine_path);
  SimulationOptions so;
  so.runs = cfg.runs;
  so.horizon = cfg.horizon;
  so.seed = cfg.seed;
  SimulationStats st;
  try {
    st = simulate(g, mf.machine, so, mf.monitor ? &*mf.monitor : nullptr);
  } catch (const std::exception& e) {
    throw StageError(kSimulationFailure, std::string("simulation failed: ") + e.what());
  }
  emit(cfg, out, write_simulation(g, st, cfg.seed));
  return kOk;
}

inline int cmd_blame_test(const RunConfig& cfg, std::ostream& out, const Logger& log) {
  GameSpec g = load_game_checked(cfg);
  auto mf = load_machine_checked(g, cfg.machine_path);
  if (!mf.monitor) throw StageError(kUsage, "blame-test needs a machine with a monitor section");
  Player dev = 0;
  try {
    dev = cfg.deviator.empty() ? 0 : resolve_player(g, cfg.deviator);
  } catch (const std::exception& e) {
    throw StageError(kUsage, e.what());
  }
  FiniteMemoryProfile script = cfg.deviation_machine.empty()
                                   ? scripted_deviation(g, dev, cfg.deviate)
                                   : load_machine_checked(g, cfg.deviation_machine).machine.machine;
  BlameEstimate e;
  try {
    e = blame_error_rate(g, mf.machine, *mf.monitor, dev, script, cfg.runs, cfg.horizon, cfg.seed);
  } catch (const std::exception& ex) {
    throw StageError(kSimulationFailure, std::string("blame test failed: ") + ex.what());
  }
  emit(cfg, out, write_blame(g, e, g.players[dev], cfg.seed, cfg.horizon));
  if (!e.below_bound) log.error("blame error rate not below the bound at 95% confidence");
  return e.below_bound ? kOk : kBlameBoundExceeded;
}

/// validate -> threats -> (play) -> build -> certify -> simulate, writing
/// every artifact into cfg.out. manifest.txt records each stage; on failure
/// it names the stage and exit code and earlier artifacts are kept.
inline int cmd_pipeline(const RunConfig& cfg, std::ostream& out, const Logger& log) {
  namespace fs = std::filesystem;
  const fs::path dir = cfg.out.empty() ? fs::path("bwg-out") : fs::path(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw StageError(kIoError, "cannot create '" + dir.string() + "': " + ec.message());
  std::ostringstream manifest;
  manifest << "pipeline\n";
  manifest << "game " << fs::path(cfg.game_path).filename().string() << '\n';
  manifest << "method " << cfg.build_method << '\n';
  manifest << "epsilon " << format_double(cfg.epsilon) << '\n';
  manifest << "seed " << cfg.seed << '\n';
  auto put = [&](const std::string& name, const std::string& text) {
    write_file((dir / name).string(), text);
    manifest << "artifact " << name << ' ' << content_hash(text) << '\n';
  };
  std::string stage = "validate";
  try {
    GameSpec g = load_game_checked(cfg);
    std::string game_text = read_file(cfg.game_path);
    manifest << "stage validate ok\n";
    stage = "threats";
    auto r = threats_for(g, cfg, log);
    put("threats.txt", write_threats(g, r));
    manifest << "stage threats ok\n";
    stage = "build";
    auto b = build_stage(g, r, cfg, cfg.build_method, log);
    if (b.play) put("play.txt", write_play(g, *b.play));
    std::string machine_text = write_machine(g, b.machine, b.monitor ? &*b.monitor : nullptr);
    put("machine.txt", machine_text);
    manifest << "stage build ok\n";
    stage = "certify";
    auto c = certify_stage(g, b.machine, cfg.epsilon, r, 1e-6);
    put("certificate.txt",
        write_certificate(g, c, {content_hash(game_text), content_hash(machine_text), cfg.seed}, nullptr));
    if (!c.valid) throw StageError(kInvalidCertificate, "certificate invalid: " + c.diagnosis);
    manifest << "stage certify ok\n";
    stage = "simulate";
    SimulationOptions so;
    so.runs = cfg.runs;
    so.horizon = cfg.horizon;
    so.seed = cfg.seed;
    try {
      put("simulation.tsv", write_simulation(g, simulate(g, b.machine, so, b.monitor ? &*b.monitor : nullptr), cfg.seed));
    } catch (const std::exception& e) {
      throw StageError(kSimulationFailure, std::string("simulation failed: ") + e.what());
    }
    manifest << "stage simulate ok\n";
  } catch (const StageError& e) {
    manifest << "failed " << stage << " exit " << e.code << '\n';
    manifest << "error " << e.what() << '\n';
    write_file((dir / "manifest.txt").string(), manifest.str());
    throw;
  }
  manifest << "status ok\n";
  write_file((dir / "manifest.txt").string(), manifest.str());
  out << (dir / "certificate.txt").string() << '\n';
  return kOk;
}

// ---------------------------------------------------------------- entry

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Blackwell-game equilibrium toolkit: threats, target plays, machines, certificates"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("game", cfg.game_path, "game file")->required()->check(CLI::ExistingFile);
    sub->add_option("--objective", cfg.objective_overrides, "override an objective kind, <player>=<kind>");
  };
  auto solver = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--max-iter", cfg.max_iter, "iteration cap for fixpoints")->check(CLI::PositiveNumber);
    sub->add_option("--tol", cfg.tol, "solver tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--threat", cfg.threat_overrides, "override a threat, <player>=<value>");
  };
  auto eps = [&](CLI::App* sub) {
    sub->add_option("--epsilon", cfg.epsilon, "epsilon")->check(CLI::PositiveNumber);
  };
  auto outopt = [&](CLI::App* sub, const char* what) { sub->add_option("--out", cfg.out, what); };

  auto* validate = app.add_subcommand("validate", "parse and validate a game file");
  common(validate);

  auto* minmax = app.add_subcommand("minmax", "threat levels for every player");
  common(minmax);
  solver(minmax);
  outopt(minmax, "output file");

  auto* find = app.add_subcommand("find-play", "eventually periodic play above every threat");
  common(find);
  solver(find);
  eps(find);
  outopt(find, "output file");

  auto* build = app.add_subcommand("build", "build an equilibrium machine");
  build->add_option("method", cfg.build_method, "grim, acceptable or monitored")
      ->required()
      ->check(CLI::IsMember({"grim", "acceptable", "monitored"}));
  common(build);
  solver(build);
  eps(build);
  build->add_option("--delta", cfg.delta, "delta override")->check(CLI::PositiveNumber);
  build->add_option("--play", cfg.play_path, "target play file (grim)")->check(CLI::ExistingFile);
  build->add_option("--base", cfg.monitored_base, "base for monitored: acceptable or grim")
      ->check(CLI::IsMember({"grim", "acceptable"}));
  outopt(build, "output machine file");

  auto* cert = app.add_subcommand("certify", "certify a machine as an epsilon-equilibrium");
  common(cert);
  cert->add_option("machine", cfg.machine_path, "machine file")->required()->check(CLI::ExistingFile);
  solver(cert);
  eps(cert);
  outopt(cert, "output certificate file");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo runs of a machine");
  common(sim);
  sim->add_option("machine", cfg.machine_path, "machine file")->required()->check(CLI::ExistingFile);
  sim->add_option("--seed", cfg.seed, "random seed");
  sim->add_option("--runs", cfg.runs, "number of runs")->check(CLI::PositiveNumber);
  sim->add_option("--horizon", cfg.horizon, "stages per run")->check(CLI::PositiveNumber);
  outopt(sim, "output table file");

  auto* blame = app.add_subcommand("blame-test", "misidentification rate of a monitored machine");
  common(blame);
  blame->add_option("machine", cfg.machine_path, "monitored machine file")->required()->check(CLI::ExistingFile);
  blame->add_option("--seed", cfg.seed, "random seed");
  blame->add_option("--runs", cfg.runs, "number of runs")->check(CLI::PositiveNumber);
  blame->add_option("--horizon", cfg.horizon, "stages per run")->check(CLI::PositiveNumber);
  blame->add_option("--deviator", cfg.deviator, "deviating player");
  blame->add_option("--deviate", cfg.deviate, "pure:<a> | cycle:<a>,<b>,... | mixed:<a>=<p>,...");
  blame->add_option("--deviation-machine", cfg.deviation_machine, "machine file for the deviator")
      ->check(CLI::ExistingFile);
  outopt(blame, "output report file");

  auto* pipe = app.add_subcommand("pipeline", "validate, solve threats, build, certify and simulate");
  common(pipe);
  solver(pipe);
  eps(pipe);
  pipe->add_option("--method", cfg.build_method, "grim, acceptable or monitored")
      ->check(CLI::IsMember({"grim", "acceptable", "monitored"}));
  pipe->add_option("--delta", cfg.delta, "delta override")->check(CLI::PositiveNumber);
  pipe->add_option("--base", cfg.monitored_base, "base for monitored: acceptable or grim")
      ->check(CLI::IsMember({"grim", "acceptable"}));
  pipe->add_option("--runs", cfg.runs, "simulation runs")->check(CLI::PositiveNumber);
  pipe->add_option("--horizon", cfg.horizon, "simulation horizon")->check(CLI::PositiveNumber);
  outopt(pipe, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  Logger log(err);
  try {
    if (*validate) return cmd_validate(cfg, out);
    if (*minmax) return cmd_minmax(cfg, out, log);
    if (*find) return cmd_find_play(cfg, out, log);
    if (*build) return cmd_build(cfg, out, log);
    if (*cert) return cmd_certify(cfg, out, log);
    if (*sim) return cmd_simulate(cfg, out, log);
    if (*blame) return cmd_blame_test(cfg, out, log);
    if (*pipe) return cmd_pipeline(cfg, out, log);
  } catch (const StageError& e) {
    log.error(e.what());
    return e.code;
  } catch (const std::exception& e) {
    log.error(e.what());
    return kUsage;
  }
  return kUsage;
}

}  // namespace bwg::cli
