#pragma once

// Equilibrium certificates: exact on-path values, best-response values and
// deviation gains for every player, plus the minmax floor check.

#include "bwg/repeated.hpp"
#include "bwg/verify.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bwg {

struct PlayerCertificate {
  Player player = 0;
  Rational on_path = 0;
  Rational best_response = 0;
  Rational gain = 0;  // best_response - on_path
  std::optional<Rational> threat_correlated;
  bool floor_ok = true;  // on_path >= threat_correlated - epsilon
};

struct EquilibriumCertificate {
  std::vector<PlayerCertificate> players;
  double epsilon = 0.0;
  double tolerance = 1e-6;
  ConstructionMethod method = ConstructionMethod::GrimTrigger;
  Rational max_gain = 0;
  bool gains_ok = false;
  bool floor_ok = false;
  bool valid = false;
  std::optional<Player> violating;
  std::string diagnosis;
};

/// Certifies `m` as an ε-equilibrium. Valid iff every deviation gain is at
/// most ε + tolerance and every on-path value is at least the correlated
/// threat minus ε (minus tolerance). Threats are computed when not supplied.
/// An invalid certificate names the first violating player.
inline EquilibriumCertificate certify(const GameSpec& game, const EquilibriumMachine& m, double epsilon,
                                      const PunishmentReport* threats = nullptr, double tolerance = 1e-6) {
  m.machine.validate(game);
  PunishmentReport computed;
  if (!threats) {
    computed = compute_threats(game);
    threats = &computed;
  }
  const Rational eps = from_double(epsilon), tol = from_double(tolerance);
  EquilibriumCertificate cert;
  cert.epsilon = epsilon;
  cert.tolerance = tolerance;
  cert.method = m.method;
  cert.gains_ok = cert.floor_ok = true;
  for (Player i = 0; i < game.num_players(); ++i) {
    PlayerCertificate pc;
    pc.player = i;
    pc.on_path = on_path_value(game, m, i);
    pc.best_response = best_response_value(game, m, i);
    pc.gain = pc.best_response - pc.on_path;
    if (i < threats->players.size()) {
      pc.threat_correlated = threats->players[i].correlated;
      pc.floor_ok = pc.on_path >= *pc.threat_correlated - eps - tol;
    }
    cert.max_gain = std::max<Rational>(cert.max_gain, pc.gain);
    if (pc.gain > eps + tol && cert.gains_ok) {
      cert.gains_ok = false;
      cert.violating = i;
      cert.diagnosis = "player '" + game.players[i] + "' gains " + std::to_string(to_double(pc.gain)) +
                       " by deviating";
    }
    if (!pc.floor_ok && cert.floor_ok) {
      cert.floor_ok = false;
      if (!cert.violating) {
        cert.violating = i;
        cert.diagnosis = "player '" + game.players[i] + "' is paid below the correlated threat minus epsilon";
      }
    }
    cert.players.push_back(std::move(pc));
  }
  cert.valid = cert.gains_ok && cert.floor_ok;
  return cert;
}

}  // namespace bwg
