#include "helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace bwg;
using namespace bwg::testing;

namespace {

// Running averages of a machine with pure outputs, followed directly.
std::vector<std::vector<double>> pure_running_averages(const GameSpec& g, const FiniteMemoryProfile& m,
                                                       std::size_t horizon) {
  std::vector<std::vector<double>> avg;
  std::vector<double> sum(g.num_players(), 0.0);
  StateId s = m.initial;
  for (std::size_t t = 1; t <= horizon; ++t) {
    std::vector<std::size_t> acts;
    for (Player i = 0; i < g.num_players(); ++i) {
      auto sup = m.output[s][i].support();
      EXPECT_EQ(sup.size(), 1u);
      acts.push_back(sup[0]);
    }
    ProfileIndex a = g.space.encode(acts);
    std::vector<double> row;
    for (Player i = 0; i < g.num_players(); ++i) {
      sum[i] += to_double(g.objectives[i].weights[a]);
      row.push_back(sum[i] / static_cast<double>(t));
    }
    avg.push_back(row);
    s = m.step(s, a);
  }
  return avg;
}

}  // namespace

TEST(SelectDelta, SatisfiesBudgetAndIsNearlyTight) {
  double d = select_delta(1.0, 2, 1.0);
  EXPECT_NEAR(d, 0.02145, 5e-5);
  for (auto [eps, n, norm] : {std::tuple{1.0, 2ul, 1.0}, {0.1, 3ul, 4.0}, {0.05, 2ul, 1.0}, {2.0, 5ul, 10.0}}) {
    double x = select_delta(eps, n, norm);
    EXPECT_GT(x, 0.0);
    EXPECT_LT(delta_budget(x, n, norm), eps);
    EXPECT_GE(delta_budget(x * 1.001, n, norm), eps * 0.999);
  }
  // Direct form of the budget.
  EXPECT_NEAR(delta_budget(0.01, 2, 1.0), 0.04 + 4 * (std::sqrt(0.02) + 0.01), 1e-12);
}

TEST(TargetPlay, PrisonersDilemmaCooperates) {
  auto g = load_fixture("pd.game");
  auto r = compute_threats(g);
  auto play = find_target_play(g, r, 0.1);
  EXPECT_TRUE(play.prefix.empty());
  EXPECT_EQ(play.cycle, (std::vector<ProfileIndex>{profile(g, {"C", "C"})}));
}

TEST(TargetPlay, SharedBuchiTarget) {
  auto g = load_fixture("shared_target_buchi.game");
  auto play = find_target_play(g, compute_threats(g), 0.1);
  EXPECT_EQ(play.cycle, (std::vector<ProfileIndex>{profile(g, {"A", "A"})}));
}

TEST(TargetPlay, MeetsThresholdsOnRandomGames) {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 15; ++rep) {
    auto g = random_game(rng, rep % 2 ? std::vector<std::size_t>{2, 2, 2} : std::vector<std::size_t>{3, 2},
                         ObjectiveKind::MeanPayoffLiminf, -2, 4);
    auto r = compute_threats(g);
    auto play = find_target_play(g, r, 0.05);
    for (Player i = 0; i < g.num_players(); ++i)
      EXPECT_GE(eval_lasso(g.objectives[i], play), r.players[i].independent - frac(1, 20));
  }
}

TEST(TargetPlay, InfeasibleNamesBindingPlayers) {
  auto g = load_fixture("pd.game");
  auto r = compute_threats(g);
  override_threat(r, 1, Rational(5));
  try {
    find_target_play(g, r, 0.1);
    FAIL() << "expected NoFeasiblePlay";
  } catch (const NoFeasiblePlay& e) {
    EXPECT_EQ(e.binding, std::vector<Player>{1});
    EXPECT_NE(std::string(e.what()).find("col"), std::string::npos);
  }
}

TEST(TargetPlay, EstimatedThreatsRejected) {
  auto g = load_fixture("limsup_weight.game");
  EXPECT_THROW(find_target_play(g, compute_threats(g), 0.1), ConstructionError);
}

TEST(GrimTrigger, PrisonersDilemmaStructure) {
  auto g = load_fixture("pd.game");
  auto r = compute_threats(g);
  auto em = build_grim_trigger(g, find_target_play(g, r, 0.1), r);
  ASSERT_EQ(em.machine.num_states, 3u);
  EXPECT_EQ(em.classes[em.machine.initial], StateClass::on_path());
  EXPECT_TRUE(em.punishments_absorbing());
  for (Player j = 0; j < 2; ++j) {
    auto p = em.punishment_state(j);
    ASSERT_TRUE(p);
    EXPECT_EQ(em.machine.output[*p][1 - j].support(), std::vector<std::size_t>{1});  // D
  }
  // Unilateral deviation by row leads to punish-row; joint deviation to the lowest index.
  StateId s0 = em.machine.initial;
  EXPECT_EQ(em.machine.step(s0, profile(g, {"C", "C"})), s0);
  EXPECT_EQ(em.machine.step(s0, profile(g, {"D", "C"})), *em.punishment_state(0));
  EXPECT_EQ(em.machine.step(s0, profile(g, {"C", "D"})), *em.punishment_state(1));
  EXPECT_EQ(em.machine.step(s0, profile(g, {"D", "D"})), *em.punishment_state(0));
  auto cert = certify(g, em, 0.1, &r);
  EXPECT_TRUE(cert.valid);
  EXPECT_EQ(cert.max_gain, Rational(0));
}

TEST(GrimTrigger, SinglePlayerHasNoPunishments) {
  auto g = load_fixture("single_player.game");
  auto r = compute_threats(g);
  auto em = build_grim_trigger(g, find_target_play(g, r, 0.1), r);
  EXPECT_FALSE(em.punishment_state(0));
  for (const auto& c : em.classes) EXPECT_FALSE(c.punishing);
  EXPECT_TRUE(certify(g, em, 0.1, &r).valid);
}

TEST(GrimTrigger, RandomGamesCertify) {
  std::mt19937_64 rng(47);
  for (int rep = 0; rep < 10; ++rep) {
    auto g = random_game(rng, {2, 3}, rep % 2 ? ObjectiveKind::Buchi : ObjectiveKind::MeanPayoffLimsup, -1, 3, 1);
    auto r = compute_threats(g);
    auto em = build_grim_trigger(g, find_target_play(g, r, 0.1), r);
    EXPECT_TRUE(em.punishments_absorbing());
    EXPECT_TRUE(certify(g, em, 0.1, &r).valid) << rep;
  }
}

TEST(AcceptableStationary, PrisonersDilemmaAndPennies) {
  auto pd = load_fixture("pd.game");
  auto em = build_acceptable_stationary(pd, 0.0);
  ASSERT_EQ(em.machine.num_states, 1u);
  EXPECT_EQ(em.machine.output[0][0].support(), std::vector<std::size_t>{1});
  EXPECT_EQ(em.machine.output[0][1].support(), std::vector<std::size_t>{1});
  EXPECT_TRUE(certify(pd, em, 0.0).valid);

  auto mp = load_fixture("mp_meanpayoff.game");
  auto em2 = build_acceptable_stationary(mp, 0.0);
  for (Player i = 0; i < 2; ++i) EXPECT_EQ(em2.machine.output[0][i].prob, MixedAction::uniform(i, 2).prob);
  EXPECT_TRUE(certify(mp, em2, 0.0).valid);
}

TEST(AcceptableStationary, ColorObjectivesRejected) {
  auto g = load_fixture("mp_buchi.game");
  EXPECT_ANY_THROW(build_acceptable_stationary(g, 0.1));
}

TEST(Monitored, DeterministicBaseWarmupIsExact) {
  auto g = load_fixture("mp_meanpayoff.game");
  auto r = compute_threats(g);
  auto base = build_grim_trigger(g, find_target_play(g, r, 0.1), r);
  MonitorOptions opt;
  opt.delta = 0.01;
  auto me = build_monitored_equilibrium(g, base, 0.1, r, opt);
  EXPECT_EQ(me.machine.method, ConstructionMethod::MonitoredBlame);
  EXPECT_EQ(me.monitor.false_alarm_bound, 0.0);
  const std::size_t w = me.monitor.warmup;
  auto avg = pure_running_averages(g, base.machine, w + 2000);
  auto outside = [&](std::size_t t) {
    for (Player i = 0; i < 2; ++i)
      if (std::abs(avg[t - 1][i] - to_double(me.monitor.center[i])) >= 0.01) return true;
    return false;
  };
  for (std::size_t t = std::max<std::size_t>(w, 1); t <= avg.size(); ++t) EXPECT_FALSE(outside(t)) << t;
  if (w > 1) EXPECT_TRUE(outside(w - 1));
}

TEST(Monitored, StationaryPenniesFalseAlarmBound) {
  auto g = load_fixture("mp_meanpayoff.game");
  auto r = compute_threats(g);
  auto base = build_acceptable_stationary(g, 0.0, &r);
  MonitorOptions opt;
  opt.delta = 0.1;
  auto me = build_monitored_equilibrium(g, base, 1.0, r, opt);
  EXPECT_GT(me.monitor.warmup, 1u);
  EXPECT_GT(me.monitor.false_alarm_bound, 0.0);
  EXPECT_LT(me.monitor.false_alarm_bound, 0.2);
  EXPECT_TRUE(me.machine.punishment_state(0) && me.machine.punishment_state(1));

  // On-path false alarms stay below the bound empirically.
  SimulationOptions so;
  so.runs = 400;
  so.horizon = 4 * me.monitor.warmup;
  auto st = simulate(g, me.machine, so, &me.monitor);
  EXPECT_LT(st.trigger_rate, 0.2);
}

TEST(Monitored, BudgetExhaustion) {
  auto g = load_fixture("mp_meanpayoff.game");
  auto r = compute_threats(g);
  auto base = build_acceptable_stationary(g, 0.0, &r);
  MonitorOptions opt;
  opt.delta = 0.001;
  opt.max_horizon = 1000;
  EXPECT_THROW(build_monitored_equilibrium(g, base, 1.0, r, opt), MonteCarloBudgetExhausted);
}

TEST(Monitored, ColorObjectivesRejected) {
  auto g = load_fixture("mp_buchi.game");
  auto r = compute_threats(g);
  auto base = build_grim_trigger(g, find_target_play(g, r, 0.1), r);
  EXPECT_THROW(build_monitored_equilibrium(g, base, 0.1, r), ConstructionError);
}
