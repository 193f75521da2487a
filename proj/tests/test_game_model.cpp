#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace bwg;
using namespace bwg::testing;

namespace {

LassoPlay lasso(std::vector<ProfileIndex> prefix, std::vector<ProfileIndex> cycle) { return {std::move(prefix), std::move(cycle)}; }

GameSpec pennies_buchi() { return load_fixture("mp_buchi.game"); }

}  // namespace

TEST(Rational, ParsesFractionsDecimalsAndExponents) {
  EXPECT_EQ(parse_rational("3/4"), frac(3, 4));
  EXPECT_EQ(parse_rational("-6/8"), frac(-3, 4));
  EXPECT_EQ(parse_rational("0.125"), frac(1, 8));
  EXPECT_EQ(parse_rational("-2.5e-1"), frac(-1, 4));
  EXPECT_EQ(parse_rational("12"), Rational(12));
  EXPECT_THROW(parse_rational("1/0"), std::exception);
  EXPECT_THROW(parse_rational("abc"), std::exception);
  EXPECT_THROW(parse_rational(""), std::exception);
}

TEST(Rational, SimplestBetweenFindsSmallDenominators) {
  EXPECT_EQ(simplest_between(from_double(0.33), from_double(0.34)), frac(1, 3));
  EXPECT_EQ(simplest_between(from_double(0.9999), Rational(1)), Rational(1));
  EXPECT_EQ(simplest_between(Rational(-1), Rational(1)), Rational(0));
  EXPECT_EQ(simplest_between(frac(-5, 7), frac(-2, 3)), frac(-2, 3));
}

TEST(EvalLasso, ConstantMeanPayoffCycle) {
  auto g = load_fixture("pd.game");
  auto cc = profile(g, {"C", "C"});
  EXPECT_EQ(eval_lasso(g.objectives[0], lasso({}, {cc})), Rational(3));
}

TEST(EvalLasso, BuchiTargetOnlyInPrefixScoresZero) {
  auto g = pennies_buchi();
  auto hh = profile(g, {"H", "H"});
  auto tt = profile(g, {"T", "T"});
  auto ht = profile(g, {"H", "T"});
  // Target of the mismatcher is a mismatch: seen only in the prefix.
  EXPECT_EQ(eval_lasso(g.objectives[1], lasso({ht}, {tt})), Rational(0));
  EXPECT_EQ(eval_lasso(g.objectives[0], lasso({ht}, {hh})), Rational(1));
}

TEST(EvalLasso, MeanPayoffAveragesTheCycle) {
  auto g = load_fixture("pd.game");
  auto cc = profile(g, {"C", "C"}), dd = profile(g, {"D", "D"});
  Rational oracle = (g.objectives[0].weights[cc] + g.objectives[0].weights[dd]) / 2;
  EXPECT_EQ(eval_lasso(g.objectives[0], lasso({}, {cc, dd})), oracle);
  EXPECT_EQ(oracle, Rational(2));
}

TEST(EvalLasso, AllKindsFollowTheirDefinitions) {
  auto g = load_fixture("limsup_weight.game");
  auto aa = profile(g, {"A", "A"}), bb = profile(g, {"B", "B"}), ab = profile(g, {"A", "B"});
  EXPECT_EQ(eval_lasso(g.objectives[0], lasso({bb}, {aa, ab})), Rational(2));  // max weight on the cycle
  EXPECT_EQ(eval_lasso(g.objectives[1], lasso({}, {aa, ab})), Rational(2));    // (1 + 3) / 2
  auto cp = load_fixture("cobuchi_parity.game");
  auto cAA = profile(cp, {"A", "A"}), cBA = profile(cp, {"B", "A"}), cAB = profile(cp, {"A", "B"});
  EXPECT_EQ(eval_lasso(cp.objectives[0], lasso({cBA}, {cAA})), Rational(1));
  EXPECT_EQ(eval_lasso(cp.objectives[0], lasso({}, {cAA, cBA})), Rational(0));
  EXPECT_EQ(eval_lasso(cp.objectives[1], lasso({}, {cAA, cAB})), Rational(0));  // min priority 1
  EXPECT_EQ(eval_lasso(cp.objectives[1], lasso({}, {cAB, cBA})), Rational(1));  // min priority 2
}

TEST(EvalLasso, RejectsEmptyCycle) {
  auto g = load_fixture("pd.game");
  EXPECT_THROW(eval_lasso(g.objectives[0], lasso({0}, {})), std::exception);
}

TEST(TailInvariance, BuchiExampleAndMeanPayoff) {
  auto g = pennies_buchi();
  auto hh = profile(g, {"H", "H"}), tt = profile(g, {"T", "T"});
  EXPECT_TRUE(tail_invariance_check(g.objectives[0], lasso({hh}, {tt}), {hh, hh}));
  auto pd = load_fixture("pd.game");
  EXPECT_TRUE(tail_invariance_check(pd.objectives[0], lasso({0, 1}, {2, 3}), {3, 3, 3, 1}));
}

TEST(TailInvariance, RandomizedSweepPerKind) {
  std::mt19937_64 rng(7);
  const ObjectiveKind kinds[] = {ObjectiveKind::MeanPayoffLimsup, ObjectiveKind::MeanPayoffLiminf,
                                 ObjectiveKind::LimsupWeight,     ObjectiveKind::Buchi,
                                 ObjectiveKind::CoBuchi,          ObjectiveKind::Parity};
  for (auto kind : kinds) {
    for (int rep = 0; rep < 200; ++rep) {
      auto g = random_game(rng, {2, 3}, kind, -5, 5, kind == ObjectiveKind::Parity ? 6 : 1);
      std::uniform_int_distribution<ProfileIndex> a(0, g.num_profiles() - 1);
      std::uniform_int_distribution<int> len(0, 6);
      LassoPlay p;
      for (int k = len(rng); k > 0; --k) p.prefix.push_back(a(rng));
      for (int k = len(rng) + 1; k > 0; --k) p.cycle.push_back(a(rng));
      std::vector<ProfileIndex> other;
      for (int k = len(rng); k > 0; --k) other.push_back(a(rng));
      ASSERT_TRUE(tail_invariance_check(g.objectives[0], p, other)) << to_string(kind);
    }
  }
}

TEST(TailInvariance, RotationAndRepetitionOfTheCycle) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 100; ++rep) {
    for (auto kind : {ObjectiveKind::MeanPayoffLimsup, ObjectiveKind::LimsupWeight, ObjectiveKind::Parity}) {
      auto g = random_game(rng, {3, 2}, kind, -3, 7, 4);
      std::uniform_int_distribution<ProfileIndex> a(0, g.num_profiles() - 1);
      LassoPlay p;
      for (int k = 0; k < 4; ++k) p.cycle.push_back(a(rng));
      Rational v = eval_lasso(g.objectives[1], p);
      LassoPlay rotated = p;
      std::rotate(rotated.cycle.begin(), rotated.cycle.begin() + 1, rotated.cycle.end());
      EXPECT_EQ(eval_lasso(g.objectives[1], rotated), v);
      LassoPlay doubled = p;
      doubled.cycle.insert(doubled.cycle.end(), p.cycle.begin(), p.cycle.end());
      doubled.cycle.insert(doubled.cycle.end(), p.cycle.begin(), p.cycle.end());
      EXPECT_EQ(eval_lasso(g.objectives[1], doubled), v);
    }
  }
}

TEST(EvalLasso, TwoValuedParityMatchesBuchiAndCoBuchi) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    auto g = random_game(rng, {2, 2}, ObjectiveKind::Parity, 0, 0, 1);
    std::uniform_int_distribution<ProfileIndex> a(0, 3);
    LassoPlay p;
    for (int k = 0; k < 3; ++k) p.cycle.push_back(a(rng));
    // Priorities {0,1}: Büchi with target = priority 0.
    ObjectiveSpec buchi{ObjectiveKind::Buchi, {}, {}};
    for (auto c : g.objectives[0].colors) buchi.colors.push_back(c == 0 ? 1 : 0);
    EXPECT_EQ(eval_lasso(g.objectives[0], p), eval_lasso(buchi, p));
    // Priorities {1,2}: co-Büchi with avoid = priority 1.
    ObjectiveSpec parity12{ObjectiveKind::Parity, {}, {}};
    ObjectiveSpec cobuchi{ObjectiveKind::CoBuchi, {}, {}};
    for (auto c : g.objectives[0].colors) {
      parity12.colors.push_back(c + 1);
      cobuchi.colors.push_back(c == 0 ? 1 : 0);
    }
    EXPECT_EQ(eval_lasso(parity12, p), eval_lasso(cobuchi, p));
  }
}

TEST(ProfileSpace, EncodeDecodeJoinRoundTrip) {
  ProfileSpace s({2, 3, 2});
  EXPECT_EQ(s.count(), 12u);
  for (ProfileIndex a = 0; a < s.count(); ++a) {
    EXPECT_EQ(s.encode(s.decode(a)), a);
    for (Player i = 0; i < 3; ++i) EXPECT_EQ(s.join(i, s.action(a, i), s.others_index(a, i)), a);
  }
  EXPECT_EQ(s.decode(0), (std::vector<std::size_t>{0, 0, 0}));
  EXPECT_EQ(s.decode(1), (std::vector<std::size_t>{0, 0, 1}));  // last player least significant
}

TEST(GameSpec, CreateRejectsBadShapes) {
  EXPECT_THROW(GameSpec::create({}, {}, {}), GameSpecError);
  EXPECT_THROW(GameSpec::create({"a"}, {{}}, {ObjectiveSpec{}}), GameSpecError);
  ObjectiveSpec o{ObjectiveKind::MeanPayoffLimsup, {Rational(1)}, {}};
  EXPECT_THROW(GameSpec::create({"a"}, {{"x", "y"}}, {o}), GameSpecError);
  EXPECT_THROW(GameSpec::create({"a", "a"}, {{"x"}, {"x"}}, {o, o}), GameSpecError);
}

TEST(RunMachine, SingleStateMachineIsConstant) {
  auto g = load_fixture("pd.game");
  auto m = FiniteMemoryProfile::constant(g, uniform_profile(g));
  History h{{0, 3, 2, 1, 1}};
  EXPECT_EQ(run_machine(m, h)[0].prob, uniform_profile(g)[0].prob);
  EXPECT_EQ(run_machine(m, History{})[1].prob, uniform_profile(g)[1].prob);
}

TEST(RunMachine, GrimTriggerHandFold) {
  // Three on-path states cycling (C,C),(C,C),(D,D) plus punishments.
  auto g = load_fixture("pd.game");
  auto cc = profile(g, {"C", "C"}), dd = profile(g, {"D", "D"}), dc = profile(g, {"D", "C"});
  auto threats = compute_threats(g);
  auto em = build_grim_trigger(g, {{}, {cc, cc, dd}}, threats);
  ASSERT_EQ(em.machine.num_states, 5u);
  // On path: after (C,C),(C,C) the next prescription is (D,D).
  const auto& out = run_machine(em.machine, History{{cc, cc}});
  EXPECT_TRUE(out[0].is_pure());
  EXPECT_EQ(out[0].support().front(), 1u);
  EXPECT_EQ(out[1].support().front(), 1u);
  // After wrapping the cycle we are back at (C,C).
  EXPECT_EQ(run_machine(em.machine, History{{cc, cc, dd}})[0].support().front(), 0u);
  // Row deviates at stage 1: punish row, col plays D.
  const auto& pun = run_machine(em.machine, History{{dc, cc, cc}});
  EXPECT_EQ(pun[1].support(), std::vector<std::size_t>{1});
  EXPECT_EQ(pun[0].prob, MixedAction::uniform(0, 2).prob);
}

TEST(RunMachine, SubgameConsistency) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    auto g = random_game(rng, {2, 2}, ObjectiveKind::MeanPayoffLimsup);
    auto m = random_machine(rng, g, 3);
    std::uniform_int_distribution<ProfileIndex> a(0, 3);
    History h1, h2, both;
    for (int k = 0; k < 4; ++k) h1.stages.push_back(a(rng));
    for (int k = 0; k < 5; ++k) h2.stages.push_back(a(rng));
    both.stages = h1.stages;
    both.stages.insert(both.stages.end(), h2.stages.begin(), h2.stages.end());
    EXPECT_EQ(m.state_after(both), m.state_after(h2, m.state_after(h1)));
  }
}

TEST(RunMachine, UnknownProfileInHistoryThrows) {
  auto g = load_fixture("pd.game");
  auto m = FiniteMemoryProfile::constant(g, uniform_profile(g));
  EXPECT_THROW(run_machine(m, History{{7}}), std::out_of_range);
}

TEST(MixedAction, Validity) {
  EXPECT_TRUE(MixedAction::uniform(0, 3).is_valid());
  MixedAction bad{0, {frac(1, 2), frac(1, 3)}};
  EXPECT_FALSE(bad.is_valid());
  MixedAction neg{0, {frac(3, 2), frac(-1, 2)}};
  EXPECT_FALSE(neg.is_valid());
  auto x = MixedAction::from_doubles(0, {0.25, 0.75});
  EXPECT_TRUE(x.is_valid());
  EXPECT_EQ(x.prob[0], frac(1, 4));
}
