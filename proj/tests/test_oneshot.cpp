#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace bwg;
using namespace bwg::testing;

namespace {

// Independent minmax of player 0 in a 3-player 2x2x2 game on a grid over the
// two opponents' mixed actions.
double independent_grid(const GameSpec& g, int steps) {
  double best = 1e300;
  for (int p = 0; p <= steps; ++p)
    for (int q = 0; q <= steps; ++q) {
      double y1[2] = {p / static_cast<double>(steps), 1 - p / static_cast<double>(steps)};
      double y2[2] = {q / static_cast<double>(steps), 1 - q / static_cast<double>(steps)};
      double worst = -1e300;
      for (std::size_t a = 0; a < 2; ++a) {
        double v = 0;
        for (std::size_t b = 0; b < 2; ++b)
          for (std::size_t c = 0; c < 2; ++c)
            v += y1[b] * y2[c] * to_double(g.objectives[0].weights[g.space.encode({a, b, c})]);
        worst = std::max(worst, v);
      }
      best = std::min(best, worst);
    }
  return best;
}

}  // namespace

TEST(ProductExpectation, PureProfilePicksTheEntry) {
  auto g = load_fixture("pd.game");
  for (ProfileIndex a = 0; a < 4; ++a)
    EXPECT_EQ(product_expectation(g.space, stage_tensor(g, 0), pure_profile(g, a)), g.objectives[0].weights[a]);
}

TEST(ProductExpectation, MatchingPenniesUniformIsOneHalf) {
  auto g = load_fixture("mp_meanpayoff.game");
  // Hand sum: 1/4 (1 + 0 + 0 + 1).
  EXPECT_EQ(product_expectation(g.space, stage_tensor(g, 0), uniform_profile(g)), frac(1, 2));
}

TEST(ProductExpectation, UniformEqualsAverageOnRandomTensors) {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 30; ++rep) {
    auto g = random_game(rng, {3, 3, 3}, ObjectiveKind::MeanPayoffLimsup, -9, 9);
    Rational sum = 0;
    for (const auto& w : g.objectives[2].weights) sum += w;
    EXPECT_EQ(product_expectation(g.space, stage_tensor(g, 2), uniform_profile(g)), sum / 27);
  }
}

TEST(ProductExpectation, MultilinearInEachPlayer) {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 30; ++rep) {
    auto g = random_game(rng, {2, 3, 2}, ObjectiveKind::MeanPayoffLimsup, -9, 9);
    auto t = stage_tensor(g, 0);
    auto x = uniform_profile(g);
    auto y = x;
    Player j = rep % 3;
    y[j] = MixedAction::pure(j, g.space.num_actions(j), 0);
    Rational lam = frac(rep % 5 + 1, 7);
    auto mix = x;
    for (std::size_t a = 0; a < mix[j].prob.size(); ++a)
      mix[j].prob[a] = lam * x[j].prob[a] + (1 - lam) * y[j].prob[a];
    EXPECT_EQ(product_expectation(g.space, t, mix),
              lam * product_expectation(g.space, t, x) + (1 - lam) * product_expectation(g.space, t, y));
  }
}

TEST(ProductExpectation, DimensionMismatchThrows) {
  auto g = load_fixture("pd.game");
  MixedProfile x{MixedAction::uniform(0, 3), MixedAction::uniform(1, 2)};
  EXPECT_THROW(product_expectation(g.space, stage_tensor(g, 0), x), DimensionMismatch);
  EXPECT_THROW(product_expectation(g.space, PayoffTensor{0, {Rational(1)}}, uniform_profile(g)), DimensionMismatch);
}

TEST(CorrelatedMinmax, MatchingPenniesMatcher) {
  auto g = load_fixture("mp_meanpayoff.game");
  auto r = correlated_minmax(g.space, stage_tensor(g, 0), 0);
  EXPECT_EQ(r.value, frac(1, 2));
  ASSERT_EQ(r.coalition.size(), 2u);
  EXPECT_EQ(r.coalition[0], frac(1, 2));
  EXPECT_EQ(r.coalition[1], frac(1, 2));
  EXPECT_EQ(r.opponents[1].prob, MixedAction::uniform(1, 2).prob);
}

TEST(CorrelatedMinmax, SingleJointActionGivesMaxOverOwnActions) {
  auto g = parse_game("players a b\nactions a x y z\nactions b only\nobjective a mean-payoff-limsup\n"
                      "objective b mean-payoff-limsup\nprofile x only | 2 0\nprofile y only | 7/2 0\n"
                      "profile z only | -1 0\n");
  EXPECT_EQ(correlated_minmax(g.space, stage_tensor(g, 0), 0).value, frac(7, 2));
}

TEST(CorrelatedMinmax, DualityAndGridOracles) {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 60; ++rep) {
    auto g = random_unit_game(rng, rep % 2 ? std::vector<std::size_t>{2, 2} : std::vector<std::size_t>{2, 2, 2});
    for (Player i = 0; i < g.num_players(); ++i) {
      auto r = correlated_minmax(g.space, stage_tensor(g, i), i);
      EXPECT_EQ(r.value, correlated_maxmin(g.space, stage_tensor(g, i), i));
      EXPECT_NEAR(to_double(r.value), own_grid_maxmin(g, i, 10001), 1e-4);
      EXPECT_GE(coalition_grid_minmax(g, i, 24) + 1e-12, to_double(r.value));
      // The returned q certifies the value.
      Rational worst = -1000;
      for (std::size_t a = 0; a < g.space.num_actions(i); ++a) {
        Rational v = 0;
        for (std::size_t c = 0; c < r.coalition.size(); ++c)
          v += r.coalition[c] * g.objectives[i].weights[g.space.join(i, a, c)];
        worst = std::max(worst, v);
      }
      EXPECT_EQ(worst, r.value);
    }
  }
}

TEST(IndependentMinmax, TwoPlayersEqualsCorrelated) {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 20; ++rep) {
    auto g = random_game(rng, {3, 2}, ObjectiveKind::MeanPayoffLimsup, -5, 5);
    for (Player i = 0; i < 2; ++i)
      EXPECT_EQ(independent_minmax(g.space, stage_tensor(g, i), i).value,
                correlated_minmax(g.space, stage_tensor(g, i), i).value);
  }
  auto mp = load_fixture("mp_meanpayoff.game");
  EXPECT_EQ(independent_minmax(mp.space, stage_tensor(mp, 0), 0).value, frac(1, 2));
}

TEST(IndependentMinmax, ThreePlayersAgainstGrid) {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 30; ++rep) {
    auto g = random_unit_game(rng, {2, 2, 2});
    auto r = independent_minmax(g.space, stage_tensor(g, 0), 0);
    auto c = correlated_minmax(g.space, stage_tensor(g, 0), 0);
    double grid = independent_grid(g, 20);
    EXPECT_LE(to_double(r.value), grid + 1e-3);
    EXPECT_LE(c.value, r.value);
    // The profile certifies the value exactly.
    auto payoffs = pure_action_payoffs(g.space, stage_tensor(g, 0), r.opponents, 0);
    EXPECT_EQ(*std::max_element(payoffs.begin(), payoffs.end()), r.value);
    for (Player j = 1; j < 3; ++j) EXPECT_TRUE(r.opponents[j].is_valid());
  }
}

TEST(Nash, DominantActionsGiveThePureProfile) {
  auto g = load_fixture("pd.game");
  auto x = one_shot_nash(g.space, stage_tensors(g));
  EXPECT_EQ(x[0].support(), std::vector<std::size_t>{1});
  EXPECT_EQ(x[1].support(), std::vector<std::size_t>{1});
}

TEST(Nash, MatchingPenniesIsUniform) {
  auto g = load_fixture("mp_meanpayoff.game");
  auto x = one_shot_nash(g.space, stage_tensors(g));
  EXPECT_EQ(x[0].prob, MixedAction::uniform(0, 2).prob);
  EXPECT_EQ(x[1].prob, MixedAction::uniform(1, 2).prob);
}

TEST(Nash, RandomGamesPassThePureDeviationCheck) {
  std::mt19937_64 rng(47);
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<std::size_t> sizes = rep % 2 ? std::vector<std::size_t>{3, 3} : std::vector<std::size_t>{2, 2, 2};
    auto g = random_game(rng, sizes, ObjectiveKind::MeanPayoffLimsup, -5, 5);
    auto tensors = stage_tensors(g);
    auto x = one_shot_nash(g.space, tensors);
    for (const auto& xi : x) EXPECT_TRUE(xi.is_valid());
    EXPECT_LE(to_double(max_pure_deviation_gain(g.space, tensors, x)), 1e-9);
  }
}

TEST(Nash, BudgetIsEnforced) {
  std::mt19937_64 rng(53);
  auto g = random_game(rng, {4, 4}, ObjectiveKind::MeanPayoffLimsup, -5, 5);
  NashOptions opt;
  opt.max_support_profiles = 0;
  EXPECT_THROW(one_shot_nash(g.space, stage_tensors(g), opt), NashBudgetExceeded);
}
