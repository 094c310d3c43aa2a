#include <gtest/gtest.h>

#include "helpers.h"
#include "sequil/nash.h"
#include "sequil/potential.h"

using namespace sequil;
using sequil::fixture::bundled;

namespace {

// Entrant stays out with q, incumbent fights with p.
Profile chain(double p, double q) { return Profile::from_vectors({{q, 1 - q}, {p, 1 - p}}); }

}  // namespace

TEST(SuppEps, Examples) {
  EXPECT_EQ(supp_eps(std::vector<double>{0.6, 0.3, 0.1}, 0.5), (std::vector<int>{0, 1}));
  EXPECT_EQ(supp_eps(std::vector<double>{1, 0, 0}, 0.01), std::vector<int>{0});
  EXPECT_EQ(supp_eps(std::vector<double>{1, 0, 0}, 1.0), std::vector<int>{0});
  EXPECT_EQ(supp_eps(centroid(3), 1.0), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(supp_eps_mask(std::vector<double>{0.6, 0.3, 0.1}, 0.5), 3u);
}

TEST(Potential, FullTieIsZero) {
  const Game g = Game::symmetric_from_first("flat", 2, 3, std::vector<double>(9, 7.0));
  EXPECT_EQ(potential_value(g, Profile::uniform({3, 3}), 0.3), 0.0);
}

TEST(Potential, ChainStoreExamples) {
  const Game& g = bundled("chain_store");
  EXPECT_EQ(potential_value(g, chain(0.1, 0.1), 1.0 / 3), 0.0);
  EXPECT_LT(potential_value(g, chain(0.3, 0.1), 1.0 / 3), 0.0);
  EXPECT_TRUE(is_s_choice_point(g, chain(0.2, 0.2), 1.0 / 3));
  EXPECT_FALSE(is_s_choice_point(g, chain(0.2, 0.5), 1.0 / 3));
}

TEST(Potential, DominantStrategyExcludesUniform) {
  const Game g = Game::symmetric_from_first("dom", 2, 3, {9, 9, 9, 1, 1, 1, 2, 2, 2});
  EXPECT_FALSE(is_s_choice_point(g, Profile::uniform({3, 3}), 0.1));
}

TEST(Potential, NashProfilesAreRootsForEveryEps) {
  for (const char* id : {"chain_store", "table3"}) {
    const Game& g = bundled(id);
    for (const Profile& p : support_enumeration_nash(g).equilibria)
      for (double eps : {0.01, 0.1, 0.5, 0.99}) {
        EXPECT_TRUE(is_s_choice_point(g, p, eps)) << id;
        EXPECT_EQ(potential_value(g, p, eps), 0.0) << id;
      }
  }
  for (const char* id : {"g1", "g6", "G2"}) {
    const Game& g = bundled(id);
    for (const auto& v : symmetric_nash(g)) {
      const Profile p = Profile::replicate(g.num_players(), v);
      for (double eps : {0.01, 0.1, 0.5, 0.99}) EXPECT_TRUE(is_s_choice_point(g, p, eps)) << id;
    }
  }
}

// Root membership, the direct inequality test and the threshold agree, the
// potential is non-positive, shift invariant and monotone in eps.
TEST(Potential, PropertiesOnRandomGames) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    const std::vector<int> counts = t % 2 ? std::vector<int>{3, 3} : std::vector<int>{2, 3};
    const Game g = fixture::random_game(rng, counts);
    for (int s = 0; s < 200; ++s) {
      const Profile p = fixture::random_profile(rng, counts);
      const double r = membership_threshold(g, p);
      for (double eps : {0.1, 0.35, 0.7, 0.95}) {
        const double y = potential_value(g, p, eps);
        EXPECT_LE(y, 0.0);
        const bool root = is_potential_root(y);
        EXPECT_EQ(root, is_s_choice_point(g, p, eps));
        EXPECT_EQ(root, r < eps);
        EXPECT_NEAR(potential_value_shifted(g, p, eps, 1000.0), y, 1e-9);
        if (root) EXPECT_TRUE(is_s_choice_point(g, p, std::min(1.0, eps + 0.2)));
      }
    }
  }
}

TEST(Potential, NegativePayoffsAreShifted) {
  const Game g("neg", {2, 2}, {{-5, -1, -3, -2}, {-4, -6, -1, -1}});
  EXPECT_EQ(positivity_shift(g), 7.0);
  EXPECT_EQ(positivity_shift(bundled("g1")), 0.0);
}

TEST(Color, ChainStoreYellowSet) {
  const Game& g = bundled("chain_store");
  const auto c = color_of(g, chain(0.1, 0.1), 1.0 / 3);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(*c, (std::vector<unsigned>{2u, 2u}));
}

TEST(Color, ChainStoreTieLineIsNotColorable) {
  const Game& g = bundled("chain_store");
  // Incumbent fights with 1/3: the entrant is indifferent but plays E mostly.
  const Profile p = chain(1.0 / 3, 0.2);
  EXPECT_TRUE(is_s_choice_point(g, p, 2.0 / 3));
  EXPECT_FALSE(color_of(g, p, 2.0 / 3).has_value());
}

TEST(Color, MatchingPenniesUniform) {
  const Game g("mp", {2, 2}, {{1, -1, -1, 1}, {-1, 1, 1, -1}});
  const auto c = color_of(g, Profile::uniform({2, 2}), 0.2);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(*c, (std::vector<unsigned>{3u, 3u}));
}

TEST(Pattern, BestReplyPattern) {
  const Game& g = bundled("g1");
  EXPECT_EQ(best_reply_pattern(g, Profile::uniform({3, 3})), (std::vector<unsigned>{2u, 2u}));
}
