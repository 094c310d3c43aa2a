#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "helpers.h"
#include "sequil/nash.h"
#include "sequil/potential.h"
#include "sequil/regions.h"

using namespace sequil;
using sequil::fixture::bundled;

namespace {

std::vector<std::vector<double>> chain(double p, double q) { return {{q, 1 - q}, {p, 1 - p}}; }

int count_full_colorable(const RegionSet& set) {
  return static_cast<int>(std::count_if(set.regions.begin(), set.regions.end(), [](const Region& r) {
    return r.full_dimensional && r.colorable;
  }));
}

}  // namespace

TEST(MaxAreaBound, Values) {
  EXPECT_EQ(max_area_bound(3, 1.0), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(max_area_bound(2, 1.0 / 3), 0.25);
  EXPECT_DOUBLE_EQ(max_area_bound(2, 1.0), 0.5);
  // Falls as eps^(K-1).
  for (int k : {2, 3, 4}) {
    const double ratio = max_area_bound(k, 1e-4) / max_area_bound(k, 1e-3);
    EXPECT_NEAR(ratio, std::pow(0.1, k - 1), 0.01 * std::pow(0.1, k - 1));
  }
}

TEST(Regions, ChainStoreOneThird) {
  const Game& g = bundled("chain_store");
  const RegionSet set = enumerate_s_choice_sets(g, 1.0 / 3, 101);
  ASSERT_EQ(count_full_colorable(set), 1);
  const Region& r = *std::find_if(set.regions.begin(), set.regions.end(),
                                  [](const Region& x) { return x.full_dimensional; });
  EXPECT_TRUE(r.robust);
  EXPECT_EQ(*r.color, (std::vector<unsigned>{2u, 2u}));
  EXPECT_NEAR(r.measure, 1.0 / 16, 0.005);

  const auto hit = hit_test(set, g, chain(0.1, 0.1));
  ASSERT_TRUE(hit.has_value());
  EXPECT_TRUE(set.regions[*hit].full_dimensional);
  EXPECT_FALSE(hit_test(set, g, chain(0.5, 0.5)).has_value());
}

TEST(Regions, ChainStoreTwoThirdsHasTieLine) {
  const Game& g = bundled("chain_store");
  const RegionSet set = enumerate_s_choice_sets(g, 2.0 / 3, 101);
  EXPECT_EQ(count_full_colorable(set), 2);
  bool line = false;
  for (const Region& r : set.regions) {
    if (r.full_dimensional || r.points.empty()) continue;
    bool on = true;
    for (const auto& p : r.points) on = on && std::abs(p[1][0] - 1.0 / 3) < 1e-9;
    if (on) {
      line = true;
      EXPECT_FALSE(r.colorable);
      EXPECT_FALSE(r.robust);
      EXPECT_EQ(r.dimension, 1);
    }
  }
  EXPECT_TRUE(line);
}

TEST(Regions, G3ThreeSectors) {
  const Game& g = bundled("g3");
  for (auto [eps, target] : {std::pair{0.5, 1.0 / 12}, std::pair{1.0, 1.0 / 6}}) {
    const RegionSet set = enumerate_s_choice_sets(g, eps, 151);
    ASSERT_EQ(count_full_colorable(set), 3);
    // Besides the three sectors only the centroid tie R+B+Y may appear.
    for (const auto& c : region_colors(set))
      EXPECT_TRUE(c[0] == 1u || c[0] == 2u || c[0] == 4u || c[0] == 7u) << c[0];
    for (const Region& r : set.regions)
      if (r.full_dimensional) EXPECT_NEAR(r.measure, target, 0.05 * target);
  }
  const RegionSet set = enumerate_s_choice_sets(g, 1.0, 151);
  const auto hit = hit_test(set, g, {{0.14, 0.38, 0.48}});
  ASSERT_TRUE(hit.has_value());
  ASSERT_TRUE(set.regions[*hit].color.has_value());
  EXPECT_EQ((*set.regions[*hit].color)[0], 4u);
}

TEST(Regions, EveryGameHasARegionAndUnionsNest) {
  for (const char* id : {"g1", "g2", "g5", "g7", "g9", "G1", "table3", "chain_store"}) {
    const Game& g = bundled(id);
    std::vector<int32_t> prev;
    for (int i = 1; i <= 10; ++i) {
      const RegionSet set = enumerate_s_choice_sets(g, i / 10.0, 61);
      EXPECT_FALSE(set.regions.empty()) << id;
      for (size_t c = 0; c < prev.size(); ++c)
        if (prev[c] >= 0) EXPECT_GE(set.cell_region[c], 0) << id << " eps " << i / 10.0;
      prev = set.cell_region;
    }
  }
}

TEST(Regions, CellsAreRootsAndMeasuresAddUp) {
  const Game& g = bundled("g2");
  const RegionSet set = enumerate_s_choice_sets(g, 0.4, 81);
  double total = 0.0;
  for (size_t r = 0; r < set.regions.size(); ++r) {
    const Region& reg = set.regions[r];
    if (reg.measure <= 0.0) continue;
    total += reg.measure;
    EXPECT_DOUBLE_EQ(reg.measure, reg.cells.size() * set.grid.cell_measure());
    for (int64_t c : reg.cells) EXPECT_EQ(set.cell_region[c], static_cast<int32_t>(r));
  }
  EXPECT_NEAR(set.union_measure(), total, 1e-12);
}

// Each colorable region lies in the primary set of its color.
TEST(Regions, ColorableRegionsLieInPrimarySets) {
  for (const char* id : {"g1", "g3", "g4", "g8"}) {
    const Game& g = bundled(id);
    const RegionSet set = enumerate_s_choice_sets(g, 0.5, 81);
    const SimplexGrid& sg = set.grid.factor(0);
    for (const Region& r : set.regions) {
      if (!r.colorable || r.measure <= 0.0) continue;
      const unsigned color = (*r.color)[0];
      for (int64_t c : r.cells) {
        const auto s = sg.center(static_cast<int>(c));
        const double top = *std::max_element(s.begin(), s.end());
        bool is_max = false;
        for (int k = 0; k < 3; ++k)
          if (color >> k & 1u) is_max = is_max || s[k] >= top - 1e-12;
        EXPECT_TRUE(is_max) << id;
      }
    }
  }
}

TEST(Regions, NashPointsAreHit) {
  for (const char* id : {"g1", "g6", "g10", "G3"}) {
    const Game& g = bundled(id);
    const RegionSet set = enumerate_s_choice_sets(g, 0.2, 101);
    for (const auto& v : symmetric_nash(g)) EXPECT_TRUE(hit_test(set, g, {v}).has_value()) << id;
  }
}

TEST(Monotone, Table3Interval) {
  const Game& g = bundled("table3");
  auto member = [&](double a) {
    const std::vector<double> s = {a, 1 - a};
    return monotone_set_membership(g, Profile::replicate(2, s));
  };
  EXPECT_TRUE(member(0.5));
  EXPECT_TRUE(member(0.6));
  // At 2/3 the payoffs tie but the probabilities differ.
  EXPECT_TRUE(member(0.66));
  EXPECT_FALSE(member(2.0 / 3));
  EXPECT_FALSE(member(0.45));
  EXPECT_FALSE(member(0.7));
}

TEST(Monotone, CentroidAndG2) {
  for (const char* id : {"g1", "g3", "g7", "G2"}) {
    const Game& g = bundled(id);
    EXPECT_TRUE(monotone_set_membership(g, Profile::uniform(g.strategy_counts()))) << id;
  }
  const std::vector<double> s = {0.06, 0.88, 0.06};
  EXPECT_FALSE(monotone_set_membership(bundled("g2"), Profile::replicate(2, s)));
}

// Rank-monotone points lie in the union of the S(1) sets.
TEST(Monotone, InsideUnionAtEpsOne) {
  for (const char* id : {"g1", "g2", "g3", "g4", "g5", "g6", "g7", "g8", "g9", "g10"}) {
    const Game& g = bundled(id);
    const RegionSet set = enumerate_s_choice_sets(g, 1.0, 61);
    const SimplexGrid& sg = set.grid.factor(0);
    for (int c = 0; c < sg.num_cells(); ++c) {
      const auto s = sg.center(c);
      // Equal probabilities on differently paid strategies are monotone but
      // sit on the boundary of S(1).
      if (s[0] == s[1] || s[1] == s[2] || s[0] == s[2]) continue;
      if (!monotone_set_membership(g, Profile::replicate(2, s))) continue;
      EXPECT_TRUE(hit_test(set, g, {{s.begin(), s.end()}}).has_value()) << id;
    }
  }
}

TEST(BeliefSets, DominantStrategyHasFullMeasure) {
  const Game g = Game::symmetric_from_first("dom", 2, 3, {9, 9, 9, 1, 1, 1, 2, 2, 2});
  const AnalysisSpace space = belief_space(g, default_space(g));
  const RegionSet set = enumerate_s_belief_sets(g, {{1u}}, space, make_grid(space, 41));
  EXPECT_NEAR(set.union_measure(), 1.0, 1e-12);
}

TEST(BeliefSets, G4FavoursB) {
  const Game& g = bundled("g4");
  const AnalysisSpace space = belief_space(g, default_space(g));
  const RegionSet set = enumerate_s_belief_sets(g, {{1u}, {2u}, {4u}}, space, make_grid(space, 101));
  double m[3] = {0, 0, 0};
  for (const Region& r : set.regions)
    for (int k = 0; k < 3; ++k)
      if (r.pattern[0] == (1u << k)) m[k] += r.measure;
  EXPECT_GT(m[1], m[0]);
  EXPECT_GT(m[1], m[2]);
}

TEST(BeliefSets, ProductSpaceSwapsRoles) {
  const Game& g = bundled("chain_store");
  const AnalysisSpace space = belief_space(g, default_space(g));
  EXPECT_EQ(space.factor_counts, (std::vector<int>{2, 2}));
  const RegionSet set =
      enumerate_s_belief_sets(g, {{2u, 2u}}, space, make_grid(space, 101));
  // Entering is best when the entrant expects fighting below 1/3;
  // accommodating is best for any chance of entry.
  ASSERT_FALSE(set.regions.empty());
  EXPECT_NEAR(set.union_measure(), 1.0 / 3, 0.02);
}
