#pragma once

// S(eps) choice and belief sets assembled from grid cells.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sequil/game.h"
#include "sequil/simplex_grid.h"

namespace sequil {

enum class RegionKind { kChoice, kBelief };

struct Region {
  int component_id = 0;
  // Sorted product-grid cells. Thin sets found off the lattice keep the
  // cells that contain their sample points.
  std::vector<int64_t> cells;
  // Off-lattice sample points (one vector per factor), thin sets only.
  std::vector<std::vector<std::vector<double>>> points;
  // Per-factor argmax mask shared by the members.
  std::vector<unsigned> pattern;
  std::optional<std::vector<unsigned>> color;
  double measure = 0.0;
  int dimension = 0;
  bool full_dimensional = false;
  bool robust = false;
  bool colorable = false;
};

struct RegionSet {
  std::string game_id;
  double epsilon = 0.0;
  RegionKind kind = RegionKind::kChoice;
  AnalysisSpace space;
  ProductGrid grid;
  std::vector<Region> regions;
  // Region index per grid cell, -1 outside every region.
  std::vector<int32_t> cell_region;
  std::string diagnostic;

  double union_measure() const;
  // Measure of the projection of region r onto factor f.
  double projection_measure(int r, int f) const;
};

struct RegionOptions {
  double tie_tol = kTieTol;
  // Sample payoff-indifference loci and Nash profiles for S sets thinner
  // than one cell.
  bool thin_checklist = true;
};

RegionSet enumerate_s_choice_sets(const Game& game, double eps,
                                  const AnalysisSpace& space,
                                  const ProductGrid& grid,
                                  const RegionOptions& opts = {});
// Default space with m points per edge.
RegionSet enumerate_s_choice_sets(const Game& game, double eps, int m,
                                  const RegionOptions& opts = {});

// Belief space of a choice space: symmetric mode shares the simplex; in
// 2-player product mode factor f holds player f's belief about the
// opponent.
AnalysisSpace belief_space(const Game& game, const AnalysisSpace& choice);

// For each color, the beliefs whose argmax pattern equals the color.
RegionSet enumerate_s_belief_sets(const Game& game,
                                  const std::vector<std::vector<unsigned>>& colors,
                                  const AnalysisSpace& space,
                                  const ProductGrid& grid,
                                  double tie_tol = kTieTol);

// Colors of the colorable regions, in region order, without duplicates.
std::vector<std::vector<unsigned>> region_colors(const RegionSet& set);

// prod_{k=1}^{K-1} k eps / (1 + k eps).
double max_area_bound(int k, double eps);

// Region containing the point (given per factor): the region of the cell
// containing it, else a region with the point's own best-reply pattern in
// the surrounding cells or among thin sample points when the point itself
// is an S(eps) choice point.
std::optional<int> hit_test(const RegionSet& set, const Game& game,
                            const std::vector<std::vector<double>>& point);

// Rank compatibility of sigma with its payoffs for every player:
// pi_j > pi_k + tol requires sigma_j >= sigma_k, and pi_j, pi_k within tol
// of each other require sigma_j = sigma_k (to prob_tol).
bool monotone_set_membership(const Game& game, const Profile& sigma,
                             double tol = kTieTol, double prob_tol = 1e-12);

}  // namespace sequil
