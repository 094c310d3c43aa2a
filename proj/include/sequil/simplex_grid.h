#pragma once

// Cell decompositions of 1- and 2-simplices and their products.
//
// A grid with m points per edge splits each edge into n = m - 1 intervals.
// The 1-simplex has n cells; the 2-simplex has n^2 congruent triangles
// (n(n+1)/2 upward, n(n-1)/2 downward). Every cell has the same relative
// measure and is classified by its barycenter.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sequil/game.h"

namespace sequil {

class SimplexGrid {
 public:
  SimplexGrid() = default;
  // k = number of strategies (2 or 3); m = points per edge (>= 2).
  SimplexGrid(int k, int m);

  int k() const { return k_; }
  int m() const { return m_; }
  int subdivisions() const { return n_; }
  int dim() const { return k_ - 1; }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  double cell_measure() const { return 1.0 / num_cells(); }
  // Edge length of a cell in barycentric units.
  double spacing() const { return 1.0 / n_; }

  // Barycenter of cell c as a probability vector of length k.
  std::span<const double> center(int c) const {
    return {centers_.data() + static_cast<size_t>(c) * k_,
            static_cast<size_t>(k_)};
  }
  std::span<const int> neighbors(int c) const {
    return {adjacency_.data() + adj_offset_[c],
            static_cast<size_t>(adj_offset_[c + 1] - adj_offset_[c])};
  }
  // Corner points of cell c (k corners, each a probability vector).
  std::vector<std::vector<double>> corners(int c) const;
  // Cell containing sigma (boundary points map to an adjacent cell).
  int locate(std::span<const double> sigma) const;

  // Lattice description used by renderers: for k=3, row j holds the cells
  // whose lower edge lies on sigma_2 = j/n, ordered left to right.
  struct CellIndex {
    int type;  // 0 = up (or interval), 1 = down
    int i;
    int j;
  };
  const CellIndex& cell_index(int c) const { return cells_[c]; }
  int cell_at(int type, int i, int j) const;

 private:
  int k_ = 0;
  int m_ = 0;
  int n_ = 0;
  std::vector<CellIndex> cells_;
  std::vector<int> lookup_;
  std::vector<double> centers_;
  std::vector<int> adjacency_;
  std::vector<int> adj_offset_;
};

// Product of simplex grids; cell indices are mixed-radix with factor 0
// most significant.
class ProductGrid {
 public:
  ProductGrid() = default;
  explicit ProductGrid(std::vector<SimplexGrid> factors);

  int num_factors() const { return static_cast<int>(factors_.size()); }
  const SimplexGrid& factor(int f) const { return factors_[f]; }
  int64_t num_cells() const { return num_cells_; }
  double cell_measure() const { return 1.0 / static_cast<double>(num_cells_); }
  int dim() const;

  void decode(int64_t cell, std::span<int> parts) const;
  int64_t encode(std::span<const int> parts) const;
  // Face neighbors: vary one factor's cell to one of its neighbors.
  void neighbors(int64_t cell, std::vector<int64_t>& out) const;
  int64_t locate(const std::vector<std::vector<double>>& factors) const;

 private:
  std::vector<SimplexGrid> factors_;
  std::vector<int64_t> stride_;
  int64_t num_cells_ = 0;
};

// How a game's strategy space is analysed: one shared simplex for symmetric
// games (every player uses the same vector) or the product of all players'
// simplices.
enum class SpaceMode { kSymmetric, kProduct };

struct AnalysisSpace {
  SpaceMode mode = SpaceMode::kProduct;
  std::vector<int> factor_counts;

  int num_factors() const { return static_cast<int>(factor_counts.size()); }
  // Expands per-factor vectors into a full profile of the game.
  void fill_profile(const std::vector<std::span<const double>>& factors,
                    Profile& out) const;
  // Player whose payoffs drive factor f.
  int factor_player(int f) const { return mode == SpaceMode::kSymmetric ? 0 : f; }
};

// Symmetric mode for symmetric games, product mode otherwise.
AnalysisSpace default_space(const Game& game);
AnalysisSpace make_space(const Game& game, SpaceMode mode);

// A product grid over the space, m points per edge in every factor.
ProductGrid make_grid(const AnalysisSpace& space, int m);

}  // namespace sequil
