#include "sequil/simplex_grid.h"

#include <algorithm>
#include <cmath>

#include "sequil/error.h"

namespace sequil {

SimplexGrid::SimplexGrid(int k, int m) : k_(k), m_(m), n_(m - 1) {
  if (k != 2 && k != 3) {
    throw ValidationError("simplex grids support 2 or 3 strategies, got " +
                          std::to_string(k));
  }
  if (m < 2) throw ValidationError("grid needs at least 2 points per edge");
  const int n = n_;
  if (k == 2) {
    lookup_.assign(n, -1);
    for (int i = 0; i < n; ++i) {
      lookup_[i] = static_cast<int>(cells_.size());
      cells_.push_back({0, i, 0});
      centers_.push_back((n - i - 0.5) / n);
      centers_.push_back((i + 0.5) / n);
    }
    adj_offset_.push_back(0);
    for (int i = 0; i < n; ++i) {
      if (i > 0) adjacency_.push_back(i - 1);
      if (i + 1 < n) adjacency_.push_back(i + 1);
      adj_offset_.push_back(static_cast<int>(adjacency_.size()));
    }
    return;
  }
  lookup_.assign(2 * n * n, -1);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i + j <= n - 1; ++i) {
      lookup_[(0 * n + i) * n + j] = static_cast<int>(cells_.size());
      cells_.push_back({0, i, j});
      centers_.push_back((n - i - j - 2.0 / 3.0) / n);
      centers_.push_back((i + 1.0 / 3.0) / n);
      centers_.push_back((j + 1.0 / 3.0) / n);
      if (i + j <= n - 2) {
        lookup_[(1 * n + i) * n + j] = static_cast<int>(cells_.size());
        cells_.push_back({1, i, j});
        centers_.push_back((n - i - j - 4.0 / 3.0) / n);
        centers_.push_back((i + 2.0 / 3.0) / n);
        centers_.push_back((j + 2.0 / 3.0) / n);
      }
    }
  }
  adj_offset_.push_back(0);
  for (const auto& c : cells_) {
    if (c.type == 0) {
      if (c.i + c.j <= n - 2) adjacency_.push_back(cell_at(1, c.i, c.j));
      if (c.i >= 1) adjacency_.push_back(cell_at(1, c.i - 1, c.j));
      if (c.j >= 1) adjacency_.push_back(cell_at(1, c.i, c.j - 1));
    } else {
      adjacency_.push_back(cell_at(0, c.i, c.j));
      adjacency_.push_back(cell_at(0, c.i + 1, c.j));
      adjacency_.push_back(cell_at(0, c.i, c.j + 1));
    }
    adj_offset_.push_back(static_cast<int>(adjacency_.size()));
  }
}

int SimplexGrid::cell_at(int type, int i, int j) const {
  if (k_ == 2) return (type == 0 && j == 0 && i >= 0 && i < n_) ? lookup_[i] : -1;
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || type < 0 || type > 1) return -1;
  return lookup_[(type * n_ + i) * n_ + j];
}

std::vector<std::vector<double>> SimplexGrid::corners(int c) const {
  const auto& idx = cells_[c];
  const double n = n_;
  std::vector<std::vector<double>> out;
  if (k_ == 2) {
    for (int d = 0; d <= 1; ++d) {
      const double s1 = (idx.i + d) / n;
      out.push_back({1.0 - s1, s1});
    }
    return out;
  }
  std::vector<std::array<int, 2>> pts;
  if (idx.type == 0) {
    pts = {{idx.i, idx.j}, {idx.i + 1, idx.j}, {idx.i, idx.j + 1}};
  } else {
    pts = {{idx.i + 1, idx.j}, {idx.i, idx.j + 1}, {idx.i + 1, idx.j + 1}};
  }
  for (const auto& p : pts) {
    out.push_back({(n_ - p[0] - p[1]) / n, p[0] / n, p[1] / n});
  }
  return out;
}

int SimplexGrid::locate(std::span<const double> sigma) const {
  const int n = n_;
  if (k_ == 2) {
    int i = static_cast<int>(std::floor(sigma[1] * n));
    return lookup_[std::clamp(i, 0, n - 1)];
  }
  const double b = std::clamp(sigma[1], 0.0, 1.0) * n;
  const double y = std::clamp(sigma[2], 0.0, 1.0) * n;
  int i = std::clamp(static_cast<int>(std::floor(b)), 0, n - 1);
  int j = std::clamp(static_cast<int>(std::floor(y)), 0, n - 1);
  const double fb = b - i, fy = y - j;
  if (i + j > n - 1) {
    while (i + j > n - 1) {
      if (i >= j) --i; else --j;
    }
    return cell_at(0, i, j);
  }
  if (fb + fy <= 1.0 || i + j == n - 1) return cell_at(0, i, j);
  return cell_at(1, i, j);
}

ProductGrid::ProductGrid(std::vector<SimplexGrid> factors)
    : factors_(std::move(factors)) {
  stride_.assign(factors_.size(), 1);
  num_cells_ = 1;
  for (int f = num_factors() - 1; f >= 0; --f) {
    stride_[f] = num_cells_;
    num_cells_ *= factors_[f].num_cells();
  }
}

int ProductGrid::dim() const {
  int d = 0;
  for (const auto& f : factors_) d += f.dim();
  return d;
}

void ProductGrid::decode(int64_t cell, std::span<int> parts) const {
  for (int f = 0; f < num_factors(); ++f) {
    parts[f] = static_cast<int>(cell / stride_[f]);
    cell %= stride_[f];
  }
}

int64_t ProductGrid::encode(std::span<const int> parts) const {
  int64_t c = 0;
  for (int f = 0; f < num_factors(); ++f) c += parts[f] * stride_[f];
  return c;
}

void ProductGrid::neighbors(int64_t cell, std::vector<int64_t>& out) const {
  out.clear();
  for (int f = 0; f < num_factors(); ++f) {
    const int part = static_cast<int>((cell / stride_[f]) % factors_[f].num_cells());
    for (int nb : factors_[f].neighbors(part)) {
      out.push_back(cell + (static_cast<int64_t>(nb) - part) * stride_[f]);
    }
  }
}

int64_t ProductGrid::locate(const std::vector<std::vector<double>>& factors) const {
  int64_t c = 0;
  for (int f = 0; f < num_factors(); ++f) {
    c += factors_[f].locate(factors[f]) * stride_[f];
  }
  return c;
}

void AnalysisSpace::fill_profile(
    const std::vector<std::span<const double>>& factors, Profile& out) const {
  if (mode == SpaceMode::kSymmetric) {
    for (int i = 0; i < out.num_players(); ++i) {
      std::copy(factors[0].begin(), factors[0].end(), out[i].begin());
    }
    return;
  }
  for (int i = 0; i < out.num_players(); ++i) {
    std::copy(factors[i].begin(), factors[i].end(), out[i].begin());
  }
}

AnalysisSpace make_space(const Game& game, SpaceMode mode) {
  AnalysisSpace s;
  s.mode = mode;
  if (mode == SpaceMode::kSymmetric) {
    if (!game.symmetric()) {
      throw ValidationError("symmetric mode needs a symmetric game; '" +
                            game.id() + "' is not");
    }
    s.factor_counts = {game.num_strategies(0)};
  } else {
    s.factor_counts = game.strategy_counts();
  }
  return s;
}

AnalysisSpace default_space(const Game& game) {
  return make_space(game, game.symmetric() ? SpaceMode::kSymmetric
                                           : SpaceMode::kProduct);
}

ProductGrid make_grid(const AnalysisSpace& space, int m) {
  std::vector<SimplexGrid> f;
  for (int k : space.factor_counts) f.emplace_back(k, m);
  return ProductGrid(std::move(f));
}

}  // namespace sequil
