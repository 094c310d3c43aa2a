#include "sequil/level_k.h"

#include <algorithm>
#include <cmath>

#include "sequil/error.h"

namespace sequil {
namespace {

bool same_profile(const Profile& a, const Profile& b) {
  for (size_t i = 0; i < a.data().size(); ++i) {
    if (std::abs(a.data()[i] - b.data()[i]) > 1e-12) return false;
  }
  return true;
}

}  // namespace

const Profile& LevelHierarchy::level(int k) const {
  if (k < static_cast<int>(levels.size())) return levels[k];
  const int offset = (k - cycle_start) % period;
  return levels[cycle_start + offset];
}

LevelHierarchy level_hierarchy(const Game& game, int k_max) {
  if (k_max < 2) throw ValidationError("level hierarchy needs k_max >= 2");
  LevelHierarchy h;
  h.levels.push_back(Profile::uniform(game.strategy_counts()));
  bool cycled = false;
  for (int k = 1;; ++k) {
    const Profile& prev = h.levels.back();
    Profile next(game.strategy_counts());
    for (int i = 0; i < game.num_players(); ++i) {
      const auto br = best_reply_set(expected_payoffs(game, i, prev));
      for (int j : br) next[i][j] = 1.0 / br.size();
    }
    for (int j = 0; j < k && !cycled; ++j) {
      if (same_profile(h.levels[j], next)) {
        cycled = true;
        h.cycle_start = j;
        h.period = k - j;
      }
    }
    if (cycled && k > k_max) break;
    h.levels.push_back(std::move(next));
  }
  return h;
}

int poisson_depth(double tau) {
  if (tau < 0.0) throw ValidationError("tau must be non-negative");
  double p = std::exp(-tau), cdf = p;
  int k = 0;
  while (1.0 - cdf >= 1e-12 && k < 10000) {
    ++k;
    p *= tau / k;
    cdf += p;
  }
  return k;
}

std::vector<double> poisson_weights(double tau, int depth) {
  std::vector<double> w(depth + 1);
  double p = std::exp(-tau);
  for (int k = 0; k <= depth; ++k) {
    w[k] = p;
    p *= tau / (k + 1);
  }
  return w;
}

Profile level_k_mixture(const LevelHierarchy& h, double tau, int k_max) {
  const int depth = std::max(k_max, poisson_depth(tau));
  const auto w = poisson_weights(tau, depth);
  Profile out(h.levels[0].counts());
  double total = 0.0;
  for (int k = 0; k <= depth; ++k) {
    const Profile& a = h.level(k);
    for (size_t q = 0; q < out.data().size(); ++q) out.data()[q] += w[k] * a.data()[q];
    total += w[k];
  }
  for (double& v : out.data()) v /= total;
  return out;
}

Profile level_k_mixture(const Game& game, double tau, int k_max) {
  return level_k_mixture(level_hierarchy(game, k_max), tau, k_max);
}

ModelCurve level_k_curve(const Game& game, double tau_max, int steps) {
  if (!(tau_max > 0.0) || steps < 1) {
    throw ValidationError("level-k curve needs tau_max > 0 and steps >= 1");
  }
  const auto h = level_hierarchy(game);
  ModelCurve curve;
  curve.model = ModelKind::kLevelK;
  curve.game_id = game.id();
  for (int s = 0; s <= steps; ++s) {
    const double tau = tau_max * s / steps;
    curve.samples.push_back({tau, level_k_mixture(h, tau), 0.0});
  }
  return curve;
}

}  // namespace sequil
