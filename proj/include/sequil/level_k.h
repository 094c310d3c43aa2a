#pragma once

// Level-k hierarchy and its Poisson mixture.

#include <vector>

#include "sequil/game.h"
#include "sequil/models.h"

namespace sequil {

struct LevelHierarchy {
  // levels[k] is the profile played by level k (level 0 is uniform).
  std::vector<Profile> levels;
  // levels[k] == levels[k - period] for all k >= cycle_start + period.
  int cycle_start = 0;
  int period = 1;

  // Level k for any k, following the detected cycle past the stored depth.
  const Profile& level(int k) const;
};

// Level k best-replies to level k - 1; tied best replies are mixed
// uniformly. Computes at least k_max levels and stops once a cycle repeats.
LevelHierarchy level_hierarchy(const Game& game, int k_max = 20);

// Smallest depth whose Poisson(tau) tail mass beyond it is < 1e-12.
int poisson_depth(double tau);
std::vector<double> poisson_weights(double tau, int depth);

// sum_k p_k(tau) a_k with the depth raised until the tail is negligible.
Profile level_k_mixture(const Game& game, double tau, int k_max = 20);
Profile level_k_mixture(const LevelHierarchy& h, double tau, int k_max = 20);

// tau on a uniform grid over [0, tau_max].
ModelCurve level_k_curve(const Game& game, double tau_max = 10.0, int steps = 100);

}  // namespace sequil
