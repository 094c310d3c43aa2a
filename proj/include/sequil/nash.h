#pragma once

#include <vector>

#include "sequil/game.h"

namespace sequil {

struct NashResult {
  std::vector<Profile> equilibria;
  // Support pairs whose indifference system was singular. Non-zero means
  // the game is degenerate and continua of equilibria may be represented
  // only by some of their points.
  int singular_systems = 0;
};

// All equilibria reachable by equal-size support enumeration in a 2-player
// game. With symmetric_only, keeps profiles with sigma_0 == sigma_1.
NashResult support_enumeration_nash(const Game& game,
                                    bool symmetric_only = false);

// Symmetric equilibria of a symmetric game (2 or 3 players): for every
// support T of the shared vector, solves the indifference equations over T
// by multi-start Newton and keeps best-reply-consistent solutions.
// Returns one vector per equilibrium.
std::vector<std::vector<double>> symmetric_nash(const Game& game);

}  // namespace sequil
