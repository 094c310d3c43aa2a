#pragma once

// Diagnostics of stated beliefs: level-k consistency, the rank of each
// choice under its own belief, consequential unbiasedness and a test of
// rational expectations.

#include <cstdint>
#include <string>
#include <vector>

#include "sequil/game.h"
#include "sequil/observations.h"
#include "sequil/stats.h"

namespace sequil {

struct BeliefOptions {
  // Beliefs and level-k belief points are compared after rounding to this
  // grid.
  double rounding = 0.01;
  int level_depth = 20;
  int resamples = 10000;
  uint64_t seed = 20240607;
};

// Mean choice of one role against the mean belief held about that role.
struct ExpectationTest {
  int role = 0;
  std::vector<double> mean_choice;
  std::vector<double> mean_belief;
  PermutationResult test;
};

struct BeliefReport {
  std::string game_id;
  int beliefs = 0;
  int missing = 0;
  // Share of beliefs equal to the belief of some level k >= 1.
  double level_k_share = 0.0;
  // rank_share[r] = share of choices that are the (r+1)-th best reply to
  // the subject's own belief (tied payoffs share the better rank).
  std::vector<double> rank_share;
  // Share of beliefs whose best replies include the modal observed choice.
  double unbiased_share = 0.0;
  std::vector<ExpectationTest> expectations;
};

// Expected payoffs of `role` when every opponent plays `belief`.
std::vector<double> payoffs_under_belief(const Game& game, int role,
                                         const std::vector<double>& belief);

// 1 + number of strategies strictly better than `choice`.
int choice_rank(const std::vector<double>& payoffs, int choice, double tol = kTieTol);

// Beliefs about the opponents held by levels 1..depth of the hierarchy.
std::vector<std::vector<double>> level_k_beliefs(const Game& game, int role, int depth);

BeliefReport belief_diagnostics(const Game& game, const std::vector<Observation>& rows,
                                const BeliefOptions& opts = {});

}  // namespace sequil
