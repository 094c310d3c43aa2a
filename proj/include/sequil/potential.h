#pragma once

// Point-level S(eps) machinery: eps-support, the potential Y_eps, the direct
// inequality oracle and colors.

#include <optional>
#include <span>
#include <vector>

#include "sequil/game.h"

namespace sequil {

// {l : sigma_l >= eps * max_k sigma_k}.
std::vector<int> supp_eps(std::span<const double> sigma, double eps);
unsigned supp_eps_mask(std::span<const double> sigma, double eps);

// Constant added to all payoffs so that they are positive: 1 - min payoff
// when min <= 0, else 0.
double positivity_shift(const Game& game);

// Y_eps(sigma) = sum_i [min over supp_eps(sigma_i) of pi_ik - max_k pi_ik].
// Gaps within tie_tol count as ties, so roots evaluate to exactly 0.
double potential_value(const Game& game, const Profile& sigma, double eps,
                       double tie_tol = kTieTol);
// Same with an explicit extra payoff shift (for invariance checks).
double potential_value_shifted(const Game& game, const Profile& sigma,
                               double eps, double extra_shift,
                               double tie_tol = kTieTol);
inline bool is_potential_root(double y) { return y == 0.0; }

// Direct check: pi_ij < max_k pi_ik - tol implies sigma_ij < eps * max_k sigma_ik
// for every player i and strategy j.
bool is_s_choice_point(const Game& game, const Profile& sigma, double eps,
                       double tol = kTieTol);

// Per-player best-option masks when supp_eps(sigma_i) = argmax pi_i for all
// players; empty otherwise.
std::optional<std::vector<unsigned>> color_of(const Game& game,
                                              const Profile& sigma, double eps,
                                              double tol = kTieTol);

// Per-player argmax masks (the suboptimality pattern of sigma).
std::vector<unsigned> best_reply_pattern(const Game& game, const Profile& sigma,
                                         double tol = kTieTol);

// Largest ratio sigma_ij / max_k sigma_ik over strictly suboptimal j. sigma is
// an S(eps) choice point exactly when this is < eps, so it is the infimum
// of the eps values at which sigma qualifies.
double membership_threshold(const Game& game, const Profile& sigma,
                            double tol = kTieTol);

}  // namespace sequil
