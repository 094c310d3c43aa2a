#pragma once

// Restricted-simplex models: players choose from interior polytopes whose
// vertices permute (1, eps, ..., eps) (perfect kind) or (1, eps, eps^2, ...)
// (proper kind), and best-reply within them.

#include <vector>

#include "sequil/game.h"
#include "sequil/models.h"

namespace sequil {

enum class RestrictedKind { kPerfect, kProper };

struct RestrictedSimplex {
  RestrictedKind kind = RestrictedKind::kPerfect;
  int k = 0;
  double eps = 1.0;
  // Normalized weights by rank, largest first.
  std::vector<double> weights;
  // Perfect: vertex j puts the top weight on strategy j. Proper: one vertex
  // per permutation (lexicographic), vertex[perm[r]] = weights[r].
  std::vector<std::vector<double>> vertices;
  std::vector<std::vector<int>> permutations;
};

RestrictedSimplex restricted_vertices(int k, double eps, RestrictedKind kind);

struct Face {
  std::vector<int> vertex_ids;
  std::vector<double> barycenter;
};

// Vertices maximizing <v, pi_who(against)> (ties within tie_tol) and the
// barycenter of their hull.
Face better_reply(const Game& game, int who, const Profile& against,
                  const RestrictedSimplex& rs, double tie_tol = kTieTol);

// Largest distance-like violation of sigma_i lying in the better-reply face
// against sigma, over players: block sums and majorization slacks.
double better_reply_residual(const Game& game, const Profile& sigma,
                             RestrictedKind kind, double eps,
                             double tie_tol = kTieTol);

// All fixed points sigma in BR^eps(sigma) found by enumerating the faces
// (payoff orderings) and solving their tie equations. Symmetric games
// return symmetric profiles only.
std::vector<Profile> eps_model_fixed_points(const Game& game,
                                            RestrictedKind kind, double eps);

// The fixed point at eps closest to `near`; throws NumericalError when no
// fixed point is found.
Profile eps_model_at(const Game& game, RestrictedKind kind, double eps,
                     const Profile& near);

// eps = 1, 1 - h, ..., eps_min with h = (1 - eps_min) / steps, starting at the
// centroid and following the closest fixed point.
ModelCurve eps_model_curve(const Game& game, RestrictedKind kind,
                           int steps = 100, double eps_min = 0.01);

}  // namespace sequil
