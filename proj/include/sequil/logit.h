#pragma once

// Logit quantal response and the logit-QRE correspondence.

#include <span>
#include <vector>

#include "sequil/game.h"
#include "sequil/models.h"

namespace sequil {

// sigma_k = exp(lambda pi_k) / sum_l exp(lambda pi_l), max-shifted.
std::vector<double> logit_response(std::span<const double> pi, double lambda);

// max_i |sigma_i - L(pi_i(sigma))|.
double logit_residual(const Game& game, const Profile& sigma, double lambda);

struct LogitOptions {
  double lambda_max = 2.0;
  // Geometric samples after lambda = 0.
  int steps = 100;
  // First positive lambda as a fraction of lambda_max.
  double first_fraction = 1e-3;
};

// Principal branch from the centroid at lambda = 0. Symmetric games follow
// the symmetric branch. Samples carry residuals <= 1e-10; when a step
// cannot be completed the curve ends there with a diagnostic.
ModelCurve logit_qre_curve(const Game& game, const LogitOptions& opts = {});

// Fixed point at lambda, continued from `start` (a point on the branch at
// a nearby lambda). Throws NumericalError when Newton fails.
Profile solve_logit_qre(const Game& game, double lambda, const Profile& start,
                        double start_lambda);

}  // namespace sequil
