#pragma once

// Likelihood-based fit of the S model and the four curve models to choice
// data, and the out-of-sample harness.

#include <optional>
#include <string>
#include <vector>

#include "sequil/game.h"
#include "sequil/level_k.h"
#include "sequil/logit.h"
#include "sequil/models.h"
#include "sequil/observations.h"
#include "sequil/simplex_grid.h"

namespace sequil {

// Choice counts of one session, one vector per factor of the game's
// default space (symmetric games pool all roles into one factor).
struct SessionCounts {
  std::string session;
  std::vector<std::vector<double>> counts;
  double total() const;
  std::vector<std::vector<double>> frequencies() const;
};

struct GameData {
  Game game;
  AnalysisSpace space;
  std::vector<SessionCounts> sessions;  // sorted by session id
  int observations = 0;
};

GameData make_game_data(const Game& game, const std::vector<Observation>& rows);

// Counts and predictions per factor. 0 log 0 = 0; an observed strategy
// with zero predicted probability gives -inf.
double multinomial_loglik(const std::vector<std::vector<double>>& counts,
                          const std::vector<std::vector<double>>& predicted);

struct GStat {
  double g = 0.0;
  int dof = 0;
  double g_bar = 0.0;
};

// G = 2 log(L_max / L) with L_max at the empirical frequencies; dof sums
// K_f - 1 over factors; g_bar = G / chi2_{0.01, dof}.
GStat g_statistic(const std::vector<std::vector<double>>& counts,
                  const std::vector<std::vector<double>>& predicted);
double g_bar(double g, int dof);

// Degrees of freedom of a game's data: sum over factors of K_f - 1, times
// the number of sessions.
int data_dof(const GameData& data);

// Factor vectors of a full profile in the game's default space.
std::vector<std::vector<double>> profile_factors(const GameData& data, const Profile& p);

struct FitOptions {
  // Points per edge for set likelihoods; 0 picks a size by dimension.
  int grid_m = 0;
  // S model: eps = step, 2 step, ..., 1.
  double eps_step = 0.01;
  LogitOptions logit;
  double tau_max = 10.0;
  int steps = 100;
  double eps_min = 0.01;
};

// Default grid size for set likelihoods and areas of a space.
int default_grid_m(const AnalysisSpace& space);

// The S model's log-likelihood for one session: the supremum of the
// multinomial likelihood over the union of S(eps) choice sets, from cell
// maximization followed by local refinement inside the set.
class SetLikelihood {
 public:
  // Keeps a reference to `data`.
  SetLikelihood(const GameData& data, int session, int m);
  // Values for an increasing list of eps; non-decreasing in eps.
  std::vector<double> max_loglik(const std::vector<double>& eps) const;
  double saturated_loglik() const { return saturated_; }

 private:
  double refine(std::vector<std::vector<double>> start, double eps) const;
  double loglik_at(const std::vector<std::vector<double>>& pt) const;
  double threshold_at(const std::vector<std::vector<double>>& pt) const;

  const GameData& data_;
  int session_;
  ProductGrid grid_;
  std::vector<std::pair<double, int64_t>> by_threshold_;  // (r, cell)
  std::vector<double> prefix_best_;                       // running max loglik
  std::vector<int64_t> prefix_cell_;
  std::vector<std::vector<std::vector<double>>> nash_points_;
  double saturated_ = 0.0;
  double data_threshold_ = 0.0;
};

// G(eps) summed over sessions for each eps of the list (increasing).
std::vector<double> s_model_g(const GameData& data, const std::vector<double>& eps,
                              int m);
std::vector<double> eps_grid(double step);

// Model predictions as a function of the model parameter.
class CurvePredictor {
 public:
  // Keeps a reference to `game`.
  CurvePredictor(const Game& game, ModelKind model, const FitOptions& opts);
  // Sampled parameters in curve order.
  const std::vector<double>& parameters() const { return params_; }
  const Profile& sample(int j) const { return curve_.samples[j].profile; }
  // Prediction at any parameter within the traced range.
  std::optional<Profile> at(double parameter) const;
  const ModelCurve& curve() const { return curve_; }

 private:
  const Game& game_;
  ModelKind model_;
  ModelCurve curve_;
  std::vector<double> params_;
  LevelHierarchy hierarchy_;
};

struct FitResult {
  ModelKind model = ModelKind::kS;
  std::vector<std::string> games;
  double parameter = 0.0;
  double g = 0.0;
  int dof = 0;
  double g_bar = 0.0;
  double log_likelihood = 0.0;
  std::string diagnostic;
};

// Minimizes summed G over the games' data. S: the smallest eps attaining
// the minimum on the eps grid. Curve models: best sampled parameter, then
// golden-section search between its neighbours.
FitResult fit_scalar_model(const std::vector<GameData>& games, ModelKind model,
                           const FitOptions& opts = {});

// G of one game's data at a fixed parameter (summed over sessions).
double g_at_parameter(const GameData& data, ModelKind model, double parameter,
                      const FitOptions& opts = {});

struct OutOfSample {
  int in_sample_size = 0;
  int combinations = 0;
  // Average over combinations of the mean held-out G.
  double average_g = 0.0;
};

// For every set of k in-sample games: fit the parameter on their summed G
// over the model's parameter grid, then average G over the held-out games.
OutOfSample out_of_sample(const std::vector<GameData>& games, ModelKind model,
                          int k, const FitOptions& opts = {});

}  // namespace sequil
