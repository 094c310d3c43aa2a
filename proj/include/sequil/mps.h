#pragma once

// Measure of predictive success of the S model: hit rate minus the
// relative area of the predicted set.

#include <vector>

#include "sequil/estimation.h"

namespace sequil {

// What counts as one data point for the hit rate.
enum class HitUnit {
  // Each subject's average choice (product spaces: the subject's own
  // factor combined with the session averages of the other roles).
  kSubjectAverage,
  // Each session's average choice.
  kSessionAverage,
  // Each single choice as a vertex (symmetric spaces only).
  kObservation,
};

struct MpsResult {
  double epsilon = 0.0;
  double hit_rate = 0.0;
  double area_size = 0.0;
  double mps = 0.0;
  int hits = 0;
  int points = 0;
};

// hit - area.
double mps_value(double hit_rate, double area_size);

// Data points of a game in its default space (one vector per factor).
std::vector<std::vector<std::vector<double>>> hit_points(
    const GameData& data, const std::vector<Observation>& rows, HitUnit unit);

// Hit rates and union areas of the S(eps) choice sets. A point is a hit
// when it lies in some S(eps) choice set; the area is the measure of the
// union at grid resolution.
class MpsEvaluator {
 public:
  MpsEvaluator(const Game& game, const AnalysisSpace& space, int m);
  MpsResult evaluate(const std::vector<std::vector<std::vector<double>>>& points,
                     double eps) const;
  // The eps grid (step 0.01) plus every point's own threshold; the best
  // MPS wins, ties to the smaller eps.
  MpsResult best(const std::vector<std::vector<std::vector<double>>>& points) const;
  double area(double eps) const;
  double threshold(const std::vector<std::vector<double>>& point) const;

 private:
  const Game& game_;
  AnalysisSpace space_;
  std::vector<double> cell_thresholds_;  // sorted
};

// Pooled MPS at a common eps: hits summed over games, area averaged over
// games.
MpsResult pooled_mps(const std::vector<MpsResult>& per_game);

}  // namespace sequil
