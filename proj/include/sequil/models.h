#pragma once

// Parameter-indexed model predictions shared by the behavioral models.

#include <string>
#include <vector>

#include "sequil/game.h"

namespace sequil {

enum class ModelKind { kS, kLogit, kLevelK, kEpsPerfect, kEpsProper };

// "S", "logit", "levelk", "eps-perfect", "eps-proper".
std::string model_name(ModelKind kind);
// Accepts the names above; throws ValidationError otherwise.
ModelKind parse_model(const std::string& name);

struct CurveSample {
  double parameter = 0.0;
  Profile profile;
  double residual = 0.0;
};

struct ModelCurve {
  ModelKind model = ModelKind::kLogit;
  std::string game_id;
  std::vector<CurveSample> samples;
  // Set when tracing stopped early; names the last parameter reached.
  std::string diagnostic;
};

// Index of the sample whose parameter is closest to `parameter`.
int nearest_sample(const ModelCurve& curve, double parameter);

}  // namespace sequil
