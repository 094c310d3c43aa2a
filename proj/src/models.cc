#include "sequil/models.h"

#include <cmath>

#include "sequil/error.h"

namespace sequil {

std::string model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kS: return "S";
    case ModelKind::kLogit: return "logit";
    case ModelKind::kLevelK: return "levelk";
    case ModelKind::kEpsPerfect: return "eps-perfect";
    case ModelKind::kEpsProper: return "eps-proper";
  }
  return "?";
}

ModelKind parse_model(const std::string& name) {
  for (auto k : {ModelKind::kS, ModelKind::kLogit, ModelKind::kLevelK,
                 ModelKind::kEpsPerfect, ModelKind::kEpsProper}) {
    if (model_name(k) == name) return k;
  }
  if (name == "s") return ModelKind::kS;
  if (name == "level-k") return ModelKind::kLevelK;
  throw ValidationError("unknown model '" + name +
                        "' (expected S, logit, levelk, eps-perfect or eps-proper)");
}

int nearest_sample(const ModelCurve& curve, double parameter) {
  if (curve.samples.empty()) throw ValidationError("curve has no samples");
  int best = 0;
  for (int i = 1; i < static_cast<int>(curve.samples.size()); ++i) {
    if (std::abs(curve.samples[i].parameter - parameter) <
        std::abs(curve.samples[best].parameter - parameter)) {
      best = i;
    }
  }
  return best;
}

}  // namespace sequil
