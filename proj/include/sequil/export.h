#pragma once

// JSON documents for region sets and model curves.
//
// Regions:
//   {"format_version": 1, "type": "regions", "game": id, "epsilon": e,
//    "kind": "choice"|"belief", "space": "symmetric"|"product",
//    "factor_counts": [...], "grid_m": m, "union_measure": u,
//    "regions": [{"component_id", "cells", "points", "pattern", "color",
//                 "measure", "dimension", "full_dimensional", "robust",
//                 "colorable"}, ...], "diagnostic": "..."}
// Curves:
//   {"format_version": 1, "type": "curve", "game": id, "model": name,
//    "samples": [{"parameter", "profile": [[...], ...], "residual"}, ...],
//    "diagnostic": "..."}
// Numbers are written in shortest round-trip form.

#include <string>

#include "sequil/models.h"
#include "sequil/regions.h"

namespace sequil {

inline constexpr int kExportFormatVersion = 1;

std::string export_regions(const RegionSet& set);
RegionSet import_regions(const std::string& text, const std::string& source = "<string>");

std::string export_curve(const ModelCurve& curve);
ModelCurve import_curve(const std::string& text, const std::string& source = "<string>");

}  // namespace sequil
