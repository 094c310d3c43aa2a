#include "sequil/export.h"

#include "json.hpp"
#include "sequil/error.h"

namespace sequil {
namespace {

using nlohmann::json;

json parse_doc(const std::string& text, const std::string& source, const char* type) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(source + ": " + e.what());
  }
  if (!doc.is_object()) throw ValidationError(source + ": expected an object");
  if (doc.value("format_version", 0) != kExportFormatVersion) {
    throw ValidationError(source + ": unsupported format_version");
  }
  if (doc.value("type", std::string()) != type) {
    throw ValidationError(source + ": expected type \"" + type + "\"");
  }
  return doc;
}

}  // namespace

std::string export_regions(const RegionSet& set) {
  json doc = json::object();
  doc["format_version"] = kExportFormatVersion;
  doc["type"] = "regions";
  doc["game"] = set.game_id;
  doc["epsilon"] = set.epsilon;
  doc["kind"] = set.kind == RegionKind::kChoice ? "choice" : "belief";
  doc["space"] = set.space.mode == SpaceMode::kSymmetric ? "symmetric" : "product";
  doc["factor_counts"] = set.space.factor_counts;
  doc["grid_m"] = set.grid.num_factors() > 0 ? set.grid.factor(0).m() : 0;
  doc["union_measure"] = set.union_measure();
  json regions = json::array();
  for (const auto& r : set.regions) {
    json o = json::object();
    o["component_id"] = r.component_id;
    o["cells"] = r.cells;
    o["points"] = r.points;
    o["pattern"] = r.pattern;
    o["color"] = r.color ? json(*r.color) : json(nullptr);
    o["measure"] = r.measure;
    o["dimension"] = r.dimension;
    o["full_dimensional"] = r.full_dimensional;
    o["robust"] = r.robust;
    o["colorable"] = r.colorable;
    regions.push_back(std::move(o));
  }
  doc["regions"] = std::move(regions);
  doc["diagnostic"] = set.diagnostic;
  return doc.dump(1) + "\n";
}

RegionSet import_regions(const std::string& text, const std::string& source) {
  const json doc = parse_doc(text, source, "regions");
  RegionSet set;
  try {
    set.game_id = doc.at("game").get<std::string>();
    set.epsilon = doc.at("epsilon").get<double>();
    const auto kind = doc.at("kind").get<std::string>();
    if (kind != "choice" && kind != "belief") throw ValidationError(source + ": bad kind " + kind);
    set.kind = kind == "choice" ? RegionKind::kChoice : RegionKind::kBelief;
    const auto space = doc.at("space").get<std::string>();
    if (space != "symmetric" && space != "product") {
      throw ValidationError(source + ": bad space " + space);
    }
    set.space.mode = space == "symmetric" ? SpaceMode::kSymmetric : SpaceMode::kProduct;
    set.space.factor_counts = doc.at("factor_counts").get<std::vector<int>>();
    set.grid = make_grid(set.space, doc.at("grid_m").get<int>());
    set.cell_region.assign(set.grid.num_cells(), -1);
    for (const auto& o : doc.at("regions")) {
      Region r;
      r.component_id = o.at("component_id").get<int>();
      r.cells = o.at("cells").get<std::vector<int64_t>>();
      r.points = o.at("points").get<std::vector<std::vector<std::vector<double>>>>();
      r.pattern = o.at("pattern").get<std::vector<unsigned>>();
      if (!o.at("color").is_null()) r.color = o.at("color").get<std::vector<unsigned>>();
      r.measure = o.at("measure").get<double>();
      r.dimension = o.at("dimension").get<int>();
      r.full_dimensional = o.at("full_dimensional").get<bool>();
      r.robust = o.at("robust").get<bool>();
      r.colorable = o.at("colorable").get<bool>();
      for (int64_t c : r.cells) {
        if (c < 0 || c >= set.grid.num_cells()) throw ValidationError(source + ": cell out of range");
        if (r.measure > 0.0) set.cell_region[c] = static_cast<int32_t>(set.regions.size());
      }
      set.regions.push_back(std::move(r));
    }
    set.diagnostic = doc.value("diagnostic", std::string());
  } catch (const json::exception& e) {
    throw ValidationError(source + ": " + e.what());
  }
  return set;
}

std::string export_curve(const ModelCurve& curve) {
  json doc = json::object();
  doc["format_version"] = kExportFormatVersion;
  doc["type"] = "curve";
  doc["game"] = curve.game_id;
  doc["model"] = model_name(curve.model);
  json samples = json::array();
  for (const auto& s : curve.samples) {
    samples.push_back({{"parameter", s.parameter},
                       {"profile", s.profile.to_vectors()},
                       {"residual", s.residual}});
  }
  doc["samples"] = std::move(samples);
  doc["diagnostic"] = curve.diagnostic;
  return doc.dump(1) + "\n";
}

ModelCurve import_curve(const std::string& text, const std::string& source) {
  const json doc = parse_doc(text, source, "curve");
  ModelCurve curve;
  try {
    curve.game_id = doc.at("game").get<std::string>();
    curve.model = parse_model(doc.at("model").get<std::string>());
    for (const auto& s : doc.at("samples")) {
      CurveSample c;
      c.parameter = s.at("parameter").get<double>();
      c.profile = Profile::from_vectors(s.at("profile").get<std::vector<std::vector<double>>>());
      c.residual = s.at("residual").get<double>();
      curve.samples.push_back(std::move(c));
    }
    curve.diagnostic = doc.value("diagnostic", std::string());
  } catch (const json::exception& e) {
    throw ValidationError(source + ": " + e.what());
  }
  return curve;
}

}  // namespace sequil
