#pragma once

// Standalone SVG figures: ternary plots of one 3-strategy simplex and
// unit-square plots of 2x2 games.
//
// Ternary coordinates are probability vectors (R, B, Y) drawn at
// R = (0, 0), B = (1, 0), Y = (1/2, sqrt(3)/2). Square coordinates are
// (x, y) = (player 2's first-strategy probability, player 1's
// first-strategy probability).

#include <array>
#include <span>
#include <string>
#include <vector>

#include "sequil/regions.h"
#include "sequil/restricted.h"

namespace sequil {

using PlotPoint = std::vector<double>;

struct FillLayer {
  std::vector<std::vector<PlotPoint>> polygons;
  std::string color;
  double opacity = 0.85;
};

struct CurveLayer {
  std::vector<PlotPoint> points;
  std::string color = "#000000";
  bool dashed = false;
  bool closed = false;
  // Draw the samples as dots instead of a polyline.
  bool dots = false;
};

enum class MarkerShape { kStar, kDiamond, kCircle };

struct Marker {
  PlotPoint point;
  MarkerShape shape = MarkerShape::kCircle;
  std::string color = "#ff7f0e";
  double size = 7.0;
};

struct PlotSpec {
  int width = 420;
  int height = 400;
  std::string title;
  // Ternary: labels of R, B, Y. Square: x-axis and y-axis labels.
  std::vector<std::string> labels;
  std::vector<FillLayer> fills;
  std::vector<CurveLayer> curves;
  std::vector<Marker> markers;
};

// Fixed palette keyed by strategy index.
const std::string& strategy_color(int k);
inline constexpr const char* kUncoloredFill = "#b0b0b0";

std::array<double, 2> ternary_to_xy(std::span<const double> bary);
std::array<double, 3> xy_to_ternary(double x, double y);

// Lattice cells of each region merged into row runs; thin regions become
// dot curves. Ternary plots need a one-factor space with K = 3; square
// plots two factors with K = 2.
void add_regions_ternary(PlotSpec& spec, const RegionSet& set);
void add_regions_square(PlotSpec& spec, const RegionSet& set);

// Dashed outline of the restricted polytope of a 3-strategy simplex.
void add_restricted_outline(PlotSpec& spec, RestrictedKind kind, double eps);

// Throws ValidationError for points outside the simplex or the square.
std::string render_ternary(const PlotSpec& spec);
std::string render_square(const PlotSpec& spec);

}  // namespace sequil
