#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "helpers.h"
#include "sequil/error.h"
#include "sequil/regions.h"
#include "sequil/svg.h"

using namespace sequil;
using sequil::fixture::bundled;

namespace {

const std::filesystem::path kGolden = SEQUIL_GOLDEN_DIR;

// Set SEQUIL_UPDATE_GOLDEN=1 to rewrite the expected files.
void check_golden(const std::string& name, const std::string& svg) {
  const auto path = kGolden / name;
  if (std::getenv("SEQUIL_UPDATE_GOLDEN")) {
    std::filesystem::create_directories(kGolden);
    std::ofstream(path, std::ios::binary) << svg;
    return;
  }
  std::ifstream in(path, std::ios::binary);
  ASSERT_TRUE(in) << "missing " << path;
  std::ostringstream want;
  want << in.rdbuf();
  EXPECT_EQ(svg, want.str()) << name;
}

std::set<std::string> fill_colors(const std::string& svg) {
  std::set<std::string> out;
  const std::string key = "<g fill=\"";
  for (size_t at = svg.find(key); at != std::string::npos; at = svg.find(key, at + 1))
    out.insert(svg.substr(at + key.size(), 7));
  return out;
}

}  // namespace

TEST(Svg, BarycentricRoundTrip) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    const auto p = sequil::fixture::random_simplex(rng, 3);
    const auto xy = ternary_to_xy(p);
    const auto back = xy_to_ternary(xy[0], xy[1]);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(back[k], p[k], 1e-12);
  }
  const std::vector<double> y = {0, 0, 1};
  EXPECT_NEAR(ternary_to_xy(y)[1], std::sqrt(3.0) / 2, 1e-15);
}

TEST(Svg, EmptyTernaryHasOutlineAndLabels) {
  PlotSpec spec;
  spec.labels = {"R", "B", "Y"};
  const std::string svg = render_ternary(spec);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  for (const char* l : {">R<", ">B<", ">Y<"}) EXPECT_NE(svg.find(l), std::string::npos) << l;
  EXPECT_TRUE(fill_colors(svg).empty());
}

TEST(Svg, OutOfRangePointsThrow) {
  PlotSpec spec;
  spec.markers.push_back(Marker{{0.7, 0.7, -0.4}});
  EXPECT_THROW(render_ternary(spec), ValidationError);
  PlotSpec sq;
  sq.markers.push_back(Marker{{1.5, 0.2}});
  EXPECT_THROW(render_square(sq), ValidationError);
}

TEST(Svg, ChainStoreSquare) {
  const int m = 41;
  const double h = 1.0 / (m - 1);
  const RegionSet set = enumerate_s_choice_sets(bundled("chain_store"), 1.0 / 3, m);
  PlotSpec spec;
  add_regions_square(spec, set);
  // The full region sits in the corner where both players mostly play
  // their second strategy.
  int full = 0;
  for (const auto& f : spec.fills) {
    for (const auto& poly : f.polygons)
      for (const auto& pt : poly) {
        EXPECT_GE(pt[0], -1e-12);
        EXPECT_LE(pt[0], 0.25 + 2 * h);
        EXPECT_LE(pt[1], 0.25 + 2 * h);
      }
    ++full;
  }
  EXPECT_EQ(full, 1);
  spec.title = "chain store, eps = 1/3";
  spec.labels = {"P(F)", "P(N)"};
  check_golden("chain_store_square.svg", render_square(spec));
}

TEST(Svg, G3Ternary) {
  const RegionSet set = enumerate_s_choice_sets(bundled("g3"), 0.5, 31);
  PlotSpec spec;
  spec.labels = {"R", "B", "Y"};
  add_regions_ternary(spec, set);
  add_restricted_outline(spec, RestrictedKind::kProper, 0.5);
  spec.markers.push_back(Marker{{1.0 / 3, 1.0 / 3, 1.0 / 3}, MarkerShape::kStar});
  const std::string svg = render_ternary(spec);
  EXPECT_EQ(fill_colors(svg).size(), 3u);
  check_golden("g3_ternary.svg", svg);
}

TEST(Svg, SquareNeedsTwoByTwo) {
  PlotSpec spec;
  EXPECT_THROW(add_regions_square(spec, enumerate_s_choice_sets(bundled("g1"), 0.5, 11)),
               ValidationError);
}
