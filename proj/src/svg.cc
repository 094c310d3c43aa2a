#include "sequil/svg.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

#include "sequil/error.h"

namespace sequil {
namespace {

constexpr double kMargin = 36.0;
constexpr double kCoordTol = 1e-9;
const double kSqrt3Half = std::sqrt(3.0) / 2.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Maps data coordinates to canvas pixels.
class Canvas {
 public:
  Canvas(const PlotSpec& spec, bool ternary) : ternary_(ternary) {
    const double w = spec.width - 2 * kMargin;
    const double h = spec.height - 2 * kMargin - (spec.title.empty() ? 0.0 : 16.0);
    side_ = ternary ? std::min(w, h / kSqrt3Half) : std::min(w, h);
    x0_ = (spec.width - side_) / 2.0;
    y0_ = spec.height - kMargin;
  }

  std::array<double, 2> map(const PlotPoint& p) const {
    std::array<double, 2> xy;
    if (ternary_) {
      if (p.size() != 3 || !is_simplex_vector(p, kCoordTol)) {
        throw ValidationError("ternary plot point is not a probability vector");
      }
      xy = ternary_to_xy(p);
    } else {
      if (p.size() != 2 || p[0] < -kCoordTol || p[0] > 1 + kCoordTol || p[1] < -kCoordTol ||
          p[1] > 1 + kCoordTol) {
        throw ValidationError("square plot point lies outside the unit square");
      }
      xy = {p[0], p[1]};
    }
    return {x0_ + xy[0] * side_, y0_ - xy[1] * side_};
  }

  double side() const { return side_; }
  double x0() const { return x0_; }
  double y0() const { return y0_; }

 private:
  bool ternary_;
  double side_, x0_, y0_;
};

std::string points_attr(const Canvas& cv, const std::vector<PlotPoint>& pts) {
  std::string s;
  for (const auto& p : pts) {
    const auto xy = cv.map(p);
    if (!s.empty()) s += ' ';
    s += fmt(xy[0]) + "," + fmt(xy[1]);
  }
  return s;
}

std::string marker_svg(const Canvas& cv, const Marker& m) {
  const auto c = cv.map(m.point);
  const double r = m.size;
  std::string out;
  switch (m.shape) {
    case MarkerShape::kCircle:
      return "<circle cx=\"" + fmt(c[0]) + "\" cy=\"" + fmt(c[1]) + "\" r=\"" + fmt(r / 2) +
             "\" fill=\"" + m.color + "\"/>\n";
    case MarkerShape::kDiamond:
      out = fmt(c[0]) + "," + fmt(c[1] - r) + " " + fmt(c[0] + r * 0.7) + "," + fmt(c[1]) + " " +
            fmt(c[0]) + "," + fmt(c[1] + r) + " " + fmt(c[0] - r * 0.7) + "," + fmt(c[1]);
      break;
    case MarkerShape::kStar:
      for (int i = 0; i < 10; ++i) {
        const double a = -std::numbers::pi / 2 + i * std::numbers::pi / 5;
        const double rr = i % 2 == 0 ? r : r * 0.42;
        if (i) out += ' ';
        out += fmt(c[0] + rr * std::cos(a)) + "," + fmt(c[1] + rr * std::sin(a));
      }
      break;
  }
  return "<polygon points=\"" + out + "\" fill=\"" + m.color + "\" stroke=\"#000000\" stroke-width=\"0.6\"/>\n";
}

std::string layers_svg(const Canvas& cv, const PlotSpec& spec) {
  std::string out;
  for (const auto& f : spec.fills) {
    out += "<g fill=\"" + f.color + "\" fill-opacity=\"" + fmt(f.opacity) + "\" stroke=\"none\">\n";
    for (const auto& poly : f.polygons) out += "<polygon points=\"" + points_attr(cv, poly) + "\"/>\n";
    out += "</g>\n";
  }
  for (const auto& c : spec.curves) {
    if (c.dots) {
      for (const auto& p : c.points) {
        const auto xy = cv.map(p);
        out += "<circle cx=\"" + fmt(xy[0]) + "\" cy=\"" + fmt(xy[1]) + "\" r=\"1.800\" fill=\"" +
               c.color + "\"/>\n";
      }
      continue;
    }
    out += std::string("<") + (c.closed ? "polygon" : "polyline") + " points=\"" +
           points_attr(cv, c.points) + "\" fill=\"none\" stroke=\"" + c.color +
           "\" stroke-width=\"1.500\"" + (c.dashed ? " stroke-dasharray=\"4,3\"" : "") + "/>\n";
  }
  for (const auto& m : spec.markers) out += marker_svg(cv, m);
  return out;
}

std::string header(const PlotSpec& spec) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(spec.width) + "\" height=\"" + std::to_string(spec.height) +
         "\" viewBox=\"0 0 " + std::to_string(spec.width) + " " + std::to_string(spec.height) +
         "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(spec.width) + "\" height=\"" +
         std::to_string(spec.height) + "\" fill=\"#ffffff\"/>\n";
  if (!spec.title.empty()) {
    out += "<text x=\"" + fmt(spec.width / 2.0) +
           "\" y=\"18.000\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" +
           escape(spec.title) + "</text>\n";
  }
  return out;
}

std::string text(double x, double y, const std::string& s, const char* anchor) {
  return "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"" + anchor + "\">" +
         escape(s) + "</text>\n";
}

std::string fill_color(const Region& r, const std::vector<int>& counts) {
  if (!r.color) return kUncoloredFill;
  int key = 0;
  for (size_t f = 0; f < r.color->size(); ++f) {
    const unsigned mask = (*r.color)[f];
    if (std::popcount(mask) != 1) return kUncoloredFill;
    key = key * counts[f] + std::countr_zero(mask);
  }
  return strategy_color(key);
}

PlotPoint lattice_point(int n, int i, int j) {
  return {static_cast<double>(n - i - j) / n, static_cast<double>(i) / n,
          static_cast<double>(j) / n};
}

void add_thin(PlotSpec& spec, const Region& r, bool ternary) {
  CurveLayer dots;
  dots.dots = true;
  dots.color = "#404040";
  if (r.color) {
    std::vector<int> counts;
    for (const auto& f : r.points.front()) counts.push_back(static_cast<int>(f.size()));
    dots.color = fill_color(r, counts);
  }
  for (const auto& pt : r.points) {
    if (ternary) {
      dots.points.push_back(pt[0]);
    } else {
      dots.points.push_back({pt[1][0], pt[0][0]});
    }
  }
  spec.curves.push_back(std::move(dots));
}

}  // namespace

const std::string& strategy_color(int k) {
  static const std::vector<std::string> palette = {"#d62728", "#1f77b4", "#e8b90c",
                                                   "#2ca02c", "#9467bd", "#8c564b",
                                                   "#e377c2", "#17becf", "#7f7f7f"};
  return palette[static_cast<size_t>(k) % palette.size()];
}

std::array<double, 2> ternary_to_xy(std::span<const double> bary) {
  return {bary[1] + bary[2] / 2.0, bary[2] * kSqrt3Half};
}

std::array<double, 3> xy_to_ternary(double x, double y) {
  const double y3 = y / kSqrt3Half;
  const double b = x - y3 / 2.0;
  return {1.0 - b - y3, b, y3};
}

void add_regions_ternary(PlotSpec& spec, const RegionSet& set) {
  if (set.grid.num_factors() != 1 || set.grid.factor(0).k() != 3) {
    throw ValidationError("ternary plots need a single 3-strategy simplex");
  }
  const SimplexGrid& g = set.grid.factor(0);
  const int n = g.subdivisions();
  for (const auto& r : set.regions) {
    if (!r.points.empty()) {
      add_thin(spec, r, true);
      continue;
    }
    FillLayer layer;
    layer.color = fill_color(r, set.space.factor_counts);
    // Row j -> positions along the row (up i -> 2i, down i -> 2i + 1).
    std::map<int, std::vector<int>> rows;
    for (int64_t c : r.cells) {
      const auto& idx = g.cell_index(static_cast<int>(c));
      rows[idx.j].push_back(2 * idx.i + idx.type);
    }
    for (auto& [j, pos] : rows) {
      std::sort(pos.begin(), pos.end());
      size_t a = 0;
      while (a < pos.size()) {
        size_t b = a;
        while (b + 1 < pos.size() && pos[b + 1] == pos[b] + 1) ++b;
        const int s = pos[a], e = pos[b];
        // Bottom edge spans lattice columns [lo, hi] on row j, top edge on j+1.
        const int bot_lo = (s + 1) / 2, bot_hi = e / 2 + 1;
        const int top_lo = s / 2, top_hi = (e + 1) / 2;
        std::vector<PlotPoint> poly = {lattice_point(n, bot_lo, j), lattice_point(n, bot_hi, j)};
        if (top_hi > top_lo) {
          poly.push_back(lattice_point(n, top_hi, j + 1));
          poly.push_back(lattice_point(n, top_lo, j + 1));
        } else {
          poly.push_back(lattice_point(n, top_lo, j + 1));
        }
        if (bot_hi == bot_lo) poly.erase(poly.begin());
        layer.polygons.push_back(std::move(poly));
        a = b + 1;
      }
    }
    spec.fills.push_back(std::move(layer));
  }
}

void add_regions_square(PlotSpec& spec, const RegionSet& set) {
  if (set.grid.num_factors() != 2 || set.grid.factor(0).k() != 2 || set.grid.factor(1).k() != 2) {
    throw ValidationError("square plots need two 2-strategy factors");
  }
  const int n0 = set.grid.factor(0).subdivisions();
  const int n1 = set.grid.factor(1).subdivisions();
  for (const auto& r : set.regions) {
    if (!r.points.empty()) {
      add_thin(spec, r, false);
      continue;
    }
    FillLayer layer;
    layer.color = fill_color(r, set.space.factor_counts);
    std::map<int, std::vector<int>> rows;
    int parts[2];
    for (int64_t c : r.cells) {
      set.grid.decode(c, parts);
      rows[parts[0]].push_back(parts[1]);
    }
    for (auto& [a0, cols] : rows) {
      std::sort(cols.begin(), cols.end());
      const double y_hi = 1.0 - static_cast<double>(a0) / n0;
      const double y_lo = 1.0 - static_cast<double>(a0 + 1) / n0;
      size_t a = 0;
      while (a < cols.size()) {
        size_t b = a;
        while (b + 1 < cols.size() && cols[b + 1] == cols[b] + 1) ++b;
        const double x_hi = 1.0 - static_cast<double>(cols[a]) / n1;
        const double x_lo = 1.0 - static_cast<double>(cols[b] + 1) / n1;
        layer.polygons.push_back({{x_lo, y_lo}, {x_hi, y_lo}, {x_hi, y_hi}, {x_lo, y_hi}});
        a = b + 1;
      }
    }
    spec.fills.push_back(std::move(layer));
  }
}

void add_restricted_outline(PlotSpec& spec, RestrictedKind kind, double eps) {
  const RestrictedSimplex rs = restricted_vertices(3, eps, kind);
  std::vector<PlotPoint> pts(rs.vertices.begin(), rs.vertices.end());
  // Order around the centroid so the outline is a simple polygon.
  auto angle = [](const PlotPoint& p) {
    const auto xy = ternary_to_xy(p);
    return std::atan2(xy[1] - kSqrt3Half / 3.0, xy[0] - 0.5);
  };
  std::stable_sort(pts.begin(), pts.end(),
                   [&](const PlotPoint& a, const PlotPoint& b) { return angle(a) < angle(b); });
  CurveLayer c;
  c.points = std::move(pts);
  c.dashed = true;
  c.closed = true;
  c.color = "#555555";
  spec.curves.push_back(std::move(c));
}

std::string render_ternary(const PlotSpec& spec) {
  const Canvas cv(spec, true);
  std::string out = header(spec);
  out += layers_svg(cv, spec);
  const auto r = cv.map({1, 0, 0}), b = cv.map({0, 1, 0}), y = cv.map({0, 0, 1});
  out += "<polygon points=\"" + fmt(r[0]) + "," + fmt(r[1]) + " " + fmt(b[0]) + "," + fmt(b[1]) +
         " " + fmt(y[0]) + "," + fmt(y[1]) +
         "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.200\"/>\n";
  const std::vector<std::string> labels =
      spec.labels.size() == 3 ? spec.labels : std::vector<std::string>{"R", "B", "Y"};
  out += text(r[0] - 6, r[1] + 16, labels[0], "end");
  out += text(b[0] + 6, b[1] + 16, labels[1], "start");
  out += text(y[0], y[1] - 8, labels[2], "middle");
  out += "</svg>\n";
  return out;
}

std::string render_square(const PlotSpec& spec) {
  const Canvas cv(spec, false);
  std::string out = header(spec);
  out += layers_svg(cv, spec);
  out += "<rect x=\"" + fmt(cv.x0()) + "\" y=\"" + fmt(cv.y0() - cv.side()) + "\" width=\"" +
         fmt(cv.side()) + "\" height=\"" + fmt(cv.side()) +
         "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.200\"/>\n";
  const std::vector<std::string> labels =
      spec.labels.size() == 2 ? spec.labels : std::vector<std::string>{"p", "q"};
  out += text(cv.x0(), cv.y0() + 16, "0", "middle");
  out += text(cv.x0() + cv.side(), cv.y0() + 16, "1", "middle");
  out += text(cv.x0() - 8, cv.y0() - cv.side() + 4, "1", "end");
  out += text(cv.x0() + cv.side() / 2, cv.y0() + 28, labels[0], "middle");
  out += text(cv.x0() - 8, cv.y0() - cv.side() / 2, labels[1], "end");
  out += "</svg>\n";
  return out;
}

}  // namespace sequil
