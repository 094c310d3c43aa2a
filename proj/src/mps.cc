#include "sequil/mps.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "sequil/error.h"
#include "sequil/parallel.h"
#include "sequil/potential.h"

namespace sequil {

double mps_value(double hit_rate, double area_size) { return hit_rate - area_size; }

std::vector<std::vector<std::vector<double>>> hit_points(
    const GameData& data, const std::vector<Observation>& rows, HitUnit unit) {
  const bool sym = data.space.mode == SpaceMode::kSymmetric;
  const int nf = data.space.num_factors();
  auto factor_of = [&](const Observation& o) { return sym ? 0 : o.role; };
  std::vector<std::vector<std::vector<double>>> out;
  if (unit == HitUnit::kObservation) {
    if (!sym) throw ValidationError("single-choice hits need a symmetric game");
    for (const auto& o : rows) {
      if (o.game != data.game.id()) continue;
      std::vector<double> v(data.space.factor_counts[0], 0.0);
      v[o.choice] = 1.0;
      out.push_back({v});
    }
    return out;
  }
  std::map<std::string, std::vector<std::vector<double>>> session_avg;
  for (const auto& s : data.sessions) session_avg[s.session] = s.frequencies();
  if (unit == HitUnit::kSessionAverage) {
    for (const auto& s : data.sessions) out.push_back(session_avg[s.session]);
    return out;
  }
  // Subject key -> (session, factor, counts).
  struct Subject {
    std::string session;
    int factor = 0;
    std::vector<double> counts;
  };
  std::map<std::pair<std::string, std::string>, Subject> subjects;
  for (const auto& o : rows) {
    if (o.game != data.game.id()) continue;
    auto& s = subjects[{o.session, o.subject}];
    if (s.counts.empty()) {
      s.session = o.session;
      s.factor = factor_of(o);
      s.counts.assign(data.space.factor_counts[s.factor], 0.0);
    }
    if (factor_of(o) != s.factor) throw ValidationError("subject " + o.subject + " changes role");
    s.counts[o.choice] += 1.0;
  }
  for (auto& [key, s] : subjects) {
    double t = 0.0;
    for (double c : s.counts) t += c;
    auto pt = session_avg[s.session];
    pt.resize(nf);
    for (size_t k = 0; k < s.counts.size(); ++k) pt[s.factor][k] = s.counts[k] / t;
    out.push_back(std::move(pt));
  }
  return out;
}

MpsEvaluator::MpsEvaluator(const Game& game, const AnalysisSpace& space, int m)
    : game_(game), space_(space) {
  const ProductGrid grid = make_grid(space, m);
  cell_thresholds_.resize(grid.num_cells());
  parallel_for(grid.num_cells(), [&](int64_t b, int64_t e) {
    Profile p(game.strategy_counts());
    std::vector<int> parts(grid.num_factors());
    std::vector<std::span<const double>> views(grid.num_factors());
    for (int64_t c = b; c < e; ++c) {
      grid.decode(c, parts);
      for (int f = 0; f < grid.num_factors(); ++f) views[f] = grid.factor(f).center(parts[f]);
      space.fill_profile(views, p);
      cell_thresholds_[c] = membership_threshold(game, p);
    }
  });
  std::sort(cell_thresholds_.begin(), cell_thresholds_.end());
}

double MpsEvaluator::threshold(const std::vector<std::vector<double>>& point) const {
  Profile p(game_.strategy_counts());
  std::vector<std::span<const double>> views(point.begin(), point.end());
  space_.fill_profile(views, p);
  return membership_threshold(game_, p);
}

double MpsEvaluator::area(double eps) const {
  const auto it = std::lower_bound(cell_thresholds_.begin(), cell_thresholds_.end(), eps);
  return static_cast<double>(it - cell_thresholds_.begin()) / cell_thresholds_.size();
}

MpsResult MpsEvaluator::evaluate(const std::vector<std::vector<std::vector<double>>>& points,
                                 double eps) const {
  MpsResult r;
  r.epsilon = eps;
  r.points = static_cast<int>(points.size());
  for (const auto& pt : points) r.hits += threshold(pt) < eps ? 1 : 0;
  r.hit_rate = r.points > 0 ? static_cast<double>(r.hits) / r.points : 0.0;
  r.area_size = area(eps);
  r.mps = mps_value(r.hit_rate, r.area_size);
  return r;
}

MpsResult MpsEvaluator::best(const std::vector<std::vector<std::vector<double>>>& points) const {
  std::vector<double> thresholds;
  for (const auto& pt : points) thresholds.push_back(threshold(pt));
  std::vector<double> candidates = eps_grid(0.01);
  for (double r : thresholds) {
    // Just above the point's threshold, where it first becomes a hit.
    const double e = std::nextafter(r, 2.0);
    if (e > 0.0 && e <= 1.0) candidates.push_back(e);
  }
  std::sort(candidates.begin(), candidates.end());
  std::sort(thresholds.begin(), thresholds.end());
  MpsResult best;
  best.mps = -2.0;
  for (double e : candidates) {
    MpsResult r;
    r.epsilon = e;
    r.points = static_cast<int>(points.size());
    r.hits = static_cast<int>(std::lower_bound(thresholds.begin(), thresholds.end(), e) -
                              thresholds.begin());
    r.hit_rate = r.points > 0 ? static_cast<double>(r.hits) / r.points : 0.0;
    r.area_size = area(e);
    r.mps = mps_value(r.hit_rate, r.area_size);
    if (r.mps > best.mps + 1e-12) best = r;
  }
  return best;
}

MpsResult pooled_mps(const std::vector<MpsResult>& per_game) {
  MpsResult r;
  if (per_game.empty()) return r;
  r.epsilon = per_game[0].epsilon;
  for (const auto& g : per_game) {
    r.hits += g.hits;
    r.points += g.points;
    r.area_size += g.area_size / per_game.size();
  }
  r.hit_rate = r.points > 0 ? static_cast<double>(r.hits) / r.points : 0.0;
  r.mps = mps_value(r.hit_rate, r.area_size);
  return r;
}

}  // namespace sequil
