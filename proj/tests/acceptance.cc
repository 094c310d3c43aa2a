// Acceptance checks: one PASS/FAIL line per criterion. Tolerances are
// fixed here. Exit status is the number of failed criteria not named with
// --known-failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sequil/error.h"
#include "sequil/estimation.h"
#include "sequil/export.h"
#include "sequil/game.h"
#include "sequil/game_io.h"
#include "sequil/level_k.h"
#include "sequil/logit.h"
#include "sequil/mps.h"
#include "sequil/nash.h"
#include "sequil/potential.h"
#include "sequil/regions.h"
#include "sequil/restricted.h"
#include "sequil/simplex_grid.h"
#include "sequil/simulate.h"
#include "sequil/stats.h"

using namespace sequil;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void fail(Outcome& o, const std::string& why) {
  o.pass = false;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += why;
}

void note(Outcome& o, const std::string& what) {
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += what;
}

const std::map<std::string, Game>& games() {
  static const std::map<std::string, Game> all = load_game_dir(bundled_game_dir());
  return all;
}

std::vector<double> eps_list() {
  std::vector<double> out;
  for (int i = 1; i <= 10; ++i) out.push_back(i / 10.0);
  return out;
}

// The entrant stays out for sure: the incumbent's tie between fighting and
// accommodating makes this edge a continuum of Nash equilibria, which is an
// S(eps) set for every eps but not part of the figure being checked.
bool is_stay_out_edge(const Region& r) {
  if (r.measure > 0.0 || r.points.empty()) return false;
  for (const auto& p : r.points)
    if (p[0][0] < 1.0 - 1e-12) return false;
  return true;
}

std::vector<const Region*> without_stay_out(const RegionSet& set) {
  std::vector<const Region*> out;
  for (const Region& r : set.regions)
    if (!is_stay_out_edge(r)) out.push_back(&r);
  return out;
}

// Largest probability of a non-color strategy over a region's cell extent.
double color_threshold(const RegionSet& set, const Region& r, int f) {
  const SimplexGrid& g = set.grid.factor(f);
  std::vector<int> parts(set.grid.num_factors());
  double hi = 0.0;
  for (int64_t c : r.cells) {
    set.grid.decode(c, parts);
    for (const auto& corner : g.corners(parts[f]))
      for (int k = 0; k < g.k(); ++k)
        if (!((*r.color)[f] >> k & 1u)) hi = std::max(hi, corner[k]);
  }
  return hi;
}

Outcome ac01() {
  Outcome o;
  const Game& game = games().at("chain_store");
  const int m = 200;
  const double h = 1.0 / (m - 1);

  Timer t;
  const RegionSet lo = enumerate_s_choice_sets(game, 1.0 / 3.0, m);
  const double secs = t.seconds();
  if (secs >= 1.0) fail(o, "eps=1/3 took " + fmt("%.2f s", secs));

  auto lo_regions = without_stay_out(lo);
  if (lo_regions.size() != 1) {
    fail(o, "eps=1/3 components " + std::to_string(lo_regions.size()));
  } else {
    const Region& r = *lo_regions[0];
    if (!r.full_dimensional || !r.colorable) fail(o, "eps=1/3 set not full/colorable");
    for (int f = 0; f < 2 && r.color; ++f) {
      const double th = color_threshold(lo, r, f);
      if (std::abs(th - 0.25) > 2 * h) fail(o, "threshold " + fmt("%.4f", th));
    }
    const double a = 0.25 - 2 * h, b = 0.25 + 2 * h;
    if (r.measure < a * a || r.measure > b * b) fail(o, "measure " + fmt("%.5f", r.measure));
    note(o, "eps=1/3 measure " + fmt("%.5f", r.measure) + " in " + fmt("%.3f s", secs));
  }

  const RegionSet hi = enumerate_s_choice_sets(game, 2.0 / 3.0, m);
  auto hi_regions = without_stay_out(hi);
  int full = 0, thin = 0;
  for (const Region* r : hi_regions) {
    if (r->full_dimensional && r->colorable) {
      ++full;
    } else if (!r->full_dimensional && !r->colorable && r->dimension == 1) {
      bool on_line = !r->points.empty();
      for (const auto& p : r->points) on_line = on_line && std::abs(p[1][0] - 1.0 / 3.0) < 1e-9;
      if (on_line) ++thin;
    }
  }
  if (hi_regions.size() != 3 || full != 2 || thin != 1)
    fail(o, "eps=2/3 components " + std::to_string(hi_regions.size()) + " full " +
                std::to_string(full) + " thin " + std::to_string(thin));
  return o;
}

Outcome ac02() {
  Outcome o;
  const Game& game = games().at("g3");
  Timer t;
  for (auto [eps, target] : {std::pair{0.5, 1.0 / 12.0}, std::pair{1.0, 1.0 / 6.0}}) {
    const RegionSet set = enumerate_s_choice_sets(game, eps, 200);
    int count = 0;
    for (const Region& r : set.regions) {
      if (!(r.full_dimensional && r.colorable)) continue;
      ++count;
      const double rel = std::abs(r.measure - target) / target;
      if (rel > 0.05) fail(o, "eps=" + fmt("%.1f", eps) + " measure " + fmt("%.5f", r.measure));
    }
    if (count != 3) fail(o, "eps=" + fmt("%.1f", eps) + " sets " + std::to_string(count));
  }
  const double secs = t.seconds();
  if (secs >= 5.0) fail(o, "took " + fmt("%.2f s", secs));
  note(o, fmt("%.3f s", secs));
  return o;
}

Outcome ac03() {
  Outcome o;
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pay(0, 150);
  const int m = 60;
  int64_t checked = 0, agree = 0;
  for (int g = 0; g < 10; ++g) {
    std::vector<std::vector<double>> t(2, std::vector<double>(9));
    for (auto& v : t)
      for (double& x : v) x = pay(rng);
    const Game game("random" + std::to_string(g), {3, 3}, t);
    const AnalysisSpace space = make_space(game, SpaceMode::kProduct);
    const ProductGrid grid = make_grid(space, m);
    const SimplexGrid& sg = grid.factor(0);
    Profile p({3, 3});
    {
      const double eps = 0.1 + 0.08 * g;
      for (int a = 0; a < sg.num_cells(); ++a) {
        std::copy(sg.center(a).begin(), sg.center(a).end(), p[0].begin());
        for (int b = 0; b < sg.num_cells(); ++b) {
          std::copy(sg.center(b).begin(), sg.center(b).end(), p[1].begin());
          const bool root = is_potential_root(potential_value(game, p, eps));
          const bool direct = is_s_choice_point(game, p, eps);
          ++checked;
          if (root == direct) ++agree;
        }
      }
    }
  }
  if (agree != checked) fail(o, std::to_string(checked - agree) + " disagreements");
  note(o, std::to_string(checked) + " cells, eps 0.10 to 0.82");
  return o;
}

std::vector<std::vector<std::vector<double>>> nash_points(const Game& game) {
  std::vector<std::vector<std::vector<double>>> out;
  if (default_space(game).mode == SpaceMode::kSymmetric) {
    for (auto& v : symmetric_nash(game)) out.push_back({v});
  } else {
    for (const Profile& p : support_enumeration_nash(game).equilibria) out.push_back(p.to_vectors());
  }
  return out;
}

Outcome ac04() {
  Outcome o;
  const int m = 121;
  int nash_checked = 0;
  for (const auto& [id, game] : games()) {
    const auto nash = nash_points(game);
    std::vector<int32_t> prev;
    for (double eps : eps_list()) {
      const RegionSet set = enumerate_s_choice_sets(game, eps, m);
      if (!prev.empty()) {
        for (size_t c = 0; c < prev.size(); ++c)
          if (prev[c] >= 0 && set.cell_region[c] < 0) {
            fail(o, id + " not nested at eps=" + fmt("%.1f", eps));
            break;
          }
      }
      prev = set.cell_region;
      for (const auto& pt : nash) {
        ++nash_checked;
        if (!hit_test(set, game, pt)) fail(o, id + " Nash point outside at eps=" + fmt("%.1f", eps));
      }
    }
  }
  note(o, std::to_string(nash_checked) + " Nash checks");
  return o;
}

// Measure of the cells of the set with a face neighbour outside it: the
// most a cell-centred count can overstate the set.
double boundary_allowance(const ProductGrid& grid, const std::vector<int64_t>& cells,
                          const std::function<bool(int64_t)>& inside) {
  std::vector<int64_t> nb;
  int64_t edge = 0;
  for (int64_t c : cells) {
    grid.neighbors(c, nb);
    bool open = false;
    for (int64_t n : nb) open = open || !inside(n);
    if (open) ++edge;
  }
  return static_cast<double>(edge) * grid.cell_measure();
}

Outcome ac05() {
  Outcome o;
  if (std::abs(max_area_bound(3, 1.0) - 1.0 / 3.0) > 0.0) fail(o, "bound(3, 1) != 1/3");
  int sets = 0;
  // Per game: violations and the largest one.
  std::map<std::string, std::pair<int, std::string>> violations;
  std::map<std::string, double> largest;
  for (const auto& [id, game] : games()) {
    const AnalysisSpace space = make_space(game, SpaceMode::kProduct);
    const int m = game.num_players() == 3 ? 11 : 31;
    const ProductGrid grid = make_grid(space, m);
    RegionOptions opts;
    opts.thin_checklist = false;
    for (double eps : eps_list()) {
      const RegionSet set = enumerate_s_choice_sets(game, eps, space, grid, opts);
      ++sets;
      double prod = 1.0, lo = 1.0;
      std::vector<double> per(space.num_factors());
      for (int f = 0; f < space.num_factors(); ++f) {
        per[f] = max_area_bound(space.factor_counts[f], eps);
        prod *= per[f];
        lo = std::min(lo, per[f]);
      }
      auto check = [&](double value, double bound, double allowance, const std::string& what) {
        const double excess = value - bound - allowance;
        if (excess <= 0.0) return;
        auto& v = violations[id];
        ++v.first;
        if (excess > largest[id]) {
          largest[id] = excess;
          v.second = what + " " + fmt("%.4f", value) + " > " + fmt("%.4f", bound) + " at eps=" +
                     fmt("%.1f", eps);
        }
      };
      std::vector<int64_t> in_union;
      for (size_t c = 0; c < set.cell_region.size(); ++c)
        if (set.cell_region[c] >= 0) in_union.push_back(static_cast<int64_t>(c));
      check(set.union_measure(), lo,
            boundary_allowance(grid, in_union, [&](int64_t c) { return set.cell_region[c] >= 0; }),
            "union");
      for (size_t r = 0; r < set.regions.size(); ++r) {
        const Region& reg = set.regions[r];
        if (reg.measure <= 0.0) continue;
        const int32_t ri = static_cast<int32_t>(r);
        const double allow = boundary_allowance(
            grid, reg.cells, [&](int64_t c) { return set.cell_region[c] == ri; });
        check(reg.measure, prod, allow, "region");
        for (int f = 0; f < space.num_factors(); ++f) {
          const double hf = 1.0 / (grid.factor(f).subdivisions());
          check(set.projection_measure(static_cast<int>(r), f), per[f],
                hf * grid.factor(f).dim(), "projection");
        }
      }
    }
  }
  for (const auto& [id, v] : violations)
    fail(o, id + ": " + std::to_string(v.first) + " violations, worst " + v.second);
  note(o, std::to_string(sets) + " sets");
  return o;
}

Outcome ac06() {
  Outcome o;
  const Game& game = games().at("table3");
  const LevelHierarchy h = level_hierarchy(game);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double tau = 10.0 * i / 10000;
    const double pa = level_k_mixture(h, tau)[0][0];
    lo = std::min(lo, pa);
    hi = std::max(hi, pa);
  }
  if (std::abs(lo - 0.5) > 1e-3) fail(o, "infimum " + fmt("%.6f", lo));
  if (std::abs(hi - 0.625) > 1e-3) fail(o, "maximum " + fmt("%.6f", hi));
  note(o, "range [" + fmt("%.6f", lo) + ", " + fmt("%.6f", hi) + "]");
  return o;
}

Outcome ac07() {
  Outcome o;
  const Game& game = games().at("table3");
  const int m = 1001;
  const SimplexGrid g(2, m);
  double lo = 2.0, hi = -1.0;
  for (int c = 0; c < g.num_cells(); ++c) {
    const auto sigma = g.center(c);
    if (!monotone_set_membership(game, Profile::replicate(2, sigma))) continue;
    lo = std::min(lo, sigma[0]);
    hi = std::max(hi, sigma[0]);
  }
  const double h = g.spacing();
  if (std::abs(lo - 0.5) > h) fail(o, "lower " + fmt("%.5f", lo));
  if (std::abs(hi - 2.0 / 3.0) > h) fail(o, "upper " + fmt("%.5f", hi));
  note(o, "members [" + fmt("%.4f", lo) + ", " + fmt("%.4f", hi) + "] cell " + fmt("%.4f", h));
  return o;
}

double max_dev_from_centroid(const Profile& p) {
  double d = 0.0;
  for (int i = 0; i < p.num_players(); ++i)
    for (double v : p[i]) d = std::max(d, std::abs(v - 1.0 / p.size(i)));
  return d;
}

Outcome ac08() {
  Outcome o;
  LogitOptions opts;
  opts.lambda_max = 2000.0;
  double worst = 0.0;
  for (const auto& [id, game] : games()) {
    const ModelCurve curve = logit_qre_curve(game, id == "g1" || id == "g3" ? opts : LogitOptions{});
    if (!curve.diagnostic.empty()) fail(o, id + ": " + curve.diagnostic);
    if (curve.samples.empty() || curve.samples[0].parameter != 0.0 ||
        max_dev_from_centroid(curve.samples[0].profile) > 1e-12)
      fail(o, id + " lambda=0 sample off centroid");
    for (const CurveSample& s : curve.samples)
      worst = std::max(worst, logit_residual(game, s.profile, s.parameter));
    if (id == "g1") {
      const CurveSample& end = curve.samples.back();
      if (end.parameter != opts.lambda_max || end.profile[0][0] < 0.99)
        fail(o, "g1 terminus R " + fmt("%.4f", end.profile[0][0]));
      note(o, "g1 R at lambda " + fmt("%.0f", end.parameter) + " = " + fmt("%.4f", end.profile[0][0]));
    }
    if (id == "g3") {
      for (const CurveSample& s : curve.samples)
        if (max_dev_from_centroid(s.profile) > 1e-9) {
          fail(o, "g3 sample off centroid at " + fmt("%.3g", s.parameter));
          break;
        }
    }
  }
  if (worst > 1e-10) fail(o, "residual " + fmt("%.2e", worst));
  note(o, "max residual " + fmt("%.1e", worst));
  return o;
}

Outcome ac09() {
  Outcome o;
  int checked = 0;
  for (const auto& [id, game] : games()) {
    for (RestrictedKind kind : {RestrictedKind::kPerfect, RestrictedKind::kProper}) {
      const ModelCurve curve = eps_model_curve(game, kind, 20);
      const Profile c = Profile::uniform(game.strategy_counts());
      if (curve.samples.empty() || curve.samples[0].parameter != 1.0 ||
          curve.samples[0].profile.data() != c.data())
        fail(o, id + " eps=1 sample is not the centroid");
    }
    for (double eps : {0.2, 0.5, 0.8}) {
      for (const Profile& p : eps_model_fixed_points(game, RestrictedKind::kProper, eps)) {
        for (int i = 0; i < game.num_players(); ++i) {
          const auto pi = expected_payoffs(game, i, p);
          for (size_t j = 0; j < pi.size(); ++j)
            for (size_t k = 0; k < pi.size(); ++k)
              if (pi[j] > pi[k] + kTieTol && !(p[i][j] > p[i][k])) {
                fail(o, id + " proper fixed point not rank-ordered at eps=" + fmt("%.1f", eps));
                goto next;
              }
        }
        ++checked;
      next:;
      }
    }
  }
  note(o, std::to_string(checked) + " proper fixed points");
  return o;
}

double belief_measure(const Game& game, unsigned color, int m) {
  const AnalysisSpace bspace = belief_space(game, default_space(game));
  const RegionSet set = enumerate_s_belief_sets(game, {{color}}, bspace, make_grid(bspace, m));
  double total = 0.0;
  for (const Region& r : set.regions)
    if (r.pattern == std::vector<unsigned>{color}) total += r.measure;
  return total;
}

Outcome ac10() {
  Outcome o;
  for (const char* id : {"G2", "G3"}) {
    const LevelHierarchy h = level_hierarchy(games().at(id), 20);
    for (int k = 1; k <= 20; ++k) {
      const std::vector<double> want = k == 1 ? std::vector<double>{0, 0, 1}
                                              : std::vector<double>{0, 1, 0};
      const auto got = h.level(k)[0];
      if (!std::equal(got.begin(), got.end(), want.begin())) {
        fail(o, std::string(id) + " level " + std::to_string(k));
        break;
      }
    }
  }
  const double g2 = belief_measure(games().at("G2"), 1u << 2, 201);
  const double g3 = belief_measure(games().at("G3"), 1u << 2, 201);
  const double ratio = g3 > 0.0 ? g2 / g3 : INFINITY;
  if (!(ratio > 1.5)) fail(o, "Y-belief ratio " + fmt("%.3f", ratio));
  note(o, "Y-belief measures " + fmt("%.4f", g2) + " / " + fmt("%.4f", g3) + " ratio " +
              fmt("%.2f", ratio));
  return o;
}

std::vector<Observation> simulate_game(const Game& game, ModelKind model, double param,
                                       uint64_t seed) {
  std::vector<AgentSpec> agents(20, AgentSpec{model, param});
  SessionSpec spec;
  spec.rounds = 500;
  spec.protocol = Protocol::kMinimalRepeat;
  spec.seed = seed;
  spec.beliefs = false;
  return simulate_session(game, agents, spec);
}

Outcome ac11() {
  Outcome o;
  Timer t;
  const std::vector<std::string> ids = {"g1", "g2", "g4", "g8"};
  struct Case {
    ModelKind model;
    double truth;
    bool relative;
  };
  for (const Case& c : {Case{ModelKind::kLogit, 0.05, true}, Case{ModelKind::kLevelK, 1.5, true},
                        Case{ModelKind::kS, 0.3, false}}) {
    std::string fits;
    for (const std::string& id : ids) {
      const Game& game = games().at(id);
      const auto rows = simulate_game(game, c.model, c.truth, 11);
      if (rows.size() != 10000) fail(o, "expected 10000 observations");
      const FitResult fit = fit_scalar_model({make_game_data(game, rows)}, c.model);
      const bool ok = c.relative ? std::abs(fit.parameter - c.truth) <= 0.1 * c.truth
                                 : std::abs(fit.parameter - c.truth) <= 0.01 + 1e-9;
      if (!ok || !(fit.g_bar < 1.0))
        fail(o, model_name(c.model) + " on " + id + " gave " + fmt("%.4f", fit.parameter) +
                    " Gbar " + fmt("%.3f", fit.g_bar));
      fits += (fits.empty() ? "" : ",") + fmt("%.3g", fit.parameter);
    }
    note(o, model_name(c.model) + " " + fits);
  }
  const double secs = t.seconds();
  if (secs >= 120.0) fail(o, "took " + fmt("%.1f s", secs));
  note(o, fmt("%.1f s", secs));
  return o;
}

Outcome ac12() {
  Outcome o;
  if (std::abs(mps_value(0.89, 0.04) - 0.85) > 1e-12) fail(o, "MPS(0.89, 0.04)");

  const Game& game = games().at("g1");
  const MpsEvaluator ev(game, default_space(game), 101);
  std::mt19937_64 rng(12);
  std::vector<std::vector<std::vector<double>>> points;
  for (int i = 0; i < 50; ++i) points.push_back({dirichlet(rng, {1.0, 1.0, 1.0})});
  const MpsResult whole = ev.evaluate(points, std::nextafter(1.0, 2.0));
  if (whole.hit_rate != 1.0 || whole.area_size != 1.0 || whole.mps != 0.0)
    fail(o, "whole-simplex MPS " + fmt("%.4f", whole.mps));

  const std::vector<double> obs = {135, 270, 270, 120, 240, 240, 56, 56, 56, 120, 120, 240, 240};
  const std::vector<double> s = {0.00, 0.00, 0.00, 0.00, 0.03, 0.35, 0.00,
                                 0.00, 0.00, 0.02, 0.00, 0.00, 0.00};
  const std::vector<double> lk = {0.08, 6.41, 0.79, 3.71, 23.0, 5.66, 0.02,
                                  0.94, 0.21, 7.65, 0.87, 8.94, 26.0};
  if (ks_d(s, s, obs, obs) != 0.0) fail(o, "KS of identical lists");
  const double d = ks_d(s, lk, obs, obs);
  if (std::abs(d - 0.89) > 0.01) fail(o, "KS S vs level-k " + fmt("%.4f", d));
  note(o, "KS " + fmt("%.4f", d));
  return o;
}

Outcome ac13() {
  Outcome o;
  const Game& g1 = games().at("g1");
  const Game& cs = games().at("chain_store");
  std::vector<AgentSpec> agents(8, AgentSpec{ModelKind::kLogit, 0.05});
  SessionSpec spec;
  spec.rounds = 7;
  spec.seed = 42;
  auto sim_text = [&] {
    std::ostringstream out;
    write_observations(out, simulate_session(g1, agents, spec), 3);
    return out.str();
  };
  if (sim_text() != sim_text()) fail(o, "simulate differs");
  auto analysis_text = [&] {
    return export_regions(enumerate_s_choice_sets(g1, 0.4, 101)) +
           export_regions(enumerate_s_choice_sets(cs, 2.0 / 3.0, 101)) +
           export_curve(logit_qre_curve(g1)) +
           export_curve(level_k_curve(g1)) +
           export_curve(eps_model_curve(g1, RestrictedKind::kProper, 20));
  };
  if (analysis_text() != analysis_text()) fail(o, "analysis output differs");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> known;
  for (int i = 1; i + 1 < argc; i += 2)
    if (std::string(argv[i]) == "--known-failure") known.insert(argv[i + 1]);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks = {
      {"AC01", ac01}, {"AC02", ac02}, {"AC03", ac03}, {"AC04", ac04}, {"AC05", ac05},
      {"AC06", ac06}, {"AC07", ac07}, {"AC08", ac08}, {"AC09", ac09}, {"AC10", ac10},
      {"AC11", ac11}, {"AC12", ac12}, {"AC13", ac13}};
  int failed = 0;
  for (const auto& [name, check] : checks) {
    Outcome o;
    Timer t;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    note(o, "[" + fmt("%.1f s", t.seconds()) + "]");
    const bool expected = known.count(name) > 0;
    if (!o.pass && !expected) ++failed;
    std::printf("%s %s %s%s\n", name, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                !o.pass && expected ? " (known failure)" : "");
    std::fflush(stdout);
  }
  return failed;
}
