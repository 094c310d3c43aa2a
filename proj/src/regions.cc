#include "sequil/regions.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "sequil/error.h"
#include "sequil/nash.h"
#include "sequil/potential.h"

namespace sequil {
namespace {

constexpr int32_t kNone = -1;

uint32_t pattern_key(const std::vector<unsigned>& p) {
  uint32_t key = 0;
  for (size_t f = 0; f < p.size(); ++f) key |= p[f] << (8 * f);
  return key;
}

bool pattern_contains(const std::vector<unsigned>& outer,
                      const std::vector<unsigned>& inner) {
  for (size_t f = 0; f < outer.size(); ++f) {
    if ((outer[f] & inner[f]) != inner[f]) return false;
  }
  return true;
}

class DisjointSets {
 public:
  explicit DisjointSets(size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
  }

 private:
  std::vector<int> parent_;
};

// Builds full profiles from product-grid cells or explicit factor points.
class Evaluator {
 public:
  Evaluator(const Game& game, const AnalysisSpace& space, const ProductGrid& grid)
      : game_(game), space_(space), grid_(grid),
        profile_(game.strategy_counts()),
        parts_(grid.num_factors()),
        views_(grid.num_factors()) {}

  const Profile& at_cell(int64_t c) {
    grid_.decode(c, parts_);
    for (int f = 0; f < grid_.num_factors(); ++f) {
      views_[f] = grid_.factor(f).center(parts_[f]);
    }
    space_.fill_profile(views_, profile_);
    return profile_;
  }
  const Profile& at_point(const std::vector<std::vector<double>>& pt) {
    for (int f = 0; f < grid_.num_factors(); ++f) views_[f] = pt[f];
    space_.fill_profile(views_, profile_);
    return profile_;
  }
  std::vector<unsigned> pattern(const Profile& p, double tol) const {
    auto full = best_reply_pattern(game_, p, tol);
    std::vector<unsigned> out(space_.num_factors());
    for (int f = 0; f < space_.num_factors(); ++f) out[f] = full[space_.factor_player(f)];
    return out;
  }
  std::optional<std::vector<unsigned>> color(const Profile& p, double eps,
                                             double tol) const {
    auto c = color_of(game_, p, eps, tol);
    if (!c) return std::nullopt;
    std::vector<unsigned> out(space_.num_factors());
    for (int f = 0; f < space_.num_factors(); ++f) out[f] = (*c)[space_.factor_player(f)];
    return out;
  }

 private:
  const Game& game_;
  const AnalysisSpace& space_;
  const ProductGrid& grid_;
  Profile profile_;
  std::vector<int> parts_;
  std::vector<std::span<const double>> views_;
};

double max_spacing(const ProductGrid& grid) {
  double h = 0.0;
  for (int f = 0; f < grid.num_factors(); ++f) h = std::max(h, grid.factor(f).spacing());
  return h;
}

// Largest coordinate range over a point cloud, in barycentric units.
// A cell whose neighbors and their neighbors all belong to the set. Two
// rings keep cell pairs along a tie line at a corner from counting.
template <class InSet>
bool interior_cell(const ProductGrid& grid, int64_t c, const InSet& in_set) {
  std::vector<int64_t> ring, ring2;
  grid.neighbors(c, ring);
  if (ring.empty()) return false;
  for (int64_t nb : ring) {
    if (!in_set(nb)) return false;
    grid.neighbors(nb, ring2);
    for (int64_t nb2 : ring2) {
      if (!in_set(nb2)) return false;
    }
  }
  return true;
}

// Flattened cell centers and sample points of a region.
std::vector<std::vector<double>> region_samples(const ProductGrid& grid, const Region& r) {
  std::vector<std::vector<double>> out;
  std::vector<int> parts(grid.num_factors());
  if (r.measure > 0.0) {
    for (int64_t c : r.cells) {
      grid.decode(c, parts);
      std::vector<double> flat;
      for (int f = 0; f < grid.num_factors(); ++f) {
        auto ctr = grid.factor(f).center(parts[f]);
        flat.insert(flat.end(), ctr.begin(), ctr.end());
      }
      out.push_back(std::move(flat));
    }
  }
  for (const auto& pt : r.points) {
    std::vector<double> flat;
    for (const auto& f : pt) flat.insert(flat.end(), f.begin(), f.end());
    out.push_back(std::move(flat));
  }
  return out;
}

double extent(const std::vector<std::vector<double>>& flat_points) {
  if (flat_points.empty()) return 0.0;
  double e = 0.0;
  for (size_t d = 0; d < flat_points[0].size(); ++d) {
    double lo = flat_points[0][d], hi = lo;
    for (const auto& p : flat_points) {
      lo = std::min(lo, p[d]);
      hi = std::max(hi, p[d]);
    }
    e = std::max(e, hi - lo);
  }
  return e;
}

struct ThinCandidate {
  std::vector<std::vector<double>> factors;
  std::vector<unsigned> pattern;
  int64_t cell;
};

// Points of factor grid g where pi_j - pi_k changes sign or vanishes, with
// pi evaluated by `payoff` (a function of a factor point).
template <typename PayoffFn>
void indifference_points(const SimplexGrid& g, int num_strategies,
                         PayoffFn payoff, double tol,
                         std::vector<std::pair<std::vector<double>, std::pair<int, int>>>& out) {
  const int k = g.k();
  const int nc = g.num_cells();
  std::vector<double> pis(static_cast<size_t>(nc) * num_strategies);
  std::vector<double> buf(num_strategies);
  for (int c = 0; c < nc; ++c) {
    payoff(g.center(c), buf);
    std::copy(buf.begin(), buf.end(), pis.begin() + static_cast<size_t>(c) * num_strategies);
  }
  auto bisect = [&](const std::vector<double>& a, const std::vector<double>& b,
                    int j, int l, double ga) {
    std::vector<double> lo = a, hi = b, mid(k);
    for (int it = 0; it < 60; ++it) {
      for (int d = 0; d < k; ++d) mid[d] = 0.5 * (lo[d] + hi[d]);
      payoff(mid, buf);
      const double gm = buf[j] - buf[l];
      if ((gm > 0) == (ga > 0)) lo = mid; else hi = mid;
    }
    for (int d = 0; d < k; ++d) mid[d] = 0.5 * (lo[d] + hi[d]);
    return mid;
  };
  for (int j = 0; j < num_strategies; ++j) {
    for (int l = j + 1; l < num_strategies; ++l) {
      for (int c = 0; c < nc; ++c) {
        const double ga = pis[c * num_strategies + j] - pis[c * num_strategies + l];
        for (int nb : g.neighbors(c)) {
          if (nb < c) continue;
          const double gb = pis[nb * num_strategies + j] - pis[nb * num_strategies + l];
          if ((ga > tol && gb < -tol) || (ga < -tol && gb > tol)) {
            auto ca = g.center(c), cb = g.center(nb);
            out.push_back({bisect({ca.begin(), ca.end()}, {cb.begin(), cb.end()}, j, l, ga),
                           {j, l}});
          }
        }
      }
      // Boundary samples: vertices and edge midpoints of boundary cells.
      const int n = g.subdivisions();
      for (int u = 0; u < k; ++u) {
        for (int v = u + 1; v < k; ++v) {
          std::vector<std::vector<double>> samples;
          for (int s = 0; s <= 2 * n; ++s) {
            std::vector<double> p(k, 0.0);
            p[v] = static_cast<double>(s) / (2 * n);
            p[u] = 1.0 - p[v];
            samples.push_back(std::move(p));
          }
          double prev = 0.0;
          for (size_t s = 0; s < samples.size(); ++s) {
            payoff(samples[s], buf);
            const double gs = buf[j] - buf[l];
            if (std::abs(gs) <= tol) {
              out.push_back({samples[s], {j, l}});
            } else if (s > 0 && ((prev > tol && gs < -tol) || (prev < -tol && gs > tol))) {
              out.push_back({bisect(samples[s - 1], samples[s], j, l, prev), {j, l}});
            }
            prev = gs;
          }
        }
      }
    }
  }
}

}  // namespace

double RegionSet::union_measure() const {
  double m = 0.0;
  for (const auto& r : regions) m += r.measure;
  return m;
}

double RegionSet::projection_measure(int r, int f) const {
  std::set<int> parts;
  std::vector<int> buf(grid.num_factors());
  for (int64_t c : regions[r].cells) {
    grid.decode(c, buf);
    parts.insert(buf[f]);
  }
  if (regions[r].measure == 0.0) return 0.0;
  return static_cast<double>(parts.size()) / grid.factor(f).num_cells();
}

RegionSet enumerate_s_choice_sets(const Game& game, double eps,
                                  const AnalysisSpace& space,
                                  const ProductGrid& grid,
                                  const RegionOptions& opts) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw ValidationError("epsilon must lie in (0, 1], got " + std::to_string(eps));
  }
  RegionSet out;
  out.game_id = game.id();
  out.epsilon = eps;
  out.kind = RegionKind::kChoice;
  out.space = space;
  out.grid = grid;
  const int64_t n_cells = grid.num_cells();
  const double tol = opts.tie_tol;
  Evaluator ev(game, space, grid);

  // Root cells and their best-reply patterns.
  std::vector<int32_t> root_index(n_cells, kNone);
  std::vector<int64_t> roots;
  std::vector<uint32_t> keys;
  std::vector<std::vector<unsigned>> patterns;
  std::unordered_map<uint32_t, int> pattern_slot;
  for (int64_t c = 0; c < n_cells; ++c) {
    const Profile& p = ev.at_cell(c);
    if (potential_value(game, p, eps, tol) != 0.0) continue;
    auto pat = ev.pattern(p, tol);
    const uint32_t key = pattern_key(pat);
    if (!pattern_slot.count(key)) {
      pattern_slot[key] = static_cast<int>(patterns.size());
      patterns.push_back(pat);
    }
    root_index[c] = static_cast<int32_t>(roots.size());
    roots.push_back(c);
    keys.push_back(key);
  }

  DisjointSets ds(roots.size());
  std::vector<int64_t> nbs;
  for (size_t r = 0; r < roots.size(); ++r) {
    grid.neighbors(roots[r], nbs);
    for (int64_t nb : nbs) {
      const int32_t q = root_index[nb];
      if (q != kNone && keys[q] == keys[r]) ds.unite(static_cast<int>(r), q);
    }
  }
  std::map<int, std::vector<int64_t>> comps;
  for (size_t r = 0; r < roots.size(); ++r) comps[ds.find(static_cast<int>(r))].push_back(roots[r]);

  struct Comp {
    std::vector<int64_t> cells;
    std::vector<unsigned> pattern;
    bool interior = false;
    std::optional<std::vector<unsigned>> color;
    bool colorable = false;
  };
  std::vector<Comp> full, thin;
  std::vector<int32_t> comp_of(n_cells, kNone);
  {
    int id = 0;
    for (auto& [rep, cells] : comps) {
      for (int64_t c : cells) comp_of[c] = id;
      ++id;
    }
  }
  {
    int id = 0;
    for (auto& [rep, cells] : comps) {
      Comp comp;
      comp.pattern = patterns[pattern_slot[keys[rep]]];
      std::vector<int64_t> interior;
      for (int64_t c : cells) {
        if (interior_cell(grid, c, [&](int64_t q) { return comp_of[q] == id; })) {
          interior.push_back(c);
        }
      }
      comp.interior = !interior.empty();
      const auto& probe = comp.interior ? interior : cells;
      comp.colorable = true;
      for (int64_t c : probe) {
        auto col = ev.color(ev.at_cell(c), eps, tol);
        if (!col || (comp.color && *col != *comp.color)) {
          comp.colorable = false;
          break;
        }
        comp.color = col;
      }
      if (!comp.colorable) comp.color.reset();
      comp.cells = std::move(cells);
      (comp.interior ? full : thin).push_back(std::move(comp));
      ++id;
    }
  }

  out.cell_region.assign(n_cells, kNone);
  for (size_t r = 0; r < full.size(); ++r) {
    for (int64_t c : full[r].cells) out.cell_region[c] = static_cast<int32_t>(r);
  }
  // Thin lattice components lying along full-dimensional sets with
  // compatible patterns are part of their closure. A cell may borrow the
  // owner of a neighbor in its own component; repeated until stable so
  // that components reaching a set only through absorbed ones follow.
  std::vector<bool> absorbed(thin.size(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t ti = 0; ti < thin.size(); ++ti) {
      if (absorbed[ti]) continue;
      const Comp& t = thin[ti];
      std::vector<int32_t> owner(t.cells.size(), kNone);
      std::unordered_map<int64_t, size_t> slot;
      for (size_t q = 0; q < t.cells.size(); ++q) slot[t.cells[q]] = q;
      for (size_t q = 0; q < t.cells.size(); ++q) {
        grid.neighbors(t.cells[q], nbs);
        for (int64_t nb : nbs) {
          const int32_t r = out.cell_region[nb];
          if (r != kNone && pattern_contains(t.pattern, full[r].pattern) &&
              (owner[q] == kNone || r < owner[q])) {
            owner[q] = r;
          }
        }
      }
      bool every_touches = true;
      for (size_t q = 0; q < t.cells.size(); ++q) {
        if (owner[q] != kNone) continue;
        grid.neighbors(t.cells[q], nbs);
        for (int64_t nb : nbs) {
          auto it = slot.find(nb);
          if (it != slot.end() && owner[it->second] != kNone) {
            owner[q] = owner[it->second];
            break;
          }
        }
        every_touches = every_touches && owner[q] != kNone;
      }
      if (!every_touches) continue;
      for (size_t q = 0; q < t.cells.size(); ++q) {
        full[owner[q]].cells.push_back(t.cells[q]);
        out.cell_region[t.cells[q]] = owner[q];
      }
      absorbed[ti] = true;
      changed = true;
    }
  }
  std::vector<Comp> kept_thin;
  for (size_t ti = 0; ti < thin.size(); ++ti) {
    if (!absorbed[ti]) kept_thin.push_back(std::move(thin[ti]));
  }
  const double h = max_spacing(grid);
  const int d = grid.dim();
  for (auto& f : full) {
    std::sort(f.cells.begin(), f.cells.end());
    Region r;
    r.cells = std::move(f.cells);
    r.pattern = f.pattern;
    r.color = f.color;
    r.colorable = f.colorable;
    r.full_dimensional = true;
    r.dimension = d;
    r.measure = static_cast<double>(r.cells.size()) * grid.cell_measure();
    out.regions.push_back(std::move(r));
  }

  std::vector<ThinCandidate> cands;
  // Thin sets off the lattice: payoff-indifference loci and Nash profiles.
  const bool single_dependency =
      space.mode == SpaceMode::kSymmetric || game.num_players() == 2;
  if (opts.thin_checklist) {
    auto add_candidate = [&](std::vector<std::vector<double>> factors) {
      const Profile& p = ev.at_point(factors);
      if (potential_value(game, p, eps, tol) != 0.0) return;
      ThinCandidate tc;
      tc.pattern = ev.pattern(p, tol);
      tc.cell = grid.locate(factors);
      tc.factors = std::move(factors);
      cands.push_back(std::move(tc));
    };
    if (single_dependency) {
      const int players = space.mode == SpaceMode::kSymmetric ? 1 : 2;
      for (int p = 0; p < players; ++p) {
        const int dep = space.mode == SpaceMode::kSymmetric ? 0 : 1 - p;
        const int own_k = game.num_strategies(p);
        Profile work(game.strategy_counts());
        auto payoff = [&](std::span<const double> w, std::vector<double>& pi) {
          if (space.mode == SpaceMode::kSymmetric) {
            for (int i = 0; i < game.num_players(); ++i) {
              std::copy(w.begin(), w.end(), work[i].begin());
            }
          } else {
            std::copy(w.begin(), w.end(), work[dep].begin());
            auto own = work[p];
            std::fill(own.begin(), own.end(), 1.0 / own_k);
          }
          expected_payoffs(game, p, work, pi);
        };
        std::vector<std::pair<std::vector<double>, std::pair<int, int>>> loci;
        indifference_points(grid.factor(dep), own_k, payoff, tol, loci);
        for (auto& [w, jl] : loci) {
          if (space.mode == SpaceMode::kSymmetric) {
            add_candidate({w});
            continue;
          }
          const SimplexGrid& og = grid.factor(p);
          for (int c = 0; c < og.num_cells(); ++c) {
            auto ctr = og.center(c);
            std::vector<std::vector<double>> factors(2);
            factors[p].assign(ctr.begin(), ctr.end());
            factors[dep] = w;
            add_candidate(std::move(factors));
          }
        }
      }
    }
    if (space.mode == SpaceMode::kSymmetric) {
      for (auto& s : symmetric_nash(game)) add_candidate({s});
    } else if (game.num_players() == 2) {
      for (const auto& eq : support_enumeration_nash(game).equilibria) {
        add_candidate(eq.to_vectors());
      }
    } else {
      for (const auto& x : pure_nash(game)) {
        std::vector<std::vector<double>> factors;
        for (int i = 0; i < game.num_players(); ++i) {
          std::vector<double> e(game.num_strategies(i), 0.0);
          e[x[i]] = 1.0;
          factors.push_back(std::move(e));
        }
        add_candidate(std::move(factors));
      }
    }

  }

  // Thin items: cells of thin lattice components and off-lattice samples,
  // linked by component and by same-pattern proximity.
  struct Item {
    std::vector<double> flat;
    int64_t cell;
    int lattice_comp;  // -1 for off-lattice samples
    int cand;
  };
  std::vector<Item> items;
  std::vector<int> parts(grid.num_factors());
  for (size_t t = 0; t < kept_thin.size(); ++t) {
    for (int64_t c : kept_thin[t].cells) {
      grid.decode(c, parts);
      Item it{{}, c, static_cast<int>(t), -1};
      for (int f = 0; f < grid.num_factors(); ++f) {
        auto ctr = grid.factor(f).center(parts[f]);
        it.flat.insert(it.flat.end(), ctr.begin(), ctr.end());
      }
      items.push_back(std::move(it));
    }
  }
  for (size_t i = 0; i < cands.size(); ++i) {
    Item it{{}, cands[i].cell, -1, static_cast<int>(i)};
    for (const auto& f : cands[i].factors) it.flat.insert(it.flat.end(), f.begin(), f.end());
    items.push_back(std::move(it));
  }
  auto item_pattern = [&](const Item& it) -> const std::vector<unsigned>& {
    return it.lattice_comp >= 0 ? kept_thin[it.lattice_comp].pattern : cands[it.cand].pattern;
  };
  std::vector<uint32_t> item_key(items.size());
  for (size_t i = 0; i < items.size(); ++i) item_key[i] = pattern_key(item_pattern(items[i]));
  DisjointSets ids(items.size());
  {
    std::vector<int> first_of_comp(kept_thin.size(), -1);
    for (size_t i = 0; i < items.size(); ++i) {
      const int t = items[i].lattice_comp;
      if (t < 0) continue;
      if (first_of_comp[t] < 0) {
        first_of_comp[t] = static_cast<int>(i);
      } else {
        ids.unite(first_of_comp[t], static_cast<int>(i));
      }
    }
    // Sweep along the first coordinate within each pattern.
    std::vector<int> order(items.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      if (item_key[x] != item_key[y]) return item_key[x] < item_key[y];
      return items[x].flat[0] < items[y].flat[0];
    });
    const double reach = 1.5 * h;
    for (size_t a = 0; a < order.size(); ++a) {
      const Item& ia = items[order[a]];
      for (size_t b = a + 1; b < order.size(); ++b) {
        const Item& ib = items[order[b]];
        if (item_key[order[b]] != item_key[order[a]] || ib.flat[0] - ia.flat[0] > reach) break;
        double dist = 0.0;
        for (size_t z = 0; z < ia.flat.size(); ++z) dist = std::max(dist, std::abs(ia.flat[z] - ib.flat[z]));
        if (dist <= reach) ids.unite(order[a], order[b]);
      }
    }
  }
  std::map<int, std::vector<int>> clusters;
  for (size_t i = 0; i < items.size(); ++i) clusters[ids.find(static_cast<int>(i))].push_back(static_cast<int>(i));

  for (auto& [rep, members] : clusters) {
    const auto& pattern = item_pattern(items[rep]);
    // Part of the closure of full-dimensional sets when every item lies in
    // or next to one with a compatible pattern.
    bool every_touches_full = true;
    for (int i : members) {
      grid.neighbors(items[i].cell, nbs);
      nbs.push_back(items[i].cell);
      bool touches = false;
      for (int64_t c : nbs) {
        const int32_t r = out.cell_region[c];
        if (r != kNone && pattern_contains(pattern, out.regions[r].pattern)) {
          touches = true;
          break;
        }
      }
      if (!touches) {
        every_touches_full = false;
        break;
      }
    }
    if (every_touches_full) continue;
    Region r;
    r.pattern = pattern;
    r.colorable = true;
    std::set<int64_t> lattice_cells;
    std::vector<std::vector<double>> flat_pts;
    for (int i : members) {
      const Item& it = items[i];
      if (it.lattice_comp >= 0) {
        lattice_cells.insert(it.cell);
        const auto& t = kept_thin[it.lattice_comp];
        if (!t.colorable || (r.color && t.color && *r.color != *t.color)) r.colorable = false;
        if (r.colorable) r.color = t.color;
        continue;
      }
      const auto& factors = cands[it.cand].factors;
      auto col = ev.color(ev.at_point(factors), eps, tol);
      if (!col || (r.color && *col != *r.color)) r.colorable = false;
      if (r.colorable) r.color = col;
      bool dup = false;
      for (const auto& q : flat_pts) {
        double dist = 0.0;
        for (size_t z = 0; z < q.size(); ++z) dist = std::max(dist, std::abs(q[z] - it.flat[z]));
        if (dist < 1e-12) {
          dup = true;
          break;
        }
      }
      if (dup) continue;
      flat_pts.push_back(it.flat);
      r.points.push_back(factors);
    }
    if (!r.colorable) r.color.reset();
    r.cells.assign(lattice_cells.begin(), lattice_cells.end());
    r.measure = static_cast<double>(r.cells.size()) * grid.cell_measure();
    if (r.cells.empty()) {
      std::set<int64_t> cells;
      for (int i : members) cells.insert(items[i].cell);
      r.cells.assign(cells.begin(), cells.end());
    }
    out.regions.push_back(std::move(r));
  }

  // Thin sets: dimension from all samples; isolated points at the end of a
  // thin set with a sub-pattern belong to its closure.
  std::vector<std::vector<std::vector<double>>> samples(out.regions.size());
  for (size_t i = 0; i < out.regions.size(); ++i) {
    if (out.regions[i].full_dimensional) continue;
    samples[i] = region_samples(grid, out.regions[i]);
    out.regions[i].dimension = std::min(d - 1, extent(samples[i]) > 2.0 * h ? 1 : 0);
  }
  std::vector<bool> drop(out.regions.size(), false);
  for (size_t i = 0; i < out.regions.size(); ++i) {
    const Region& t = out.regions[i];
    if (t.full_dimensional || t.dimension > 0) continue;
    for (size_t j = 0; j < out.regions.size() && !drop[i]; ++j) {
      const Region& u = out.regions[j];
      if (j == i || drop[j] || u.full_dimensional || u.pattern == t.pattern ||
          !pattern_contains(t.pattern, u.pattern)) {
        continue;
      }
      for (const auto& a : samples[i]) {
        for (const auto& b : samples[j]) {
          double dist = 0.0;
          for (size_t z = 0; z < a.size(); ++z) dist = std::max(dist, std::abs(a[z] - b[z]));
          if (dist <= 1.5 * h) drop[i] = true;
        }
      }
    }
  }
  {
    std::vector<Region> kept;
    for (size_t i = 0; i < out.regions.size(); ++i) {
      if (!drop[i]) kept.push_back(std::move(out.regions[i]));
    }
    out.regions = std::move(kept);
  }
  out.cell_region.assign(n_cells, kNone);
  for (size_t r = 0; r < out.regions.size(); ++r) {
    if (out.regions[r].measure == 0.0) continue;
    for (int64_t c : out.regions[r].cells) out.cell_region[c] = static_cast<int32_t>(r);
  }

  int max_dim = -1;
  for (const auto& r : out.regions) max_dim = std::max(max_dim, r.dimension);
  for (size_t i = 0; i < out.regions.size(); ++i) {
    out.regions[i].component_id = static_cast<int>(i);
    out.regions[i].robust = out.regions[i].dimension == max_dim;
  }
  if (out.regions.empty()) {
    out.diagnostic = "no S(eps) choice set found at eps=" + std::to_string(eps) +
                     "; the grid is too coarse to resolve the sets";
  }
  return out;
}

RegionSet enumerate_s_choice_sets(const Game& game, double eps, int m,
                                  const RegionOptions& opts) {
  AnalysisSpace space = default_space(game);
  return enumerate_s_choice_sets(game, eps, space, make_grid(space, m), opts);
}

AnalysisSpace belief_space(const Game& game, const AnalysisSpace& choice) {
  if (choice.mode == SpaceMode::kSymmetric) return choice;
  if (game.num_players() != 2) {
    throw ValidationError("belief sets in product mode need a 2-player game");
  }
  AnalysisSpace s;
  s.mode = SpaceMode::kProduct;
  s.factor_counts = {game.num_strategies(1), game.num_strategies(0)};
  return s;
}

RegionSet enumerate_s_belief_sets(const Game& game,
                                  const std::vector<std::vector<unsigned>>& colors,
                                  const AnalysisSpace& space,
                                  const ProductGrid& grid, double tie_tol) {
  RegionSet out;
  out.game_id = game.id();
  out.kind = RegionKind::kBelief;
  out.space = space;
  out.grid = grid;
  const int nf = grid.num_factors();
  // Best-reply mask of factor f's player at each factor cell.
  std::vector<std::vector<unsigned>> masks(nf);
  Profile work(game.strategy_counts());
  std::vector<double> pi;
  for (int f = 0; f < nf; ++f) {
    const SimplexGrid& g = grid.factor(f);
    const int player = space.mode == SpaceMode::kSymmetric ? 0 : f;
    for (int c = 0; c < g.num_cells(); ++c) {
      auto w = g.center(c);
      if (space.mode == SpaceMode::kSymmetric) {
        for (int i = 0; i < game.num_players(); ++i) std::copy(w.begin(), w.end(), work[i].begin());
      } else {
        std::copy(w.begin(), w.end(), work[1 - f].begin());
      }
      pi = expected_payoffs(game, player, work);
      masks[f].push_back(best_reply_mask(pi, tie_tol));
    }
  }
  out.cell_region.assign(grid.num_cells(), kNone);
  std::vector<int> parts(nf);
  std::vector<int64_t> nbs;
  for (const auto& color : colors) {
    if (static_cast<int>(color.size()) != nf) {
      throw ValidationError("belief color has wrong number of factors");
    }
    Region r;
    r.pattern = color;
    r.color = color;
    r.colorable = true;
    const int32_t id = static_cast<int32_t>(out.regions.size());
    for (int64_t c = 0; c < grid.num_cells(); ++c) {
      grid.decode(c, parts);
      bool in = true;
      for (int f = 0; f < nf && in; ++f) in = masks[f][parts[f]] == color[f];
      if (in) {
        r.cells.push_back(c);
        out.cell_region[c] = id;
      }
    }
    for (int64_t c : r.cells) {
      if (interior_cell(grid, c, [&](int64_t q) { return out.cell_region[q] == id; })) {
        r.full_dimensional = true;
        break;
      }
    }
    r.dimension = r.full_dimensional ? grid.dim() : (r.cells.empty() ? -1 : grid.dim() - 1);
    r.measure = static_cast<double>(r.cells.size()) * grid.cell_measure();
    r.component_id = id;
    out.regions.push_back(std::move(r));
  }
  int max_dim = -1;
  for (const auto& r : out.regions) max_dim = std::max(max_dim, r.dimension);
  for (auto& r : out.regions) r.robust = !r.cells.empty() && r.dimension == max_dim;
  return out;
}

std::vector<std::vector<unsigned>> region_colors(const RegionSet& set) {
  std::vector<std::vector<unsigned>> out;
  for (const auto& r : set.regions) {
    if (r.color && std::find(out.begin(), out.end(), *r.color) == out.end()) {
      out.push_back(*r.color);
    }
  }
  return out;
}

double max_area_bound(int k, double eps) {
  if (k < 2) throw ValidationError("max_area_bound needs K >= 2");
  if (!(eps > 0.0 && eps <= 1.0)) throw ValidationError("epsilon must lie in (0, 1]");
  double m = 1.0;
  for (int j = 1; j < k; ++j) m *= j * eps / (1.0 + j * eps);
  return m;
}

std::optional<int> hit_test(const RegionSet& set, const Game& game,
                            const std::vector<std::vector<double>>& point) {
  const int64_t cell = set.grid.locate(point);
  if (set.cell_region[cell] != kNone) return set.cell_region[cell];
  if (set.kind != RegionKind::kChoice) return std::nullopt;
  Evaluator ev(game, set.space, set.grid);
  const Profile& p = ev.at_point(point);
  if (potential_value(game, p, set.epsilon) != 0.0) return std::nullopt;
  const auto pattern = ev.pattern(p, kTieTol);
  std::vector<int64_t> nbs;
  set.grid.neighbors(cell, nbs);
  for (int64_t c : nbs) {
    const int32_t r = set.cell_region[c];
    if (r == kNone) continue;
    const auto& reg = set.regions[r];
    if (reg.pattern == pattern ||
        (reg.full_dimensional && pattern_contains(pattern, reg.pattern))) {
      return r;
    }
  }
  const double h = max_spacing(set.grid);
  for (size_t r = 0; r < set.regions.size(); ++r) {
    const auto& reg = set.regions[r];
    if (reg.points.empty() || !pattern_contains(pattern, reg.pattern)) continue;
    for (const auto& q : reg.points) {
      double dist = 0.0;
      for (size_t f = 0; f < q.size(); ++f) {
        for (size_t z = 0; z < q[f].size(); ++z) dist = std::max(dist, std::abs(q[f][z] - point[f][z]));
      }
      if (dist <= 1.5 * h) return static_cast<int>(r);
    }
  }
  return std::nullopt;
}

}  // namespace sequil
