#include "sequil/estimation.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numeric>

#include "sequil/error.h"
#include "sequil/nash.h"
#include "sequil/parallel.h"
#include "sequil/potential.h"
#include "sequil/restricted.h"
#include "sequil/stats.h"

namespace sequil {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Profile to_profile(const GameData& data, const std::vector<std::vector<double>>& factors) {
  Profile p(data.game.strategy_counts());
  std::vector<std::span<const double>> views(factors.begin(), factors.end());
  data.space.fill_profile(views, p);
  return p;
}

std::vector<std::vector<std::vector<double>>> nash_points(const GameData& data) {
  std::vector<std::vector<std::vector<double>>> out;
  const Game& g = data.game;
  if (data.space.mode == SpaceMode::kSymmetric) {
    for (auto& s : symmetric_nash(g)) out.push_back({s});
  } else if (g.num_players() == 2) {
    for (const auto& eq : support_enumeration_nash(g).equilibria) out.push_back(eq.to_vectors());
  } else {
    for (const auto& x : pure_nash(g)) {
      std::vector<std::vector<double>> f;
      for (int i = 0; i < g.num_players(); ++i) {
        std::vector<double> e(g.num_strategies(i), 0.0);
        e[x[i]] = 1.0;
        f.push_back(std::move(e));
      }
      out.push_back(std::move(f));
    }
  }
  return out;
}

double session_g(const SessionCounts& s, const std::vector<std::vector<double>>& predicted) {
  return g_statistic(s.counts, predicted).g;
}

double data_g(const GameData& data, const Profile& p) {
  const auto pred = profile_factors(data, p);
  double g = 0.0;
  for (const auto& s : data.sessions) g += session_g(s, pred);
  return g;
}

RestrictedKind restricted_kind(ModelKind m) {
  return m == ModelKind::kEpsPerfect ? RestrictedKind::kPerfect : RestrictedKind::kProper;
}

// Golden-section minimum of f on [a, b].
std::pair<double, double> golden_min(const std::function<double(double)>& f, double a, double b) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80 && b - a > 1e-9 * (1.0 + std::abs(a)); ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

}  // namespace

double SessionCounts::total() const {
  double t = 0.0;
  for (const auto& c : counts) t += std::accumulate(c.begin(), c.end(), 0.0);
  return t;
}

std::vector<std::vector<double>> SessionCounts::frequencies() const {
  auto out = counts;
  for (auto& c : out) {
    const double t = std::accumulate(c.begin(), c.end(), 0.0);
    for (double& v : c) v = t > 0 ? v / t : 1.0 / c.size();
  }
  return out;
}

GameData make_game_data(const Game& game, const std::vector<Observation>& rows) {
  GameData d;
  d.game = game;
  d.space = default_space(game);
  std::map<std::string, SessionCounts> by_session;
  for (const auto& o : rows) {
    if (o.game != game.id()) continue;
    if (o.role < 0 || o.role >= game.num_players() || o.choice < 0 ||
        o.choice >= game.num_strategies(o.role)) {
      throw ValidationError("observation does not fit game " + game.id());
    }
    auto& s = by_session[o.session];
    if (s.counts.empty()) {
      s.session = o.session;
      for (int k : d.space.factor_counts) s.counts.emplace_back(k, 0.0);
    }
    const int f = d.space.mode == SpaceMode::kSymmetric ? 0 : o.role;
    s.counts[f][o.choice] += 1.0;
    ++d.observations;
  }
  for (auto& [id, s] : by_session) d.sessions.push_back(std::move(s));
  return d;
}

double multinomial_loglik(const std::vector<std::vector<double>>& counts,
                          const std::vector<std::vector<double>>& predicted) {
  double ll = 0.0;
  for (size_t f = 0; f < counts.size(); ++f) {
    for (size_t k = 0; k < counts[f].size(); ++k) {
      if (counts[f][k] == 0.0) continue;
      if (predicted[f][k] <= 0.0) return -kInf;
      ll += counts[f][k] * std::log(predicted[f][k]);
    }
  }
  return ll;
}

double g_bar(double g, int dof) { return dof > 0 ? g / chi2_critical(dof, 0.01) : 0.0; }

GStat g_statistic(const std::vector<std::vector<double>>& counts,
                  const std::vector<std::vector<double>>& predicted) {
  if (counts.size() != predicted.size()) throw ValidationError("G statistic: factor count mismatch");
  double total = 0.0;
  GStat s;
  std::vector<std::vector<double>> freq = counts;
  for (size_t f = 0; f < counts.size(); ++f) {
    if (counts[f].size() != predicted[f].size()) throw ValidationError("G statistic: size mismatch");
    const double t = std::accumulate(counts[f].begin(), counts[f].end(), 0.0);
    for (double c : counts[f]) {
      if (c < 0.0) throw ValidationError("G statistic: negative count");
    }
    total += t;
    for (double& v : freq[f]) v = t > 0 ? v / t : 0.0;
    s.dof += static_cast<int>(counts[f].size()) - 1;
  }
  if (total <= 0.0) throw ValidationError("G statistic needs at least one observation");
  s.g = std::max(0.0, 2.0 * (multinomial_loglik(counts, freq) - multinomial_loglik(counts, predicted)));
  s.g_bar = g_bar(s.g, s.dof);
  return s;
}

int data_dof(const GameData& data) {
  int per = 0;
  for (int k : data.space.factor_counts) per += k - 1;
  return per * static_cast<int>(data.sessions.size());
}

std::vector<std::vector<double>> profile_factors(const GameData& data, const Profile& p) {
  if (data.space.mode == SpaceMode::kSymmetric) {
    return {std::vector<double>(p[0].begin(), p[0].end())};
  }
  return p.to_vectors();
}

int default_grid_m(const AnalysisSpace& space) {
  int dim = 0;
  for (int k : space.factor_counts) dim += k - 1;
  if (dim <= 2) return 201;
  if (dim == 3) return 61;
  return 31;
}

SetLikelihood::SetLikelihood(const GameData& data, int session, int m)
    : data_(data), session_(session), grid_(make_grid(data.space, m)) {
  const auto& counts = data.sessions.at(session).counts;
  const int64_t n = grid_.num_cells();
  std::vector<double> r(n), ll(n);
  parallel_for(n, [&](int64_t b, int64_t e) {
    Profile p(data.game.strategy_counts());
    std::vector<int> parts(grid_.num_factors());
    std::vector<std::span<const double>> views(grid_.num_factors());
    std::vector<std::vector<double>> pred(grid_.num_factors());
    for (int64_t c = b; c < e; ++c) {
      grid_.decode(c, parts);
      for (int f = 0; f < grid_.num_factors(); ++f) {
        views[f] = grid_.factor(f).center(parts[f]);
        pred[f].assign(views[f].begin(), views[f].end());
      }
      data.space.fill_profile(views, p);
      r[c] = membership_threshold(data.game, p);
      ll[c] = multinomial_loglik(counts, pred);
    }
  });
  by_threshold_.reserve(n);
  for (int64_t c = 0; c < n; ++c) by_threshold_.push_back({r[c], c});
  std::sort(by_threshold_.begin(), by_threshold_.end());
  prefix_best_.resize(n);
  prefix_cell_.resize(n);
  for (int64_t q = 0; q < n; ++q) {
    const int64_t c = by_threshold_[q].second;
    if (q == 0 || ll[c] > prefix_best_[q - 1]) {
      prefix_best_[q] = ll[c];
      prefix_cell_[q] = c;
    } else {
      prefix_best_[q] = prefix_best_[q - 1];
      prefix_cell_[q] = prefix_cell_[q - 1];
    }
  }
  const auto freq = data.sessions.at(session).frequencies();
  saturated_ = multinomial_loglik(counts, freq);
  data_threshold_ = threshold_at(freq);
  nash_points_ = nash_points(data);
}

double SetLikelihood::loglik_at(const std::vector<std::vector<double>>& pt) const {
  return multinomial_loglik(data_.sessions[session_].counts, pt);
}

double SetLikelihood::threshold_at(const std::vector<std::vector<double>>& pt) const {
  return membership_threshold(data_.game, to_profile(data_, pt));
}

double SetLikelihood::refine(std::vector<std::vector<double>> pt, double eps) const {
  const auto freq = data_.sessions[session_].frequencies();
  double best = loglik_at(pt);
  auto toward_data = [&]() {
    double lo = 0.0, hi = 1.0;
    auto at = [&](double t) {
      auto c = pt;
      for (size_t f = 0; f < c.size(); ++f) {
        for (size_t k = 0; k < c[f].size(); ++k) c[f][k] += t * (freq[f][k] - c[f][k]);
      }
      return c;
    };
    for (int it = 0; it < 50; ++it) {
      const double mid = 0.5 * (lo + hi);
      (threshold_at(at(mid)) < eps ? lo : hi) = mid;
    }
    auto c = at(lo);
    const double v = loglik_at(c);
    if (v > best) {
      best = v;
      pt = std::move(c);
    }
  };
  double delta = grid_.factor(0).spacing();
  for (int round = 0; round < 3; ++round) {
    toward_data();
    for (double d = delta; d > 1e-10; d *= 0.5) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (size_t f = 0; f < pt.size(); ++f) {
          for (size_t j = 0; j < pt[f].size(); ++j) {
            for (size_t l = 0; l < pt[f].size(); ++l) {
              if (j == l || pt[f][l] < d) continue;
              auto c = pt;
              c[f][j] += d;
              c[f][l] -= d;
              const double v = loglik_at(c);
              if (v > best && threshold_at(c) < eps) {
                best = v;
                pt = std::move(c);
                improved = true;
              }
            }
          }
        }
      }
    }
    delta *= 0.25;
  }
  return best;
}

std::vector<double> SetLikelihood::max_loglik(const std::vector<double>& eps) const {
  std::vector<double> out;
  double prev = -kInf;
  for (double e : eps) {
    double v;
    if (data_threshold_ < e) {
      v = saturated_;
    } else {
      const auto it = std::lower_bound(by_threshold_.begin(), by_threshold_.end(),
                                       std::make_pair(e, int64_t{-1}));
      const int64_t count = it - by_threshold_.begin();
      std::vector<std::vector<double>> start;
      double start_ll = -kInf;
      if (count > 0) {
        std::vector<int> parts(grid_.num_factors());
        grid_.decode(prefix_cell_[count - 1], parts);
        for (int f = 0; f < grid_.num_factors(); ++f) {
          auto c = grid_.factor(f).center(parts[f]);
          start.emplace_back(c.begin(), c.end());
        }
        start_ll = prefix_best_[count - 1];
      }
      for (const auto& np : nash_points_) {
        const double v2 = loglik_at(np);
        if (v2 > start_ll && threshold_at(np) < e) {
          start = np;
          start_ll = v2;
        }
      }
      v = start.empty() ? -kInf : refine(start, e);
    }
    v = std::max(v, prev);
    out.push_back(v);
    prev = v;
  }
  return out;
}

std::vector<double> eps_grid(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw ValidationError("eps step must lie in (0, 1]");
  const int n = static_cast<int>(std::round(1.0 / step));
  std::vector<double> out;
  for (int k = 1; k <= n; ++k) out.push_back(k == n ? 1.0 : k * step);
  return out;
}

std::vector<double> s_model_g(const GameData& data, const std::vector<double>& eps, int m) {
  std::vector<double> g(eps.size(), 0.0);
  for (size_t s = 0; s < data.sessions.size(); ++s) {
    SetLikelihood sl(data, static_cast<int>(s), m);
    const auto ll = sl.max_loglik(eps);
    for (size_t j = 0; j < eps.size(); ++j) g[j] += std::max(0.0, 2.0 * (sl.saturated_loglik() - ll[j]));
  }
  return g;
}

CurvePredictor::CurvePredictor(const Game& game, ModelKind model, const FitOptions& opts)
    : game_(game), model_(model) {
  switch (model) {
    case ModelKind::kLogit:
      curve_ = logit_qre_curve(game, opts.logit);
      break;
    case ModelKind::kLevelK:
      hierarchy_ = level_hierarchy(game);
      curve_ = level_k_curve(game, opts.tau_max, opts.steps);
      break;
    case ModelKind::kEpsPerfect:
    case ModelKind::kEpsProper:
      curve_ = eps_model_curve(game, restricted_kind(model), opts.steps, opts.eps_min);
      break;
    case ModelKind::kS:
      throw ValidationError("the S model has no curve");
  }
  for (const auto& s : curve_.samples) params_.push_back(s.parameter);
}

std::optional<Profile> CurvePredictor::at(double parameter) const {
  if (params_.empty()) return std::nullopt;
  const double lo = std::min(params_.front(), params_.back());
  const double hi = std::max(params_.front(), params_.back());
  if (parameter < lo - 1e-12 || parameter > hi + 1e-12) return std::nullopt;
  const int j = nearest_sample(curve_, parameter);
  try {
    switch (model_) {
      case ModelKind::kLogit:
        return solve_logit_qre(game_, parameter, sample(j), params_[j]);
      case ModelKind::kLevelK:
        return level_k_mixture(hierarchy_, parameter);
      case ModelKind::kEpsPerfect:
      case ModelKind::kEpsProper:
        return eps_model_at(game_, restricted_kind(model_), parameter, sample(j));
      case ModelKind::kS:
        break;
    }
  } catch (const NumericalError&) {
  }
  return std::nullopt;
}

FitResult fit_scalar_model(const std::vector<GameData>& games, ModelKind model,
                           const FitOptions& opts) {
  if (games.empty()) throw ValidationError("fit needs at least one game with data");
  FitResult r;
  r.model = model;
  double saturated = 0.0;
  for (const auto& d : games) {
    if (d.sessions.empty()) throw ValidationError("no observations for game " + d.game.id());
    r.games.push_back(d.game.id());
    r.dof += data_dof(d);
    for (const auto& s : d.sessions) saturated += multinomial_loglik(s.counts, s.frequencies());
  }
  if (model == ModelKind::kS) {
    const auto grid = eps_grid(opts.eps_step);
    std::vector<std::vector<double>> per(games.size());
    parallel_for(static_cast<int64_t>(games.size()), [&](int64_t b, int64_t e) {
      for (int64_t i = b; i < e; ++i) {
        const int m = opts.grid_m > 0 ? opts.grid_m : default_grid_m(games[i].space);
        per[i] = s_model_g(games[i], grid, m);
      }
    }, 1);
    std::vector<double> total(grid.size(), 0.0);
    for (const auto& p : per) {
      for (size_t j = 0; j < grid.size(); ++j) total[j] += p[j];
    }
    const double best = *std::min_element(total.begin(), total.end());
    size_t j = 0;
    while (total[j] > best + 1e-9) ++j;
    r.parameter = grid[j];
    r.g = total[j];
  } else {
    std::vector<std::unique_ptr<CurvePredictor>> preds(games.size());
    parallel_for(static_cast<int64_t>(games.size()), [&](int64_t b, int64_t e) {
      for (int64_t i = b; i < e; ++i) {
        preds[i] = std::make_unique<CurvePredictor>(games[i].game, model, opts);
      }
    }, 1);
    for (size_t i = 0; i < games.size(); ++i) {
      if (!preds[i]->curve().diagnostic.empty()) {
        r.diagnostic += games[i].game.id() + ": " + preds[i]->curve().diagnostic + "; ";
      }
    }
    const auto& params = preds[0]->parameters();
    auto total_at_sample = [&](size_t j) {
      double g = 0.0;
      for (size_t i = 0; i < games.size(); ++i) {
        if (j >= preds[i]->parameters().size()) return kInf;
        g += data_g(games[i], preds[i]->sample(static_cast<int>(j)));
      }
      return g;
    };
    auto total_at = [&](double x) {
      double g = 0.0;
      for (size_t i = 0; i < games.size(); ++i) {
        const auto p = preds[i]->at(x);
        if (!p) return kInf;
        g += data_g(games[i], *p);
      }
      return g;
    };
    size_t best = 0;
    double best_g = kInf;
    for (size_t j = 0; j < params.size(); ++j) {
      const double g = total_at_sample(j);
      if (g < best_g - 1e-12) {
        best_g = g;
        best = j;
      }
    }
    if (!std::isfinite(best_g)) throw NumericalError("no finite likelihood along the model curve");
    const double a = params[best > 0 ? best - 1 : best];
    const double b = params[best + 1 < params.size() ? best + 1 : best];
    r.parameter = params[best];
    r.g = best_g;
    if (a != b) {
      const auto [x, g] = golden_min(total_at, std::min(a, b), std::max(a, b));
      if (g < best_g) {
        r.parameter = x;
        r.g = g;
      }
    }
  }
  r.g_bar = g_bar(r.g, r.dof);
  r.log_likelihood = saturated - r.g / 2.0;
  return r;
}

double g_at_parameter(const GameData& data, ModelKind model, double parameter,
                      const FitOptions& opts) {
  if (model == ModelKind::kS) {
    const int m = opts.grid_m > 0 ? opts.grid_m : default_grid_m(data.space);
    return s_model_g(data, {parameter}, m)[0];
  }
  CurvePredictor pred(data.game, model, opts);
  const auto p = pred.at(parameter);
  if (!p) throw NumericalError("parameter outside the traced model curve");
  return data_g(data, *p);
}

OutOfSample out_of_sample(const std::vector<GameData>& games, ModelKind model, int k,
                          const FitOptions& opts) {
  const int n = static_cast<int>(games.size());
  if (k < 1 || k >= n) throw ValidationError("in-sample size must lie in 1..(#games - 1)");
  // G of every game at every grid parameter.
  std::vector<std::vector<double>> table(n);
  size_t width = 0;
  parallel_for(n, [&](int64_t b, int64_t e) {
    for (int64_t i = b; i < e; ++i) {
      if (model == ModelKind::kS) {
        const int m = opts.grid_m > 0 ? opts.grid_m : default_grid_m(games[i].space);
        table[i] = s_model_g(games[i], eps_grid(opts.eps_step), m);
      } else {
        CurvePredictor pred(games[i].game, model, opts);
        for (size_t j = 0; j < pred.parameters().size(); ++j) {
          table[i].push_back(data_g(games[i], pred.sample(static_cast<int>(j))));
        }
      }
    }
  }, 1);
  for (const auto& t : table) width = std::max(width, t.size());
  for (auto& t : table) t.resize(width, kInf);
  std::vector<int> pick(n, 0);
  std::fill(pick.begin(), pick.begin() + k, 1);
  OutOfSample out;
  out.in_sample_size = k;
  double sum = 0.0;
  do {
    size_t best = 0;
    double best_g = kInf;
    for (size_t j = 0; j < width; ++j) {
      double g = 0.0;
      for (int i = 0; i < n; ++i) {
        if (pick[i]) g += table[i][j];
      }
      if (g < best_g - 1e-12) {
        best_g = g;
        best = j;
      }
    }
    double held = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!pick[i]) held += table[i][best];
    }
    sum += held / (n - k);
    ++out.combinations;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  out.average_g = sum / out.combinations;
  return out;
}

}  // namespace sequil
