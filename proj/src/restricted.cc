#include "sequil/restricted.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sequil/error.h"
#include "sequil/solver.h"

namespace sequil {
namespace {

std::vector<double> rank_weights(int k, double eps, RestrictedKind kind) {
  std::vector<double> w(k);
  double p = 1.0;
  for (int r = 0; r < k; ++r) {
    w[r] = kind == RestrictedKind::kPerfect ? (r == 0 ? 1.0 : eps) : p;
    p *= eps;
  }
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= sum;
  return w;
}

// Sum of weights[from, from + len).
double segment_sum(const std::vector<double>& w, int from, int len) {
  return std::accumulate(w.begin() + from, w.begin() + from + len, 0.0);
}

// How far x (values of one block) is from the permutahedron of the weight
// segment: total mismatch and excess of sorted partial sums.
double majorization_gap(std::vector<double> x, const std::vector<double>& w, int from) {
  std::sort(x.begin(), x.end(), std::greater<>());
  double gap = 0.0, px = 0.0, pw = 0.0;
  for (size_t t = 0; t < x.size(); ++t) {
    px += x[t];
    pw += w[from + t];
    gap = std::max(gap, px - pw);
  }
  return std::max(gap, std::abs(px - pw));
}

// Strategy classes by payoff, best first, ties within tol.
std::vector<std::vector<int>> payoff_classes(const std::vector<double>& pi, double tol) {
  std::vector<int> order(pi.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return pi[a] > pi[b]; });
  std::vector<std::vector<int>> out;
  for (int j : order) {
    if (!out.empty() && pi[out.back().front()] - pi[j] <= tol) {
      out.back().push_back(j);
    } else {
      out.push_back({j});
    }
  }
  return out;
}

struct Block {
  std::vector<int> members;
  int weight_from = 0;
  bool tied = true;
};
using Ordering = std::vector<Block>;

// Candidate faces for one player with k strategies.
std::vector<Ordering> candidate_orderings(int k, RestrictedKind kind) {
  std::vector<Ordering> out;
  if (kind == RestrictedKind::kPerfect) {
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
      Block top, rest;
      for (int j = 0; j < k; ++j) ((mask >> j) & 1 ? top : rest).members.push_back(j);
      rest.weight_from = static_cast<int>(top.members.size());
      rest.tied = false;
      Ordering o{top};
      if (!rest.members.empty()) o.push_back(rest);
      out.push_back(std::move(o));
    }
    return out;
  }
  // Ordered set partitions: label each strategy with a rank so that the
  // used ranks are 0..m-1.
  std::vector<int> label(k, 0);
  while (true) {
    const int m = *std::max_element(label.begin(), label.end()) + 1;
    std::vector<int> used(m, 0);
    for (int l : label) used[l] = 1;
    if (std::all_of(used.begin(), used.end(), [](int u) { return u; })) {
      Ordering o(m);
      for (int j = 0; j < k; ++j) o[label[j]].members.push_back(j);
      int from = 0;
      for (auto& b : o) {
        b.weight_from = from;
        from += static_cast<int>(b.members.size());
      }
      out.push_back(std::move(o));
    }
    int pos = 0;
    while (pos < k && ++label[pos] == k) label[pos++] = 0;
    if (pos == k) break;
  }
  return out;
}

bool segment_is_point(const std::vector<double>& w, const Block& b) {
  const int s = static_cast<int>(b.members.size());
  return std::abs(w[b.weight_from] - w[b.weight_from + s - 1]) <= 1e-15;
}

// Solves the tie equations of one combination of per-block orderings.
class FaceSolver {
 public:
  FaceSolver(const Game& game, bool shared, std::vector<std::vector<double>> weights,
             std::vector<const Ordering*> orders)
      : game_(game), shared_(shared), weights_(std::move(weights)), orders_(std::move(orders)) {
    for (size_t b = 0; b < orders_.size(); ++b) {
      for (const auto& blk : *orders_[b]) {
        const int s = static_cast<int>(blk.members.size());
        if (blk.tied && s >= 2) {
          num_eq_ += s - 1;
          if (!segment_is_point(weights_[b], blk)) num_var_ += s - 1;
        }
      }
    }
  }

  int num_var() const { return num_var_; }
  int num_eq() const { return num_eq_; }

  // x holds, per free block, the first s-1 member probabilities.
  void fill(const Eigen::VectorXd& x, Profile& out) const {
    int off = 0;
    for (size_t b = 0; b < orders_.size(); ++b) {
      auto s = out[static_cast<int>(b)];
      const auto& w = weights_[b];
      for (const auto& blk : *orders_[b]) {
        const int n = static_cast<int>(blk.members.size());
        const double total = segment_sum(w, blk.weight_from, n);
        if (blk.tied && n >= 2 && !segment_is_point(w, blk)) {
          double used = 0.0;
          for (int t = 0; t + 1 < n; ++t) {
            s[blk.members[t]] = x[off + t];
            used += x[off + t];
          }
          s[blk.members[n - 1]] = total - used;
          off += n - 1;
        } else {
          for (int j : blk.members) s[j] = total / n;
        }
      }
    }
    if (shared_) {
      for (int i = 1; i < out.num_players(); ++i) {
        std::copy(out[0].begin(), out[0].end(), out[i].begin());
      }
    }
  }

  void equations(const Profile& p, Eigen::VectorXd& out) const {
    int off = 0;
    for (size_t b = 0; b < orders_.size(); ++b) {
      const auto pi = expected_payoffs(game_, static_cast<int>(b), p);
      for (const auto& blk : *orders_[b]) {
        if (!blk.tied) continue;
        for (size_t t = 1; t < blk.members.size(); ++t) {
          out[off++] = pi[blk.members[0]] - pi[blk.members[t]];
        }
      }
    }
  }

  // Start points: per-block centers pulled toward each weight permutation.
  std::vector<Eigen::VectorXd> starts() const {
    std::vector<Eigen::VectorXd> out;
    const int variants = 7;
    for (int v = 0; v < variants; ++v) {
      Eigen::VectorXd x(num_var_);
      int off = 0;
      for (size_t b = 0; b < orders_.size(); ++b) {
        const auto& w = weights_[b];
        for (const auto& blk : *orders_[b]) {
          const int n = static_cast<int>(blk.members.size());
          if (!(blk.tied && n >= 2 && !segment_is_point(w, blk))) continue;
          std::vector<int> perm(n);
          std::iota(perm.begin(), perm.end(), 0);
          for (int r = 0; r < v - 1; ++r) std::next_permutation(perm.begin(), perm.end());
          const double mean = segment_sum(w, blk.weight_from, n) / n;
          for (int t = 0; t + 1 < n; ++t) {
            x[off + t] = v == 0 ? mean : 0.5 * mean + 0.5 * w[blk.weight_from + perm[t]];
          }
          off += n - 1;
        }
      }
      out.push_back(std::move(x));
    }
    return out;
  }

 private:
  const Game& game_;
  bool shared_;
  std::vector<std::vector<double>> weights_;
  std::vector<const Ordering*> orders_;
  int num_var_ = 0;
  int num_eq_ = 0;
};

// Payoff order between consecutive blocks and within-block ties.
bool consistent(const Game& game, const Profile& p,
                const std::vector<const Ordering*>& orders, double tol) {
  for (size_t b = 0; b < orders.size(); ++b) {
    const auto pi = expected_payoffs(game, static_cast<int>(b), p);
    double prev_min = INFINITY;
    for (const auto& blk : *orders[b]) {
      double lo = INFINITY, hi = -INFINITY;
      for (int j : blk.members) {
        lo = std::min(lo, pi[j]);
        hi = std::max(hi, pi[j]);
      }
      if (blk.tied && hi - lo > tol) return false;
      if (hi > prev_min + tol) return false;
      prev_min = lo;
    }
  }
  return true;
}

double profile_distance(const Profile& a, const Profile& b) {
  double d = 0.0;
  for (size_t q = 0; q < a.data().size(); ++q) d = std::max(d, std::abs(a.data()[q] - b.data()[q]));
  return d;
}

}  // namespace

RestrictedSimplex restricted_vertices(int k, double eps, RestrictedKind kind) {
  if (k < 2 || k > kMaxStrategies) throw ValidationError("restricted simplex needs 2 <= K <= 5");
  if (!(eps > 0.0 && eps <= 1.0)) throw ValidationError("epsilon must lie in (0, 1]");
  RestrictedSimplex rs;
  rs.kind = kind;
  rs.k = k;
  rs.eps = eps;
  rs.weights = rank_weights(k, eps, kind);
  if (kind == RestrictedKind::kPerfect) {
    for (int j = 0; j < k; ++j) {
      std::vector<int> perm{j};
      for (int l = 0; l < k; ++l) {
        if (l != j) perm.push_back(l);
      }
      rs.permutations.push_back(perm);
    }
  } else {
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      rs.permutations.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  for (const auto& perm : rs.permutations) {
    std::vector<double> v(k);
    for (int r = 0; r < k; ++r) v[perm[r]] = rs.weights[r];
    rs.vertices.push_back(std::move(v));
  }
  return rs;
}

Face better_reply(const Game& game, int who, const Profile& against,
                  const RestrictedSimplex& rs, double tie_tol) {
  if (rs.k != game.num_strategies(who)) {
    throw ValidationError("restricted simplex size does not match the player's strategies");
  }
  const auto pi = expected_payoffs(game, who, against);
  std::vector<double> value;
  for (const auto& v : rs.vertices) {
    value.push_back(std::inner_product(v.begin(), v.end(), pi.begin(), 0.0));
  }
  const double top = *std::max_element(value.begin(), value.end());
  Face f;
  f.barycenter.assign(rs.k, 0.0);
  for (size_t j = 0; j < value.size(); ++j) {
    if (value[j] >= top - tie_tol) {
      f.vertex_ids.push_back(static_cast<int>(j));
      for (int l = 0; l < rs.k; ++l) f.barycenter[l] += rs.vertices[j][l];
    }
  }
  for (double& v : f.barycenter) v /= f.vertex_ids.size();
  return f;
}

double better_reply_residual(const Game& game, const Profile& sigma,
                             RestrictedKind kind, double eps, double tie_tol) {
  double r = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    const int k = game.num_strategies(i);
    const auto w = rank_weights(k, eps, kind);
    const auto classes = payoff_classes(expected_payoffs(game, i, sigma), tie_tol);
    int from = 0;
    for (size_t c = 0; c < classes.size(); ++c) {
      std::vector<int> block = classes[c];
      if (kind == RestrictedKind::kPerfect && c > 0) {
        for (int j : block) r = std::max(r, std::abs(sigma[i][j] - w[k - 1]));
        continue;
      }
      std::vector<double> x;
      for (int j : block) x.push_back(sigma[i][j]);
      r = std::max(r, majorization_gap(x, w, from));
      from += static_cast<int>(block.size());
    }
  }
  return r;
}

std::vector<Profile> eps_model_fixed_points(const Game& game,
                                            RestrictedKind kind, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw ValidationError("epsilon must lie in (0, 1]");
  const bool shared = game.symmetric();
  const int blocks = shared ? 1 : game.num_players();
  if (eps == 1.0) return {Profile::uniform(game.strategy_counts())};
  std::vector<std::vector<Ordering>> options(blocks);
  std::vector<std::vector<double>> weights(blocks);
  for (int b = 0; b < blocks; ++b) {
    options[b] = candidate_orderings(game.num_strategies(b), kind);
    weights[b] = rank_weights(game.num_strategies(b), eps, kind);
  }
  const double scale = std::max(1.0, game.max_payoff() - game.min_payoff());
  std::vector<Profile> found;
  std::vector<size_t> pick(blocks, 0);
  while (true) {
    std::vector<const Ordering*> orders;
    for (int b = 0; b < blocks; ++b) orders.push_back(&options[b][pick[b]]);
    FaceSolver solver(game, shared, weights, orders);
    Profile p(game.strategy_counts());
    Profile work(game.strategy_counts());
    VectorFn f = [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
      solver.fill(x, work);
      solver.equations(work, out);
    };
    for (auto x : solver.starts()) {
      NewtonOptions opts;
      opts.tol = 1e-12 * scale;
      if (solver.num_eq() > 0 && solver.num_var() > 0) {
        newton_solve(f, solver.num_eq(), x, opts);
      }
      solver.fill(x, p);
      bool inside = true;
      for (int b = 0; b < blocks && inside; ++b) {
        for (const auto& blk : *orders[b]) {
          std::vector<double> vals;
          for (int j : blk.members) vals.push_back(p[b][j]);
          if (majorization_gap(vals, weights[b], blk.weight_from) > 1e-12) inside = false;
        }
      }
      if (!inside || !consistent(game, p, orders, 1e-9 * scale)) continue;
      if (better_reply_residual(game, p, kind, eps) > 1e-10) continue;
      bool dup = false;
      for (const auto& q : found) dup = dup || profile_distance(p, q) < 1e-9;
      if (!dup) found.push_back(p);
      if (solver.num_var() == 0) break;
    }
    int b = 0;
    while (b < blocks && ++pick[b] == options[b].size()) pick[b++] = 0;
    if (b == blocks) break;
  }
  return found;
}

Profile eps_model_at(const Game& game, RestrictedKind kind, double eps,
                     const Profile& near) {
  const auto pts = eps_model_fixed_points(game, kind, eps);
  if (pts.empty()) {
    std::ostringstream msg;
    msg << "no restricted-simplex fixed point found at eps=" << eps;
    throw NumericalError(msg.str());
  }
  size_t best = 0;
  for (size_t j = 1; j < pts.size(); ++j) {
    if (profile_distance(pts[j], near) < profile_distance(pts[best], near)) best = j;
  }
  return pts[best];
}

ModelCurve eps_model_curve(const Game& game, RestrictedKind kind, int steps,
                           double eps_min) {
  if (steps < 1 || !(eps_min > 0.0 && eps_min < 1.0)) {
    throw ValidationError("eps curve needs steps >= 1 and 0 < eps_min < 1");
  }
  ModelCurve curve;
  curve.model = kind == RestrictedKind::kPerfect ? ModelKind::kEpsPerfect : ModelKind::kEpsProper;
  curve.game_id = game.id();
  Profile prev = Profile::uniform(game.strategy_counts());
  for (int s = 0; s <= steps; ++s) {
    const double eps = s == steps ? eps_min : 1.0 - (1.0 - eps_min) * s / steps;
    try {
      prev = eps_model_at(game, kind, eps, prev);
    } catch (const NumericalError& e) {
      curve.diagnostic = e.what();
      break;
    }
    curve.samples.push_back({eps, prev, better_reply_residual(game, prev, kind, eps)});
  }
  return curve;
}

}  // namespace sequil
