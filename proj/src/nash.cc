#include "sequil/nash.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "sequil/error.h"
#include "sequil/solver.h"

namespace sequil {
namespace {

constexpr double kFeasTol = 1e-10;

std::vector<std::vector<int>> subsets_of_size(int k, int s) {
  std::vector<std::vector<int>> out;
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    if (__builtin_popcount(mask) != s) continue;
    std::vector<int> sub;
    for (int i = 0; i < k; ++i) {
      if (mask & (1u << i)) sub.push_back(i);
    }
    out.push_back(std::move(sub));
  }
  return out;
}

// Solves for a mix over `cols` that makes the row player indifferent over
// `rows` given payoff matrix m (rows x cols of the full game).
bool solve_indifference(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                        const std::vector<int>& cols, Eigen::VectorXd& mix,
                        double& value, bool& singular) {
  const int s = static_cast<int>(rows.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(s + 1, s + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(s + 1);
  for (int r = 0; r < s; ++r) {
    for (int c = 0; c < s; ++c) a(r, c) = m(rows[r], cols[c]);
    a(r, s) = -1.0;
  }
  for (int c = 0; c < s; ++c) a(s, c) = 1.0;
  b[s] = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) {
    singular = true;
    return false;
  }
  Eigen::VectorXd sol = lu.solve(b);
  mix = Eigen::VectorXd::Zero(m.cols());
  for (int c = 0; c < s; ++c) {
    if (sol[c] < -kFeasTol) return false;
    mix[cols[c]] = std::max(0.0, sol[c]);
  }
  mix /= mix.sum();
  value = sol[s];
  return true;
}

bool is_new(const std::vector<Profile>& seen, const Profile& p) {
  for (const auto& q : seen) {
    double d = 0.0;
    for (size_t i = 0; i < p.data().size(); ++i) {
      d = std::max(d, std::abs(p.data()[i] - q.data()[i]));
    }
    if (d < 1e-9) return false;
  }
  return true;
}

bool is_nash(const Game& game, const Profile& p, double tol) {
  for (int i = 0; i < game.num_players(); ++i) {
    auto pi = expected_payoffs(game, i, p);
    const double best = *std::max_element(pi.begin(), pi.end());
    double got = 0.0;
    for (int k = 0; k < game.num_strategies(i); ++k) got += p[i][k] * pi[k];
    if (got < best - tol) return false;
  }
  return true;
}

}  // namespace

NashResult support_enumeration_nash(const Game& game, bool symmetric_only) {
  if (game.num_players() != 2) {
    throw ValidationError("support enumeration needs a 2-player game");
  }
  const int k1 = game.num_strategies(0), k2 = game.num_strategies(1);
  Eigen::MatrixXd a(k1, k2), b(k1, k2);
  for (int r = 0; r < k1; ++r) {
    for (int c = 0; c < k2; ++c) {
      a(r, c) = game.payoff(0, {r, c});
      b(r, c) = game.payoff(1, {r, c});
    }
  }
  Eigen::MatrixXd bt = b.transpose();
  NashResult result;
  for (int s = 1; s <= std::min(k1, k2); ++s) {
    for (const auto& s1 : subsets_of_size(k1, s)) {
      for (const auto& s2 : subsets_of_size(k2, s)) {
        Eigen::VectorXd sigma2, sigma1;
        double v1 = 0.0, v2 = 0.0;
        bool singular = false;
        const bool ok2 = solve_indifference(a, s1, s2, sigma2, v1, singular);
        const bool ok1 = solve_indifference(bt, s2, s1, sigma1, v2, singular);
        if (singular) ++result.singular_systems;
        if (!ok1 || !ok2) continue;
        Profile p({k1, k2});
        for (int r = 0; r < k1; ++r) p[0][r] = sigma1[r];
        for (int c = 0; c < k2; ++c) p[1][c] = sigma2[c];
        if (!is_nash(game, p, 1e-9)) continue;
        if (symmetric_only) {
          if (k1 != k2) continue;
          double d = 0.0;
          for (int k = 0; k < k1; ++k) d = std::max(d, std::abs(p[0][k] - p[1][k]));
          if (d > 1e-9) continue;
        }
        if (is_new(result.equilibria, p)) result.equilibria.push_back(std::move(p));
      }
    }
  }
  return result;
}

std::vector<std::vector<double>> symmetric_nash(const Game& game) {
  if (!game.symmetric()) {
    throw ValidationError("symmetric_nash needs a symmetric game");
  }
  const int k = game.num_strategies(0);
  const int n = game.num_players();
  std::vector<Profile> found;
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<int> support;
    for (int i = 0; i < k; ++i) {
      if (mask & (1u << i)) support.push_back(i);
    }
    const int s = static_cast<int>(support.size());
    auto to_sigma = [&](const Eigen::VectorXd& x) {
      std::vector<double> sigma(k, 0.0);
      double rest = 1.0;
      for (int j = 0; j + 1 < s; ++j) {
        sigma[support[j]] = x[j];
        rest -= x[j];
      }
      sigma[support[s - 1]] = rest;
      return sigma;
    };
    auto residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
      auto pi = expected_payoffs(game, 0, Profile::replicate(n, to_sigma(x)));
      for (int j = 1; j < s; ++j) out[j - 1] = pi[support[0]] - pi[support[j]];
    };
    // Starting points: a lattice with spacing 1/4 over the support face.
    std::vector<Eigen::VectorXd> starts;
    if (s == 1) {
      starts.emplace_back(0);
    } else {
      const int steps = 4;
      std::vector<int> c(s - 1, 0);
      while (true) {
        int used = 0;
        for (int v : c) used += v;
        if (used <= steps) {
          Eigen::VectorXd x(s - 1);
          for (int j = 0; j + 1 < s; ++j) {
            x[j] = (c[j] + 1.0 / s) / (steps + 1.0);
          }
          starts.push_back(x);
        }
        int j = 0;
        while (j < s - 1 && ++c[j] > steps) c[j++] = 0;
        if (j == s - 1) break;
      }
    }
    for (auto x : starts) {
      if (s > 1 && !newton_solve(residual, s - 1, x, {.max_iter = 60, .tol = 1e-12})) {
        continue;
      }
      auto sigma = to_sigma(x);
      bool feasible = true;
      for (double& v : sigma) {
        if (v < -kFeasTol) feasible = false;
        v = std::max(0.0, v);
      }
      if (!feasible) continue;
      double total = 0.0;
      for (double v : sigma) total += v;
      for (double& v : sigma) v /= total;
      Profile p = Profile::replicate(n, sigma);
      if (!is_nash(game, p, 1e-9)) continue;
      if (is_new(found, p)) found.push_back(std::move(p));
    }
  }
  std::vector<std::vector<double>> out;
  for (const auto& p : found) out.emplace_back(p[0].begin(), p[0].end());
  return out;
}

}  // namespace sequil
