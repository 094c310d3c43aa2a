#include "sequil/potential.h"

#include <algorithm>
#include <array>

namespace sequil {
namespace {

double max_of(std::span<const double> v) {
  return *std::max_element(v.begin(), v.end());
}

}  // namespace

std::vector<int> supp_eps(std::span<const double> sigma, double eps) {
  const double m = max_of(sigma);
  std::vector<int> out;
  for (int l = 0; l < static_cast<int>(sigma.size()); ++l) {
    if (sigma[l] >= eps * m) out.push_back(l);
  }
  return out;
}

unsigned supp_eps_mask(std::span<const double> sigma, double eps) {
  const double m = max_of(sigma);
  unsigned mask = 0;
  for (int l = 0; l < static_cast<int>(sigma.size()); ++l) {
    if (sigma[l] >= eps * m) mask |= 1u << l;
  }
  return mask;
}

double positivity_shift(const Game& game) {
  const double m = game.min_payoff();
  return m <= 0.0 ? 1.0 - m : 0.0;
}

double potential_value_shifted(const Game& game, const Profile& sigma,
                               double eps, double extra_shift,
                               double tie_tol) {
  const double shift = positivity_shift(game) + extra_shift;
  std::array<double, kMaxStrategies> pi{};
  double y = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    const int k = game.num_strategies(i);
    std::span<double> p(pi.data(), k);
    expected_payoffs(game, i, sigma, p);
    for (double& v : p) v += shift;
    const double best = max_of(p);
    const double top = max_of(sigma[i]);
    double worst_supported = best;
    for (int l = 0; l < k; ++l) {
      if (sigma[i][l] >= eps * top) worst_supported = std::min(worst_supported, p[l]);
    }
    const double term = worst_supported - best;
    if (term < -tie_tol) y += term;
  }
  return y;
}

double potential_value(const Game& game, const Profile& sigma, double eps,
                       double tie_tol) {
  return potential_value_shifted(game, sigma, eps, 0.0, tie_tol);
}

bool is_s_choice_point(const Game& game, const Profile& sigma, double eps,
                       double tol) {
  std::array<double, kMaxStrategies> pi{};
  for (int i = 0; i < game.num_players(); ++i) {
    const int k = game.num_strategies(i);
    std::span<double> p(pi.data(), k);
    expected_payoffs(game, i, sigma, p);
    double best = p[0], top = sigma[i][0];
    for (int j = 1; j < k; ++j) {
      best = std::max(best, p[j]);
      top = std::max(top, sigma[i][j]);
    }
    for (int j = 0; j < k; ++j) {
      if (p[j] < best - tol && !(sigma[i][j] < eps * top)) return false;
    }
  }
  return true;
}

std::vector<unsigned> best_reply_pattern(const Game& game, const Profile& sigma,
                                         double tol) {
  std::array<double, kMaxStrategies> pi{};
  std::vector<unsigned> out;
  for (int i = 0; i < game.num_players(); ++i) {
    std::span<double> p(pi.data(), game.num_strategies(i));
    expected_payoffs(game, i, sigma, p);
    out.push_back(best_reply_mask(p, tol));
  }
  return out;
}

std::optional<std::vector<unsigned>> color_of(const Game& game,
                                              const Profile& sigma, double eps,
                                              double tol) {
  auto pattern = best_reply_pattern(game, sigma, tol);
  for (int i = 0; i < game.num_players(); ++i) {
    if (supp_eps_mask(sigma[i], eps) != pattern[i]) return std::nullopt;
  }
  return pattern;
}

double membership_threshold(const Game& game, const Profile& sigma, double tol) {
  std::array<double, kMaxStrategies> pi{};
  double r = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    const int k = game.num_strategies(i);
    std::span<double> p(pi.data(), k);
    expected_payoffs(game, i, sigma, p);
    const double best = max_of(p);
    const double top = max_of(sigma[i]);
    for (int j = 0; j < k; ++j) {
      if (p[j] < best - tol) r = std::max(r, sigma[i][j] / top);
    }
  }
  return r;
}

}  // namespace sequil
