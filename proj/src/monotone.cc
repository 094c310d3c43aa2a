#include <algorithm>
#include <array>
#include <cmath>

#include "sequil/regions.h"

namespace sequil {

bool monotone_set_membership(const Game& game, const Profile& sigma, double tol,
                             double prob_tol) {
  std::array<double, kMaxStrategies> pi{};
  for (int i = 0; i < game.num_players(); ++i) {
    const int k = game.num_strategies(i);
    std::span<double> p(pi.data(), k);
    expected_payoffs(game, i, sigma, p);
    const auto s = sigma[i];
    for (int j = 0; j < k; ++j) {
      for (int l = 0; l < k; ++l) {
        if (j == l) continue;
        if (p[j] > p[l] + tol) {
          if (s[j] < s[l] - prob_tol) return false;
        } else if (std::abs(p[j] - p[l]) <= tol) {
          if (std::abs(s[j] - s[l]) > prob_tol) return false;
        }
      }
    }
  }
  return true;
}

}  // namespace sequil
