#include "sequil/beliefs.h"

#include <algorithm>
#include <cmath>

#include "sequil/error.h"
#include "sequil/level_k.h"

namespace sequil {
namespace {

int opponent_of(const Game& game, int role) { return (role + 1) % game.num_players(); }

std::vector<double> rounded(const std::vector<double>& v, double step) {
  std::vector<double> out(v.size());
  for (size_t k = 0; k < v.size(); ++k) out[k] = std::round(v[k] / step) * step;
  return out;
}

bool same(const std::vector<double>& a, const std::vector<double>& b) {
  for (size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k] - b[k]) > 1e-6) return false;
  }
  return true;
}

}  // namespace

std::vector<double> payoffs_under_belief(const Game& game, int role,
                                         const std::vector<double>& belief) {
  Profile p = Profile::uniform(game.strategy_counts());
  for (int j = 0; j < game.num_players(); ++j) {
    if (j == role) continue;
    if (game.num_strategies(j) != static_cast<int>(belief.size())) {
      throw ValidationError("belief length does not match the opponents of role " +
                            std::to_string(role));
    }
    std::copy(belief.begin(), belief.end(), p[j].begin());
  }
  return expected_payoffs(game, role, p);
}

int choice_rank(const std::vector<double>& payoffs, int choice, double tol) {
  int rank = 1;
  for (double v : payoffs) rank += v > payoffs[choice] + tol ? 1 : 0;
  return rank;
}

std::vector<std::vector<double>> level_k_beliefs(const Game& game, int role, int depth) {
  const LevelHierarchy h = level_hierarchy(game, depth);
  const int opp = opponent_of(game, role);
  std::vector<std::vector<double>> out;
  for (int k = 1; k <= depth; ++k) {
    const auto v = h.level(k - 1)[opp];
    out.emplace_back(v.begin(), v.end());
  }
  return out;
}

BeliefReport belief_diagnostics(const Game& game, const std::vector<Observation>& rows,
                                const BeliefOptions& opts) {
  BeliefReport rep;
  rep.game_id = game.id();
  const int n = game.num_players();
  const bool pooled = game.symmetric();
  auto group = [&](int role) { return pooled ? 0 : role; };
  const int groups = pooled ? 1 : n;

  std::vector<std::vector<double>> choice_counts(groups);
  for (int g = 0; g < groups; ++g) choice_counts[g].assign(game.num_strategies(g), 0.0);
  for (const auto& o : rows) {
    if (o.game == game.id()) choice_counts[group(o.role)][o.choice] += 1.0;
  }
  std::vector<int> modal(groups);
  for (int g = 0; g < groups; ++g) {
    modal[g] = static_cast<int>(std::max_element(choice_counts[g].begin(), choice_counts[g].end()) -
                                choice_counts[g].begin());
  }

  std::vector<std::vector<std::vector<double>>> level_points(n);
  for (int r = 0; r < n; ++r) {
    for (const auto& b : level_k_beliefs(game, r, opts.level_depth)) {
      level_points[r].push_back(rounded(b, opts.rounding));
    }
  }

  int kmax = 0;
  for (int r = 0; r < n; ++r) kmax = std::max(kmax, game.num_strategies(r));
  std::vector<double> ranks(kmax, 0.0);
  int level_hits = 0, unbiased = 0;
  // Beliefs grouped by the role they are about.
  std::vector<std::vector<std::vector<double>>> held(groups), chosen(groups);
  for (const auto& o : rows) {
    if (o.game != game.id()) continue;
    std::vector<double> one_hot(game.num_strategies(o.role), 0.0);
    one_hot[o.choice] = 1.0;
    chosen[group(o.role)].push_back(std::move(one_hot));
    if (o.belief.empty()) {
      ++rep.missing;
      continue;
    }
    ++rep.beliefs;
    const auto rb = rounded(o.belief, opts.rounding);
    for (const auto& lp : level_points[o.role]) {
      if (same(rb, lp)) {
        ++level_hits;
        break;
      }
    }
    const auto pi = payoffs_under_belief(game, o.role, o.belief);
    ranks[choice_rank(pi, o.choice) - 1] += 1.0;
    const auto br = best_reply_set(pi);
    if (std::find(br.begin(), br.end(), modal[group(o.role)]) != br.end()) ++unbiased;
    held[group(opponent_of(game, o.role))].push_back(o.belief);
  }
  if (rep.beliefs > 0) {
    rep.level_k_share = static_cast<double>(level_hits) / rep.beliefs;
    rep.unbiased_share = static_cast<double>(unbiased) / rep.beliefs;
    for (double& v : ranks) v /= rep.beliefs;
  }
  rep.rank_share = ranks;

  for (int g = 0; g < groups; ++g) {
    if (held[g].empty() || chosen[g].empty()) continue;
    ExpectationTest t;
    t.role = g;
    const size_t k = chosen[g][0].size();
    t.mean_choice.assign(k, 0.0);
    t.mean_belief.assign(k, 0.0);
    for (const auto& c : chosen[g]) {
      for (size_t j = 0; j < k; ++j) t.mean_choice[j] += c[j] / chosen[g].size();
    }
    for (const auto& b : held[g]) {
      for (size_t j = 0; j < k; ++j) t.mean_belief[j] += b[j] / held[g].size();
    }
    t.test = permutation_mean_test(chosen[g], held[g], opts.resamples, opts.seed + g);
    rep.expectations.push_back(std::move(t));
  }
  return rep;
}

}  // namespace sequil
