#include "sequil/simulate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "sequil/error.h"
#include "sequil/estimation.h"
#include "sequil/potential.h"
#include "sequil/simplex_grid.h"

namespace sequil {
namespace {

// Circle method: n-1 rounds of perfect matchings of n (even) agents.
std::vector<std::vector<std::vector<int>>> circle_rounds(int n) {
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<int> ring(n);
  for (int i = 0; i < n; ++i) ring[i] = i;
  for (int t = 0; t < n - 1; ++t) {
    std::vector<std::vector<int>> round;
    for (int i = 0; i < n / 2; ++i) round.push_back({ring[i], ring[n - 1 - i]});
    out.push_back(std::move(round));
    std::rotate(ring.begin() + 1, ring.end() - 1, ring.end());
  }
  return out;
}

int sample_index(std::mt19937_64& rng, std::span<const double> p) {
  std::discrete_distribution<int> d(p.begin(), p.end());
  return d(rng);
}

double payoff_gap(std::span<const double> pi) {
  const double best = *std::max_element(pi.begin(), pi.end());
  double second = -std::numeric_limits<double>::infinity();
  for (double v : pi) {
    if (v < best - kTieTol) second = std::max(second, v);
  }
  return std::isfinite(second) ? best - second : 0.0;
}

}  // namespace

Protocol parse_protocol(const std::string& name) {
  if (name == "perfect-stranger") return Protocol::kPerfectStranger;
  if (name == "minimal-repeat") return Protocol::kMinimalRepeat;
  throw ValidationError("unknown protocol '" + name + "' (perfect-stranger, minimal-repeat)");
}

std::vector<std::vector<std::vector<int>>> matching_schedule(const Game& game, int agents,
                                                             int rounds, Protocol protocol) {
  const int n = game.num_players();
  if (agents < n || agents % n != 0) {
    throw ValidationError("need a positive multiple of " + std::to_string(n) + " agents");
  }
  std::vector<std::vector<std::vector<int>>> base;
  if (n == 1) {
    std::vector<std::vector<int>> round;
    for (int a = 0; a < agents; ++a) round.push_back({a});
    base.push_back(round);
  } else if (n == 2 && game.symmetric()) {
    if (agents % 2 != 0) throw ValidationError("need an even number of agents");
    base = circle_rounds(agents);
  } else {
    // Role columns of size m; round t matches column j's member i + j t.
    // Pairs never repeat within m rounds when m is coprime to 1..n-1.
    const int m = agents / n;
    int distinct = m;
    for (int d = 1; d < n; ++d) {
      if (std::gcd(d, m) != 1) distinct = std::min(distinct, 1);
    }
    for (int t = 0; t < distinct; ++t) {
      std::vector<std::vector<int>> round;
      for (int i = 0; i < m; ++i) {
        std::vector<int> g;
        for (int j = 0; j < n; ++j) g.push_back(((i + j * t) % m) * n + j);
        round.push_back(std::move(g));
      }
      base.push_back(std::move(round));
    }
  }
  if (rounds > static_cast<int>(base.size()) && protocol == Protocol::kPerfectStranger) {
    throw ValidationError("perfect-stranger matching supports at most " +
                          std::to_string(base.size()) + " rounds with " +
                          std::to_string(agents) + " agents");
  }
  std::vector<std::vector<std::vector<int>>> out;
  for (int t = 0; t < rounds; ++t) out.push_back(base[t % base.size()]);
  return out;
}

Profile s_interior_profile(const Game& game, double eps) {
  if (!(eps > 0.005 && eps <= 1.0)) throw ValidationError("S generator needs eps in (0.005, 1]");
  const AnalysisSpace space = default_space(game);
  Profile p(game.strategy_counts()), best;
  double best_gap = -1.0;
  std::vector<double> pi;
  // Small games have coarse threshold steps; refine until one lands in the window.
  for (int m = default_grid_m(space); best_gap < 0.0; m = 2 * m - 1) {
    const ProductGrid grid = make_grid(space, m);
    if (grid.num_cells() > 8'000'000) {
      throw NumericalError("no grid profile of " + game.id() + " has its threshold just below " +
                           std::to_string(eps));
    }
    std::vector<int> parts(grid.num_factors());
    std::vector<std::span<const double>> views(grid.num_factors());
    for (int64_t c = 0; c < grid.num_cells(); ++c) {
      grid.decode(c, parts);
      for (int f = 0; f < grid.num_factors(); ++f) views[f] = grid.factor(f).center(parts[f]);
      space.fill_profile(views, p);
      const double r = membership_threshold(game, p);
      if (r < eps - 0.005 || r > eps - 0.002) continue;
      double gap = std::numeric_limits<double>::infinity();
      for (int i = 0; i < game.num_players(); ++i) {
        pi = expected_payoffs(game, i, p);
        gap = std::min(gap, payoff_gap(pi));
      }
      if (gap > best_gap) {
        best_gap = gap;
        best = p;
      }
    }
  }
  return best;
}

Profile model_profile(const Game& game, ModelKind model, double parameter) {
  if (model == ModelKind::kS) return s_interior_profile(game, parameter);
  FitOptions opts;
  if (model == ModelKind::kLogit) opts.logit.lambda_max = std::max(opts.logit.lambda_max, parameter);
  if (model == ModelKind::kLevelK) opts.tau_max = std::max(opts.tau_max, parameter);
  const CurvePredictor pred(game, model, opts);
  auto p = pred.at(parameter);
  if (!p) {
    throw NumericalError("no " + model_name(model) + " prediction for " + game.id() +
                         " at parameter " + std::to_string(parameter));
  }
  return *p;
}

std::vector<Observation> simulate_session(const Game& game, const std::vector<AgentSpec>& agents,
                                          const SessionSpec& spec) {
  const int n = game.num_players();
  const auto schedule = matching_schedule(game, static_cast<int>(agents.size()), spec.rounds,
                                          spec.protocol);
  // One profile per distinct (model, parameter).
  std::vector<Profile> plays(agents.size());
  for (size_t a = 0; a < agents.size(); ++a) {
    if (!(agents[a].belief_concentration > 0.0)) {
      throw ValidationError("belief concentration must be positive");
    }
    size_t same = a;
    for (size_t b = 0; b < a; ++b) {
      if (agents[b].model == agents[a].model && agents[b].parameter == agents[a].parameter) {
        same = b;
        break;
      }
    }
    plays[a] = same == a ? model_profile(game, agents[a].model, agents[a].parameter) : plays[same];
  }
  std::mt19937_64 rng(spec.seed);
  std::vector<Observation> out;
  for (int t = 0; t < spec.rounds; ++t) {
    std::vector<std::pair<int, int>> seats;  // (agent, role), in agent order
    for (const auto& g : schedule[t]) {
      for (int pos = 0; pos < n; ++pos) seats.push_back({g[pos], pos});
    }
    std::sort(seats.begin(), seats.end());
    for (const auto& [a, role] : seats) {
      const Profile& p = plays[a];
      Observation o;
      o.game = game.id();
      o.session = spec.session;
      o.subject = spec.session + "-" + std::to_string(a + 1);
      o.round = t + 1;
      o.role = role;
      o.choice = sample_index(rng, p[role]);
      if (spec.beliefs && n > 1) {
        const auto truth = p[(role + 1) % n];
        std::vector<double> alpha(truth.size());
        for (size_t k = 0; k < truth.size(); ++k) {
          alpha[k] = agents[a].belief_concentration * (0.98 * truth[k] + 0.02 / truth.size());
        }
        o.belief = dirichlet(rng, alpha);
      }
      out.push_back(std::move(o));
    }
  }
  return out;
}

}  // namespace sequil
