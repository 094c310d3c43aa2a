#pragma once

// Synthetic sessions: agents play their model's mixed strategy and state
// noisy beliefs about their opponents.

#include <cstdint>
#include <string>
#include <vector>

#include "sequil/game.h"
#include "sequil/models.h"
#include "sequil/observations.h"

namespace sequil {

struct AgentSpec {
  ModelKind model = ModelKind::kLogit;
  double parameter = 0.0;
  // Dirichlet concentration of stated beliefs around the model's belief.
  double belief_concentration = 50.0;
};

enum class Protocol {
  // Nobody meets the same opponent twice; fails when rounds exceed the
  // number of distinct matchings.
  kPerfectStranger,
  // Repeats the perfect-stranger schedule cyclically.
  kMinimalRepeat,
};

Protocol parse_protocol(const std::string& name);

struct SessionSpec {
  std::string session = "s1";
  int rounds = 15;
  Protocol protocol = Protocol::kPerfectStranger;
  uint64_t seed = 1;
  bool beliefs = true;
};

// groups[t] lists the matched groups of round t; each group names one
// agent per player position. Symmetric two-player games pair everyone
// with everyone; otherwise agent a keeps position a mod n.
std::vector<std::vector<std::vector<int>>> matching_schedule(const Game& game, int agents,
                                                             int rounds, Protocol protocol);

// Profile an agent of the given model plays. The S model uses
// s_interior_profile.
Profile model_profile(const Game& game, ModelKind model, double parameter);

// A grid profile of the game's default space inside S(eps - 0.002) but not
// inside S(eps - 0.005): its threshold lies in [eps - 0.005, eps - 0.002], with the
// largest payoff gap between best and other replies among such cells.
Profile s_interior_profile(const Game& game, double eps);

// Deterministic given the game, agents and spec.
std::vector<Observation> simulate_session(const Game& game, const std::vector<AgentSpec>& agents,
                                          const SessionSpec& spec);

// Draws from a Dirichlet distribution with the given parameters.
template <class Rng>
std::vector<double> dirichlet(Rng& rng, const std::vector<double>& alpha);

}  // namespace sequil

#include <random>

namespace sequil {

template <class Rng>
std::vector<double> dirichlet(Rng& rng, const std::vector<double>& alpha) {
  std::vector<double> out(alpha.size());
  double total = 0.0;
  for (size_t k = 0; k < alpha.size(); ++k) {
    std::gamma_distribution<double> g(alpha[k], 1.0);
    out[k] = g(rng);
    total += out[k];
  }
  for (double& v : out) v /= total;
  return out;
}

}  // namespace sequil
