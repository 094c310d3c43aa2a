#pragma once

#include <random>
#include <string>
#include <vector>

#include "sequil/game.h"
#include "sequil/game_io.h"
#include "sequil/observations.h"

namespace sequil::fixture {

inline const Game& bundled(const std::string& id) {
  static const auto all = load_game_dir(bundled_game_dir());
  return all.at(id);
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, int k) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(k);
  double s = 0.0;
  for (double& x : v) s += (x = e(rng));
  for (double& x : v) x /= s;
  return v;
}

inline Profile random_profile(std::mt19937_64& rng, const std::vector<int>& counts) {
  std::vector<std::vector<double>> v;
  for (int k : counts) v.push_back(random_simplex(rng, k));
  return Profile::from_vectors(v);
}

inline Game random_game(std::mt19937_64& rng, std::vector<int> counts, int lo = 0,
                        int hi = 150) {
  std::uniform_int_distribution<int> pay(lo, hi);
  int size = 1;
  for (int k : counts) size *= k;
  std::vector<std::vector<double>> t(counts.size(), std::vector<double>(size));
  for (auto& v : t)
    for (double& x : v) x = pay(rng);
  return Game("random", std::move(counts), std::move(t));
}

// Observation rows of one symmetric-game session with the given choice
// counts.
inline std::vector<Observation> rows_from_counts(const std::string& game,
                                                 const std::string& session,
                                                 const std::vector<int>& counts) {
  std::vector<Observation> rows;
  int subject = 0;
  for (size_t k = 0; k < counts.size(); ++k)
    for (int c = 0; c < counts[k]; ++c) {
      Observation o;
      o.game = game;
      o.session = session;
      o.subject = session + "-" + std::to_string(++subject);
      o.round = 1;
      o.choice = static_cast<int>(k);
      rows.push_back(o);
    }
  return rows;
}

}  // namespace sequil::fixture
