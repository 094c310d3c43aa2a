#include "sequil/game.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sequil/error.h"

namespace sequil {
namespace {

std::vector<std::string> default_labels(int k) {
  static const char* kNames[] = {"R", "B", "Y", "G", "P"};
  std::vector<std::string> out;
  for (int i = 0; i < k; ++i) {
    out.push_back(k <= 5 ? kNames[i] : std::to_string(i));
  }
  return out;
}

// Player 0's profile that defines player i's payoff at x.
PureProfile rotate(const PureProfile& x, int i) {
  const int n = static_cast<int>(x.size());
  PureProfile r(n);
  for (int j = 0; j < n; ++j) r[j] = x[(i + j) % n];
  return r;
}

}  // namespace

Game::Game(std::string id, std::vector<int> strategy_counts,
           std::vector<std::vector<double>> payoffs, bool symmetric,
           std::vector<std::vector<std::string>> labels)
    : id_(std::move(id)),
      counts_(std::move(strategy_counts)),
      payoffs_(std::move(payoffs)),
      labels_(std::move(labels)),
      symmetric_(symmetric) {
  const int n = num_players();
  if (n < 2 || n > kMaxPlayers) {
    throw ValidationError("game '" + id_ + "': player count must be 2.." +
                          std::to_string(kMaxPlayers));
  }
  num_profiles_ = 1;
  for (int k : counts_) {
    if (k < 2 || k > kMaxStrategies) {
      throw ValidationError("game '" + id_ + "': strategy counts must be 2.." +
                            std::to_string(kMaxStrategies));
    }
    num_profiles_ *= k;
  }
  if (labels_.empty()) {
    for (int k : counts_) labels_.push_back(default_labels(k));
  }
  validate();
}

Game Game::symmetric_from_first(std::string id, int n, int k,
                                std::vector<double> first,
                                std::vector<std::string> labels) {
  std::vector<int> counts(n, k);
  int total = 1;
  for (int i = 0; i < n; ++i) total *= k;
  if (static_cast<int>(first.size()) != total) {
    throw ValidationError("game '" + id + "': symmetric tensor has " +
                          std::to_string(first.size()) + " entries, expected " +
                          std::to_string(total));
  }
  // Build a throwaway game to reuse index arithmetic.
  std::vector<std::vector<double>> tensors(n, first);
  Game shape(id, counts, tensors, false);
  for (int i = 1; i < n; ++i) {
    for (int f = 0; f < total; ++f) {
      PureProfile x = shape.unflatten(f);
      tensors[i][f] = first[shape.flat_index(rotate(x, i))];
    }
  }
  std::vector<std::vector<std::string>> all_labels;
  if (!labels.empty()) all_labels.assign(n, labels);
  return Game(std::move(id), counts, std::move(tensors), true,
              std::move(all_labels));
}

void Game::validate() const {
  const int n = num_players();
  if (static_cast<int>(payoffs_.size()) != n) {
    throw ValidationError("game '" + id_ + "': expected " + std::to_string(n) +
                          " payoff tensors, got " +
                          std::to_string(payoffs_.size()));
  }
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(payoffs_[i].size()) != num_profiles_) {
      throw ValidationError("game '" + id_ + "': payoff tensor of player " +
                            std::to_string(i) + " has " +
                            std::to_string(payoffs_[i].size()) +
                            " entries, expected " +
                            std::to_string(num_profiles_));
    }
    for (double v : payoffs_[i]) {
      if (!std::isfinite(v)) {
        throw ValidationError("game '" + id_ + "': non-finite payoff");
      }
    }
  }
  if (static_cast<int>(labels_.size()) != n) {
    throw ValidationError("game '" + id_ + "': label list per player required");
  }
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(labels_[i].size()) != counts_[i]) {
      throw ValidationError("game '" + id_ + "': player " + std::to_string(i) +
                            " needs " + std::to_string(counts_[i]) + " labels");
    }
  }
  if (!symmetric_) return;
  for (int k : counts_) {
    if (k != counts_[0]) {
      throw ValidationError("game '" + id_ +
                            "': symmetric game needs equal strategy counts");
    }
  }
  for (int f = 0; f < num_profiles_; ++f) {
    PureProfile x = unflatten(f);
    if (n == 3) {
      PureProfile swapped = {x[0], x[2], x[1]};
      if (payoffs_[0][f] != payoffs_[0][flat_index(swapped)]) {
        throw ValidationError(
            "game '" + id_ +
            "': symmetric 3-player payoffs must not depend on which opponent "
            "plays which action");
      }
    }
    for (int i = 1; i < n; ++i) {
      if (payoffs_[i][f] != payoffs_[0][flat_index(rotate(x, i))]) {
        throw ValidationError("game '" + id_ + "': player " +
                              std::to_string(i) +
                              " payoffs are not a role permutation of player 0");
      }
    }
  }
}

double Game::payoff(int player, const PureProfile& x) const {
  return payoffs_[player][flat_index(x)];
}

int Game::flat_index(const PureProfile& x) const {
  int f = 0;
  for (int i = 0; i < num_players(); ++i) f = f * counts_[i] + x[i];
  return f;
}

PureProfile Game::unflatten(int flat) const {
  PureProfile x(num_players());
  for (int i = num_players() - 1; i >= 0; --i) {
    x[i] = flat % counts_[i];
    flat /= counts_[i];
  }
  return x;
}

int Game::label_index(int player, const std::string& label) const {
  const auto& l = labels_[player];
  auto it = std::find(l.begin(), l.end(), label);
  return it == l.end() ? -1 : static_cast<int>(it - l.begin());
}

double Game::min_payoff() const {
  double m = payoffs_[0][0];
  for (const auto& t : payoffs_) m = std::min(m, *std::min_element(t.begin(), t.end()));
  return m;
}

double Game::max_payoff() const {
  double m = payoffs_[0][0];
  for (const auto& t : payoffs_) m = std::max(m, *std::max_element(t.begin(), t.end()));
  return m;
}

Profile::Profile(const std::vector<int>& counts) : counts_(counts) {
  int off = 0;
  for (int k : counts_) {
    offsets_.push_back(off);
    off += k;
  }
  data_.assign(off, 0.0);
}

Profile Profile::uniform(const std::vector<int>& counts) {
  Profile p(counts);
  for (int i = 0; i < p.num_players(); ++i) {
    for (double& v : p[i]) v = 1.0 / counts[i];
  }
  return p;
}

Profile Profile::from_vectors(const std::vector<std::vector<double>>& v) {
  std::vector<int> counts;
  for (const auto& f : v) counts.push_back(static_cast<int>(f.size()));
  Profile p(counts);
  for (int i = 0; i < p.num_players(); ++i) {
    std::copy(v[i].begin(), v[i].end(), p[i].begin());
  }
  return p;
}

Profile Profile::replicate(int n, std::span<const double> sigma) {
  Profile p(std::vector<int>(n, static_cast<int>(sigma.size())));
  for (int i = 0; i < n; ++i) std::copy(sigma.begin(), sigma.end(), p[i].begin());
  return p;
}

std::vector<std::vector<double>> Profile::to_vectors() const {
  std::vector<std::vector<double>> out;
  for (int i = 0; i < num_players(); ++i) {
    auto f = (*this)[i];
    out.emplace_back(f.begin(), f.end());
  }
  return out;
}

void Profile::validate(double tol) const {
  for (int i = 0; i < num_players(); ++i) {
    if (!is_simplex_vector((*this)[i], tol)) {
      throw ValidationError("profile factor " + std::to_string(i) +
                            " is not a probability vector");
    }
  }
}

bool is_simplex_vector(std::span<const double> v, double tol) {
  double s = 0.0;
  for (double x : v) {
    if (!std::isfinite(x) || x < -tol) return false;
    s += x;
  }
  return std::abs(s - 1.0) <= std::max(tol, 1e-15 * v.size());
}

std::vector<double> centroid(int k) { return std::vector<double>(k, 1.0 / k); }

void expected_payoffs(const Game& game, int who, const Profile& against,
                      std::span<double> out) {
  const int n = game.num_players();
  if (against.num_players() != n) {
    throw ValidationError("expected_payoffs: profile has " +
                          std::to_string(against.num_players()) +
                          " factors, game has " + std::to_string(n) +
                          " players");
  }
  for (int j = 0; j < n; ++j) {
    if (against.size(j) != game.num_strategies(j)) {
      throw ValidationError("expected_payoffs: factor " + std::to_string(j) +
                            " has wrong length");
    }
  }
  if (static_cast<int>(out.size()) != game.num_strategies(who)) {
    throw ValidationError("expected_payoffs: output has wrong length");
  }
  std::fill(out.begin(), out.end(), 0.0);
  const auto& counts = game.strategy_counts();
  const auto& t = game.tensor(who);
  int x[kMaxPlayers] = {0, 0, 0};
  for (int f = 0; f < game.num_profiles(); ++f) {
    double w = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j != who) w *= against[j][x[j]];
    }
    out[x[who]] += w * t[f];
    for (int j = n - 1; j >= 0; --j) {
      if (++x[j] < counts[j]) break;
      x[j] = 0;
    }
  }
}

std::vector<double> expected_payoffs(const Game& game, int who,
                                     const Profile& against) {
  std::vector<double> out(game.num_strategies(who));
  expected_payoffs(game, who, against, out);
  return out;
}

std::vector<double> expected_payoffs_symmetric(const Game& game,
                                               std::span<const double> omega) {
  if (!game.symmetric()) {
    throw ValidationError("symmetric-mode payoffs requested for asymmetric game '" +
                          game.id() + "'");
  }
  return expected_payoffs(game, 0, Profile::replicate(game.num_players(), omega));
}

std::vector<int> best_reply_set(std::span<const double> pi, double tie_tol) {
  const double m = *std::max_element(pi.begin(), pi.end());
  std::vector<int> out;
  for (int k = 0; k < static_cast<int>(pi.size()); ++k) {
    if (pi[k] >= m - tie_tol) out.push_back(k);
  }
  return out;
}

unsigned best_reply_mask(std::span<const double> pi, double tie_tol) {
  const double m = *std::max_element(pi.begin(), pi.end());
  unsigned mask = 0;
  for (int k = 0; k < static_cast<int>(pi.size()); ++k) {
    if (pi[k] >= m - tie_tol) mask |= 1u << k;
  }
  return mask;
}

std::vector<PureProfile> pure_nash(const Game& game, double tol) {
  std::vector<PureProfile> out;
  for (int f = 0; f < game.num_profiles(); ++f) {
    PureProfile x = game.unflatten(f);
    bool stable = true;
    for (int i = 0; i < game.num_players() && stable; ++i) {
      const double here = game.tensor(i)[f];
      PureProfile y = x;
      for (int k = 0; k < game.num_strategies(i); ++k) {
        y[i] = k;
        if (game.payoff(i, y) > here + tol) {
          stable = false;
          break;
        }
      }
    }
    if (stable) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace sequil
