#pragma once

// Finite normal-form games with up to three players, mixed profiles and
// expected payoffs.

#include <span>
#include <string>
#include <vector>

namespace sequil {

inline constexpr double kTieTol = 1e-9;
inline constexpr int kMaxPlayers = 3;
inline constexpr int kMaxStrategies = 5;

using PureProfile = std::vector<int>;

// Payoff tensors are stored row-major over the pure profile
// (x_0, ..., x_{n-1}); x_0 is the slowest index.
//
// Symmetric games: player i's payoff is player 0's payoff with the profile
// rotated so that i's own action comes first:
//   Pi_i(x) = Pi_0(x_i, x_{i+1}, ..., x_{n-1}, x_0, ..., x_{i-1}).
// For two players this is the transpose. For three players the rotation is
// only well defined when Pi_0(a, b, c) = Pi_0(a, c, b), which is checked.
class Game {
 public:
  Game() = default;
  Game(std::string id, std::vector<int> strategy_counts,
       std::vector<std::vector<double>> payoffs, bool symmetric = false,
       std::vector<std::vector<std::string>> labels = {});

  // Builds a symmetric game from player 0's tensor.
  static Game symmetric_from_first(std::string id, int n, int k,
                                   std::vector<double> first,
                                   std::vector<std::string> labels = {});

  const std::string& id() const { return id_; }
  int num_players() const { return static_cast<int>(counts_.size()); }
  int num_strategies(int player) const { return counts_[player]; }
  const std::vector<int>& strategy_counts() const { return counts_; }
  bool symmetric() const { return symmetric_; }
  int num_profiles() const { return num_profiles_; }

  const std::vector<double>& tensor(int player) const {
    return payoffs_[player];
  }
  double payoff(int player, const PureProfile& x) const;
  int flat_index(const PureProfile& x) const;
  PureProfile unflatten(int flat) const;

  const std::vector<std::string>& labels(int player) const {
    return labels_[player];
  }
  const std::string& label(int player, int k) const {
    return labels_[player][k];
  }
  int label_index(int player, const std::string& label) const;

  double min_payoff() const;
  double max_payoff() const;

  const std::string& provenance() const { return provenance_; }
  void set_provenance(std::string p) { provenance_ = std::move(p); }

 private:
  void validate() const;

  std::string id_;
  std::vector<int> counts_;
  std::vector<std::vector<double>> payoffs_;
  std::vector<std::vector<std::string>> labels_;
  bool symmetric_ = false;
  int num_profiles_ = 0;
  std::string provenance_;
};

// One probability vector per player, stored contiguously.
class Profile {
 public:
  Profile() = default;
  explicit Profile(const std::vector<int>& counts);
  static Profile uniform(const std::vector<int>& counts);
  static Profile from_vectors(const std::vector<std::vector<double>>& v);
  // Every player uses the same vector (symmetric mode).
  static Profile replicate(int n, std::span<const double> sigma);

  int num_players() const { return static_cast<int>(counts_.size()); }
  int size(int player) const { return counts_[player]; }
  const std::vector<int>& counts() const { return counts_; }

  std::span<double> operator[](int player) {
    return {data_.data() + offsets_[player],
            static_cast<size_t>(counts_[player])};
  }
  std::span<const double> operator[](int player) const {
    return {data_.data() + offsets_[player],
            static_cast<size_t>(counts_[player])};
  }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }
  std::vector<std::vector<double>> to_vectors() const;

  // Throws ValidationError unless every factor is a probability vector.
  void validate(double tol = 1e-12) const;

 private:
  std::vector<int> counts_;
  std::vector<int> offsets_;
  std::vector<double> data_;
};

bool is_simplex_vector(std::span<const double> v, double tol = 1e-12);
std::vector<double> centroid(int k);

// pi_ik = sum over opponent profiles of prod_j sigma_j(x_j) Pi_i(k, x_-i).
// Entries of `against` for player `who` are ignored.
void expected_payoffs(const Game& game, int who, const Profile& against,
                      std::span<double> out);
std::vector<double> expected_payoffs(const Game& game, int who,
                                     const Profile& against);

// Symmetric mode: every opponent plays `omega`. Requires a symmetric game.
std::vector<double> expected_payoffs_symmetric(const Game& game,
                                               std::span<const double> omega);

// Indices k with pi_k >= max(pi) - tie_tol, ascending.
std::vector<int> best_reply_set(std::span<const double> pi,
                                double tie_tol = kTieTol);
unsigned best_reply_mask(std::span<const double> pi, double tie_tol = kTieTol);

// Pure profiles where no player has a strictly profitable pure deviation.
std::vector<PureProfile> pure_nash(const Game& game, double tol = kTieTol);

}  // namespace sequil
