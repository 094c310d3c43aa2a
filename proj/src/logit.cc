#include "sequil/logit.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sequil/error.h"
#include "sequil/solver.h"

namespace sequil {
namespace {

constexpr double kResidualTol = 1e-10;

// Unknowns are log-odds against each block's last strategy. Symmetric games
// use one block shared by every player.
struct LogOdds {
  const Game& game;
  bool shared;

  int blocks() const { return shared ? 1 : game.num_players(); }
  int size() const {
    int s = 0;
    for (int b = 0; b < blocks(); ++b) s += game.num_strategies(b) - 1;
    return s;
  }
  void to_profile(const Eigen::VectorXd& z, Profile& out) const {
    int off = 0;
    for (int b = 0; b < blocks(); ++b) {
      const int k = game.num_strategies(b);
      double top = 0.0;
      for (int j = 0; j < k - 1; ++j) top = std::max(top, z[off + j]);
      auto s = out[b];
      double sum = 0.0;
      for (int j = 0; j < k; ++j) {
        s[j] = std::exp((j < k - 1 ? z[off + j] : 0.0) - top);
        sum += s[j];
      }
      for (double& v : s) v /= sum;
      off += k - 1;
    }
    if (shared) {
      for (int i = 1; i < game.num_players(); ++i) {
        std::copy(out[0].begin(), out[0].end(), out[i].begin());
      }
    }
  }
  Eigen::VectorXd from_profile(const Profile& p) const {
    Eigen::VectorXd z(size());
    int off = 0;
    for (int b = 0; b < blocks(); ++b) {
      const int k = game.num_strategies(b);
      const double last = std::log(std::max(p[b][k - 1], 1e-300));
      for (int j = 0; j < k - 1; ++j) {
        z[off + j] = std::log(std::max(p[b][j], 1e-300)) - last;
      }
      off += k - 1;
    }
    return z;
  }
};

double payoff_range(const Game& game) {
  return std::max(1.0, game.max_payoff() - game.min_payoff());
}

bool newton_at(const Game& game, const LogOdds& lo, double lambda,
               Eigen::VectorXd& z) {
  Profile work(game.strategy_counts());
  std::vector<double> pi;
  VectorFn f = [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    lo.to_profile(x, work);
    int off = 0;
    for (int b = 0; b < lo.blocks(); ++b) {
      pi = expected_payoffs(game, b, work);
      const int k = game.num_strategies(b);
      for (int j = 0; j < k - 1; ++j) {
        out[off + j] = x[off + j] - lambda * (pi[j] - pi[k - 1]);
      }
      off += k - 1;
    }
  };
  NewtonOptions opts;
  opts.tol = 1e-12 * (1.0 + lambda * payoff_range(game));
  opts.max_iter = 80;
  if (!newton_solve(f, lo.size(), z, opts)) return false;
  lo.to_profile(z, work);
  return logit_residual(game, work, lambda) <= kResidualTol;
}

}  // namespace

std::vector<double> logit_response(std::span<const double> pi, double lambda) {
  if (lambda < 0.0) throw ValidationError("lambda must be non-negative");
  const double top = *std::max_element(pi.begin(), pi.end());
  std::vector<double> out(pi.size());
  double sum = 0.0;
  for (size_t k = 0; k < pi.size(); ++k) {
    out[k] = std::exp(lambda * (pi[k] - top));
    sum += out[k];
  }
  for (double& v : out) v /= sum;
  return out;
}

double logit_residual(const Game& game, const Profile& sigma, double lambda) {
  double r = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    const auto pi = expected_payoffs(game, i, sigma);
    const auto l = logit_response(pi, lambda);
    for (size_t k = 0; k < l.size(); ++k) r = std::max(r, std::abs(sigma[i][k] - l[k]));
  }
  return r;
}

Profile solve_logit_qre(const Game& game, double lambda, const Profile& start,
                        double start_lambda) {
  LogOdds lo{game, game.symmetric()};
  Profile out(game.strategy_counts());
  if (lambda == 0.0) return Profile::uniform(game.strategy_counts());
  Eigen::VectorXd z = lo.from_profile(start);
  double at = start_lambda;
  double step = lambda - at;
  int halvings = 0;
  while (at != lambda) {
    const double target = std::abs(step) >= std::abs(lambda - at) ? lambda : at + step;
    // Log-odds scale roughly with lambda; fall back to the plain warm start.
    Eigen::VectorXd scaled = at > 0.0 ? Eigen::VectorXd(z * (target / at)) : z;
    Eigen::VectorXd plain = z;
    bool ok = newton_at(game, lo, target, scaled);
    if (ok) {
      z = scaled;
    } else if (newton_at(game, lo, target, plain)) {
      z = plain;
      ok = true;
    }
    if (ok) {
      at = target;
      step *= 1.5;
      continue;
    }
    step *= 0.5;
    if (++halvings > 60) {
      std::ostringstream msg;
      msg << "logit continuation stalled at lambda=" << at;
      throw NumericalError(msg.str());
    }
  }
  lo.to_profile(z, out);
  return out;
}

ModelCurve logit_qre_curve(const Game& game, const LogitOptions& opts) {
  if (!(opts.lambda_max > 0.0) || opts.steps < 1) {
    throw ValidationError("logit curve needs lambda_max > 0 and steps >= 1");
  }
  ModelCurve curve;
  curve.model = ModelKind::kLogit;
  curve.game_id = game.id();
  Profile sigma = Profile::uniform(game.strategy_counts());
  curve.samples.push_back({0.0, sigma, logit_residual(game, sigma, 0.0)});

  std::vector<double> grid;
  const double first = opts.lambda_max * opts.first_fraction;
  const double ratio = opts.steps > 1 ? std::pow(opts.lambda_max / first, 1.0 / (opts.steps - 1)) : 1.0;
  for (int s = 0; s < opts.steps; ++s) {
    grid.push_back(s + 1 == opts.steps ? opts.lambda_max : first * std::pow(ratio, s));
  }
  try {
    sigma = solve_logit_qre(game, grid[0], sigma, 0.0);
  } catch (const NumericalError& e) {
    curve.diagnostic = e.what();
    return curve;
  }
  curve.samples.push_back({grid[0], sigma, logit_residual(game, sigma, grid[0])});
  if (grid.size() == 1) return curve;

  // Path following in u = (w, mu): w = log-odds / (lambda R), mu = log lambda,
  // so both stay of order one along the whole branch. Folds in lambda are
  // passed; every crossing of a sample lambda is recorded in path order.
  const LogOdds lo{game, game.symmetric()};
  const int n = lo.size();
  const double range = payoff_range(game);
  Profile work(game.strategy_counts());
  std::vector<double> pi;
  VectorFn branch = [&](const Eigen::VectorXd& u, Eigen::VectorXd& out) {
    const double lambda = std::exp(u[n]);
    lo.to_profile(u.head(n) * (lambda * range), work);
    int off = 0;
    for (int b = 0; b < lo.blocks(); ++b) {
      pi = expected_payoffs(game, b, work);
      const int k = game.num_strategies(b);
      for (int j = 0; j < k - 1; ++j) out[off + j] = u[off + j] - (pi[j] - pi[k - 1]) / range;
      off += k - 1;
    }
  };
  auto tangent = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& prev) {
    const Eigen::MatrixXd jac = numeric_jacobian(branch, n, u, 1e-7);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(jac.transpose());
    Eigen::VectorXd t = qr.householderQ() * Eigen::VectorXd::Unit(n + 1, n);
    t.normalize();
    if (t.dot(prev) < 0.0) t = -t;
    return t;
  };
  // Fixed-lambda solve at a crossing, from the interpolated point.
  std::vector<CurveSample> pending;
  auto record = [&](double lambda, const Eigen::VectorXd& guess) {
    Eigen::VectorXd z = guess.head(n) * (lambda * range);
    if (!newton_at(game, lo, lambda, z)) return false;
    Profile p(game.strategy_counts());
    lo.to_profile(z, p);
    pending.push_back({lambda, p, logit_residual(game, p, lambda)});
    return true;
  };

  Eigen::VectorXd u(n + 1);
  u.head(n) = lo.from_profile(sigma) / (grid[0] * range);
  u[n] = std::log(grid[0]);
  Eigen::VectorXd forward = Eigen::VectorXd::Unit(n + 1, n);
  Eigen::VectorXd t = tangent(u, forward);
  const double mu_end = std::log(opts.lambda_max);
  double h = 0.02;
  constexpr double kMaxStep = 0.1;
  constexpr int kMaxSteps = 200000;
  int steps = 0;
  while (true) {
    if (++steps > kMaxSteps || h < 1e-12) {
      std::ostringstream msg;
      msg << "logit path following stopped at lambda=" << std::exp(u[n]);
      curve.diagnostic = msg.str();
      break;
    }
    const Eigen::VectorXd pred = u + h * t;
    Eigen::VectorXd next = pred;
    VectorFn augmented = [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
      Eigen::VectorXd head(n);
      branch(x, head);
      out.head(n) = head;
      out[n] = t.dot(x - pred);
    };
    NewtonOptions nopts;
    nopts.tol = 1e-12;
    nopts.max_iter = 12;
    bool ok = newton_solve(augmented, n + 1, next, nopts) && (next - pred).norm() <= 0.5 * h;
    Eigen::VectorXd t_next;
    if (ok) {
      t_next = tangent(next, t);
      ok = t_next.dot(t) > 0.95;
    }
    if (!ok) {
      h *= 0.5;
      continue;
    }
    // Sample lambdas crossed by this step, in the order of travel.
    const double a = u[n], b = next[n];
    std::vector<double> crossed;
    for (double lambda : grid) {
      const double mu = std::log(lambda);
      if ((a < mu && mu <= b) || (b <= mu && mu < a)) crossed.push_back(lambda);
    }
    if (b < a) std::reverse(crossed.begin(), crossed.end());
    bool failed = false;
    pending.clear();
    for (double lambda : crossed) {
      const double f = (std::log(lambda) - a) / (b - a);
      if (!record(lambda, u + f * (next - u))) {
        failed = true;
        break;
      }
    }
    if (failed) {
      h *= 0.5;
      continue;
    }
    curve.samples.insert(curve.samples.end(), pending.begin(), pending.end());
    u = next;
    t = t_next;
    if (u[n] >= mu_end) break;
    h = std::min(kMaxStep, h * 1.5);
  }
  return curve;
}

}  // namespace sequil
