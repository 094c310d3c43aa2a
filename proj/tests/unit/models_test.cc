#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "helpers.h"
#include "sequil/error.h"
#include "sequil/level_k.h"
#include "sequil/logit.h"
#include "sequil/models.h"
#include "sequil/restricted.h"

using namespace sequil;
using sequil::fixture::bundled;

namespace {

double centroid_distance(const Profile& p) {
  double d = 0.0;
  for (int i = 0; i < p.num_players(); ++i)
    for (double v : p[i]) d = std::max(d, std::abs(v - 1.0 / p.size(i)));
  return d;
}

// sigma lies in the permutohedron of w: sorted partial sums are dominated.
bool majorized_by(std::vector<double> sigma, std::vector<double> w, double tol = 1e-9) {
  std::sort(sigma.rbegin(), sigma.rend());
  std::sort(w.rbegin(), w.rend());
  double a = 0.0, b = 0.0;
  for (size_t k = 0; k + 1 < w.size(); ++k) {
    a += sigma[k];
    b += w[k];
    if (a > b + tol) return false;
  }
  return true;
}

}  // namespace

TEST(ModelNames, RoundTrip) {
  for (ModelKind m : {ModelKind::kS, ModelKind::kLogit, ModelKind::kLevelK, ModelKind::kEpsPerfect,
                      ModelKind::kEpsProper})
    EXPECT_EQ(parse_model(model_name(m)), m);
  EXPECT_THROW(parse_model("probit"), ValidationError);
}

TEST(LogitResponse, ClosedForms) {
  const std::vector<double> pi = {1, 1, 2};
  const auto u = logit_response(pi, 0.0);
  for (double v : u) EXPECT_DOUBLE_EQ(v, 1.0 / 3);
  const auto l = logit_response(pi, std::log(2.0));
  EXPECT_NEAR(l[0], 0.25, 1e-15);
  EXPECT_NEAR(l[1], 0.25, 1e-15);
  EXPECT_NEAR(l[2], 0.5, 1e-15);
  const auto sharp = logit_response(std::vector<double>{0, 1, 0.5}, 100.0);
  EXPECT_GE(sharp[1], 1 - 1e-9);
  EXPECT_THROW(logit_response(pi, -1.0), ValidationError);
}

TEST(LogitResponse, ShiftInvariantAndOrdered) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 100);
  for (int t = 0; t < 100; ++t) {
    const std::vector<double> pi = {u(rng), u(rng), u(rng)};
    std::vector<double> shifted = pi;
    for (double& v : shifted) v += 1234.5;
    const double lambda = 0.01 + u(rng) / 50;
    const auto a = logit_response(pi, lambda), b = logit_response(shifted, lambda);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
    EXPECT_EQ(std::max_element(a.begin(), a.end()) - a.begin(),
              std::max_element(pi.begin(), pi.end()) - pi.begin());
  }
}

TEST(LogitCurve, ResidualsAndStart) {
  for (const char* id : {"g1", "g2", "g7", "G1", "G3", "chain_store", "table3"}) {
    const Game& g = bundled(id);
    const ModelCurve c = logit_qre_curve(g);
    EXPECT_TRUE(c.diagnostic.empty()) << id << ": " << c.diagnostic;
    ASSERT_GE(c.samples.size(), 101u);
    EXPECT_EQ(c.samples[0].parameter, 0.0);
    EXPECT_LE(centroid_distance(c.samples[0].profile), 1e-15);
    EXPECT_EQ(c.samples.back().parameter, 2.0);
    for (const CurveSample& s : c.samples) EXPECT_LE(logit_residual(g, s.profile, s.parameter), 1e-10);
  }
}

TEST(LogitCurve, G3StaysAtCentroid) {
  const ModelCurve c = logit_qre_curve(bundled("g3"));
  for (const CurveSample& s : c.samples) EXPECT_LE(centroid_distance(s.profile), 1e-9);
}

TEST(LogitCurve, G1ApproachesR) {
  LogitOptions o;
  o.lambda_max = 2000.0;
  const ModelCurve c = logit_qre_curve(bundled("g1"), o);
  EXPECT_GE(c.samples.back().profile[0][0], 0.99);
}

TEST(LogitCurve, SolveMatchesSamples) {
  const Game& g = bundled("g8");
  const ModelCurve c = logit_qre_curve(g);
  const CurveSample& a = c.samples[40];
  const CurveSample& b = c.samples[60];
  const Profile p = solve_logit_qre(g, b.parameter, a.profile, a.parameter);
  for (size_t k = 0; k < p.data().size(); ++k) EXPECT_NEAR(p.data()[k], b.profile.data()[k], 1e-9);
}

TEST(LevelK, Table3ClosedForm) {
  const Game& g = bundled("table3");
  const LevelHierarchy h = level_hierarchy(g);
  for (double tau : {0.0, 0.3, 1.0, 2.5, 7.0}) {
    const double want = (1 + std::exp(-tau) - std::exp(-2 * tau)) / 2;
    EXPECT_NEAR(level_k_mixture(h, tau)[0][0], want, 1e-12) << tau;
  }
}

TEST(LevelK, G2AndG3Levels) {
  for (const char* id : {"G2", "G3"}) {
    const LevelHierarchy h = level_hierarchy(bundled(id));
    EXPECT_EQ(std::vector<double>(h.level(1)[0].begin(), h.level(1)[0].end()),
              (std::vector<double>{0, 0, 1}));
    for (int k = 2; k <= 30; ++k)
      EXPECT_EQ(std::vector<double>(h.level(k)[0].begin(), h.level(k)[0].end()),
                (std::vector<double>{0, 1, 0}));
  }
}

TEST(LevelK, TiesMixUniformly) {
  // R and B tie against the uniform level 0.
  const LevelHierarchy h =
      level_hierarchy(Game::symmetric_from_first("tie", 2, 3, {1, 1, 0, 1, 1, 0, 0, 0, 0}));
  EXPECT_DOUBLE_EQ(h.level(1)[0][0], 0.5);
  EXPECT_DOUBLE_EQ(h.level(1)[0][1], 0.5);
}

TEST(LevelK, CycleIsDetected) {
  const LevelHierarchy h = level_hierarchy(bundled("g1"), 5);
  EXPECT_LE(h.period, 9);
  for (int k = h.cycle_start + h.period; k < 40; ++k)
    EXPECT_EQ(h.level(k).data(), h.level(k - h.period).data());
}

TEST(LevelK, PoissonWeights) {
  const double tau = 3.0;
  const int depth = poisson_depth(tau);
  const auto w = poisson_weights(tau, depth);
  EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
  EXPECT_NEAR(w[2], std::exp(-3.0) * 9 / 2, 1e-15);
  const Profile zero = level_k_mixture(bundled("g5"), 0.0);
  EXPECT_LE(centroid_distance(zero), 1e-15);
}

TEST(LevelK, Curve) {
  const ModelCurve c = level_k_curve(bundled("g4"), 10.0, 50);
  ASSERT_EQ(c.samples.size(), 51u);
  EXPECT_DOUBLE_EQ(c.samples[10].parameter, 2.0);
  EXPECT_EQ(nearest_sample(c, 2.04), 10);
}

TEST(Restricted, PerfectVertices) {
  const RestrictedSimplex rs = restricted_vertices(3, 0.5, RestrictedKind::kPerfect);
  ASSERT_EQ(rs.vertices.size(), 3u);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(rs.vertices[j][k], j == k ? 0.5 : 0.25);
}

TEST(Restricted, ProperVertices) {
  const RestrictedSimplex rs = restricted_vertices(3, 2.0 / 3, RestrictedKind::kProper);
  ASSERT_EQ(rs.vertices.size(), 6u);
  for (const auto& v : rs.vertices) {
    std::vector<double> s = v;
    std::sort(s.rbegin(), s.rend());
    EXPECT_NEAR(s[0], 9.0 / 19, 1e-15);
    EXPECT_NEAR(s[1], 6.0 / 19, 1e-15);
    EXPECT_NEAR(s[2], 4.0 / 19, 1e-15);
  }
  for (const auto& v : restricted_vertices(3, 1.0, RestrictedKind::kProper).vertices)
    for (double x : v) EXPECT_DOUBLE_EQ(x, 1.0 / 3);
}

TEST(Restricted, BetterReply) {
  const Game& cs = bundled("chain_store");
  const RestrictedSimplex rs = restricted_vertices(2, 0.2, RestrictedKind::kPerfect);
  const Profile against = Profile::from_vectors({{0.5, 0.5}, {0.5, 0.5}});
  const Face f = better_reply(cs, 1, against, rs);
  ASSERT_EQ(f.vertex_ids.size(), 1u);
  EXPECT_LT(f.barycenter[0], f.barycenter[1]);

  const RestrictedSimplex one = restricted_vertices(3, 1.0, RestrictedKind::kPerfect);
  const Face c = better_reply(bundled("g1"), 0, Profile::uniform({3, 3}), one);
  for (double x : c.barycenter) EXPECT_NEAR(x, 1.0 / 3, 1e-15);
}

TEST(EpsModels, CurvesStartAtCentroidAndAreFixedPoints) {
  for (const char* id : {"g1", "g4", "g8", "chain_store", "G1"}) {
    const Game& g = bundled(id);
    for (RestrictedKind kind : {RestrictedKind::kPerfect, RestrictedKind::kProper}) {
      const ModelCurve c = eps_model_curve(g, kind, 25);
      ASSERT_FALSE(c.samples.empty());
      EXPECT_EQ(c.samples[0].parameter, 1.0);
      EXPECT_EQ(c.samples[0].profile.data(), Profile::uniform(g.strategy_counts()).data());
      for (const CurveSample& s : c.samples)
        EXPECT_LE(better_reply_residual(g, s.profile, kind, s.parameter), 1e-9) << id;
    }
  }
}

TEST(EpsModels, G1ProperCurveInsidePermutohedra) {
  const Game& g = bundled("G1");
  const ModelCurve c = eps_model_curve(g, RestrictedKind::kProper, 100);
  for (double eps : {2.0 / 3, 2.0 / 5, 1.0 / 5}) {
    const int j = nearest_sample(c, eps);
    const double e = c.samples[j].parameter;
    const auto w = restricted_vertices(3, e, RestrictedKind::kProper).weights;
    const auto s = c.samples[j].profile[0];
    EXPECT_TRUE(majorized_by({s.begin(), s.end()}, w)) << eps;
  }
}

TEST(EpsModels, SmallEpsNearNash) {
  const Game& g = bundled("chain_store");
  const ModelCurve c = eps_model_curve(g, RestrictedKind::kPerfect, 100, 0.001);
  const Profile& end = c.samples.back().profile;
  // The perfect equilibrium (E, A).
  EXPECT_GT(end[0][1], 0.99);
  EXPECT_GT(end[1][1], 0.99);
}
