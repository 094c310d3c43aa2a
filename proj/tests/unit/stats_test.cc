#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <random>
#include <set>

#include "sequil/stats.h"

using namespace sequil;

namespace {

double brute_force_ks(const std::vector<double>& a, const std::vector<double>& b) {
  std::set<double> xs(a.begin(), a.end());
  xs.insert(b.begin(), b.end());
  double d = 0.0;
  for (double x : xs) {
    const double fa = std::count_if(a.begin(), a.end(), [&](double v) { return v <= x; }) /
                      static_cast<double>(a.size());
    const double fb = std::count_if(b.begin(), b.end(), [&](double v) { return v <= x; }) /
                      static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

}  // namespace

TEST(ChiSquare, MatchesReferenceQuantiles) {
  for (double alpha : {0.01, 0.05}) {
    for (int dof = 1; dof <= 40; ++dof) {
      const boost::math::chi_squared_distribution<double> d(dof);
      const double want = boost::math::quantile(boost::math::complement(d, alpha));
      const double tol = dof <= 10 ? 1e-3 : 0.01 * want;
      EXPECT_NEAR(chi2_critical(dof, alpha), want, tol) << dof << " " << alpha;
    }
  }
  EXPECT_NEAR(chi2_critical(2), 9.2103, 1e-4);
}

TEST(Ks, Basics) {
  EXPECT_EQ(ks_d({1, 2, 3}, {4, 5, 6}), 1.0);
  EXPECT_EQ(ks_d({1, 2, 3}, {1, 2, 3}), 0.0);
  EXPECT_NEAR(ks_d({1, 2}, {1, 2}, {1, 3}, {3, 1}), 0.5, 1e-15);
}

TEST(Ks, MatchesBruteForce) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0, 1);
  std::uniform_int_distribution<int> small(0, 5);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> a(5 + t % 7), b(3 + t % 11);
    for (double& v : a) v = t % 2 ? n(rng) : small(rng);
    for (double& v : b) v = t % 2 ? n(rng) + 0.3 : small(rng);
    EXPECT_NEAR(ks_d(a, b), brute_force_ks(a, b), 1e-12);
  }
}

TEST(Wilcoxon, MatchesReference) {
  const auto r = wilcoxon_signed_rank({1.83, 0.50, 1.62, 2.48, 1.68, 1.88, 1.55, 3.06, 1.30},
                                      {0.878, 0.647, 0.598, 2.05, 1.06, 1.29, 1.06, 3.14, 1.29});
  EXPECT_EQ(r.n, 9);
  EXPECT_DOUBLE_EQ(std::min(r.w_plus, r.w_minus), 5.0);
  EXPECT_DOUBLE_EQ(r.w_plus + r.w_minus, 45.0);
  EXPECT_NEAR(r.p_value, 0.04401098401295143, 1e-9);

  // Zero differences dropped, tied ranks averaged.
  const auto t = wilcoxon_signed_rank({1, 2, 3, 4, 5, 6, 7, 8}, {2, 2, 1, 1, 9, 3, 3, 3});
  EXPECT_EQ(t.n, 7);
  EXPECT_DOUBLE_EQ(std::min(t.w_plus, t.w_minus), 6.5);
  EXPECT_NEAR(t.p_value, 0.2350444507531182, 1e-9);
}

TEST(Permutation, SeparatesAndIsDeterministic) {
  std::vector<std::vector<double>> a(30, {1, 0}), b(30, {0, 1});
  const auto r = permutation_mean_test(a, b, 999, 1);
  EXPECT_DOUBLE_EQ(r.statistic, 1.0);
  EXPECT_DOUBLE_EQ(r.p_value, 1.0 / 1000);
  const auto same = permutation_mean_test(a, a, 999, 1);
  EXPECT_DOUBLE_EQ(same.p_value, 1.0);

  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0, 1);
  std::vector<std::vector<double>> x(12, std::vector<double>(3)), y(15, std::vector<double>(3));
  for (auto& v : x)
    for (double& c : v) c = n(rng);
  for (auto& v : y)
    for (double& c : v) c = n(rng);
  EXPECT_EQ(permutation_mean_test(x, y, 500, 9).p_value, permutation_mean_test(x, y, 500, 9).p_value);
}

TEST(Permutation, PValuesUniformUnderNull) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0, 1);
  std::vector<double> p;
  for (int t = 0; t < 200; ++t) {
    std::vector<std::vector<double>> x(10, std::vector<double>(2)), y(10, std::vector<double>(2));
    for (auto& v : x)
      for (double& c : v) c = n(rng);
    for (auto& v : y)
      for (double& c : v) c = n(rng);
    p.push_back(permutation_mean_test(x, y, 199, 100 + t).p_value);
  }
  std::sort(p.begin(), p.end());
  double d = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    d = std::max(d, std::abs((i + 1.0) / p.size() - p[i]));
    d = std::max(d, std::abs(static_cast<double>(i) / p.size() - p[i]));
  }
  EXPECT_LT(d, 0.15);
}
