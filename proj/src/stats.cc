#include "sequil/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sequil/error.h"

namespace sequil {
namespace {

constexpr double kChi2_01[] = {6.6349, 9.2103, 11.3449, 13.2767, 15.0863,
                               16.8119, 18.4753, 20.0902, 21.6660, 23.2093};
constexpr double kChi2_05[] = {3.8415, 5.9915, 7.8147, 9.4877, 11.0705,
                               12.5916, 14.0671, 15.5073, 16.9190, 18.3070};

double weighted_cdf_gap(const std::vector<double>& a, const std::vector<double>& wa,
                        const std::vector<double>& b, const std::vector<double>& wb) {
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  const double ta = std::accumulate(wa.begin(), wa.end(), 0.0);
  const double tb = std::accumulate(wb.begin(), wb.end(), 0.0);
  std::vector<size_t> ia(a.size()), ib(b.size());
  std::iota(ia.begin(), ia.end(), 0);
  std::iota(ib.begin(), ib.end(), 0);
  std::sort(ia.begin(), ia.end(), [&](size_t x, size_t y) { return a[x] < a[y]; });
  std::sort(ib.begin(), ib.end(), [&](size_t x, size_t y) { return b[x] < b[y]; });
  double d = 0.0, fa = 0.0, fb = 0.0;
  size_t pa = 0, pb = 0;
  for (double x : pooled) {
    while (pa < ia.size() && a[ia[pa]] <= x) fa += wa[ia[pa++]];
    while (pb < ib.size() && b[ib[pb]] <= x) fb += wb[ib[pb++]];
    d = std::max(d, std::abs(fa / ta - fb / tb));
  }
  return d;
}

}  // namespace

double chi2_critical(int dof, double alpha) {
  if (dof < 1) throw ValidationError("chi-square needs dof >= 1");
  const bool one = std::abs(alpha - 0.01) < 1e-12;
  const bool five = std::abs(alpha - 0.05) < 1e-12;
  if (!one && !five) throw ValidationError("chi-square critical values exist for alpha 0.01 and 0.05");
  if (dof <= 10) return one ? kChi2_01[dof - 1] : kChi2_05[dof - 1];
  const double z = one ? 2.3263478740 : 1.6448536270;
  const double c = 2.0 / (9.0 * dof);
  return dof * std::pow(1.0 - c + z * std::sqrt(c), 3);
}

double ks_d(const std::vector<double>& a, const std::vector<double>& b,
            const std::vector<double>& weights_a, const std::vector<double>& weights_b) {
  if (a.empty() || b.empty()) throw ValidationError("KS statistic needs non-empty samples");
  const std::vector<double> wa = weights_a.empty() ? std::vector<double>(a.size(), 1.0) : weights_a;
  const std::vector<double> wb = weights_b.empty() ? std::vector<double>(b.size(), 1.0) : weights_b;
  if (wa.size() != a.size() || wb.size() != b.size()) {
    throw ValidationError("KS weights must match sample sizes");
  }
  return weighted_cdf_gap(a, wa, b, wb);
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& x,
                                    const std::vector<double>& y) {
  if (x.size() != y.size()) throw ValidationError("signed-rank test needs paired samples");
  std::vector<double> d;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] != y[i]) d.push_back(x[i] - y[i]);
  }
  WilcoxonResult r;
  r.n = static_cast<int>(d.size());
  if (d.empty()) return r;
  std::vector<size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return std::abs(d[a]) < std::abs(d[b]); });
  std::vector<double> rank(d.size());
  double tie_term = 0.0;
  for (size_t s = 0; s < order.size();) {
    size_t e = s;
    while (e + 1 < order.size() && std::abs(d[order[e + 1]]) == std::abs(d[order[s]])) ++e;
    const double mid = 0.5 * (s + e) + 1.0;
    for (size_t t = s; t <= e; ++t) rank[order[t]] = mid;
    const double t = static_cast<double>(e - s + 1);
    tie_term += t * t * t - t;
    s = e + 1;
  }
  for (size_t i = 0; i < d.size(); ++i) (d[i] > 0 ? r.w_plus : r.w_minus) += rank[i];
  const double n = r.n;
  const double mean = n * (n + 1) / 4.0;
  const double var = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term / 48.0;
  if (var <= 0.0) return r;
  const double diff = r.w_plus - mean;
  const double corrected = std::max(0.0, std::abs(diff) - 0.5);
  r.z = std::copysign(corrected / std::sqrt(var), diff);
  r.p_value = std::min(1.0, std::erfc(std::abs(r.z) / std::sqrt(2.0)));
  return r;
}

PermutationResult permutation_mean_test(const std::vector<std::vector<double>>& a,
                                        const std::vector<std::vector<double>>& b,
                                        int resamples, uint64_t seed) {
  if (a.empty() || b.empty()) throw ValidationError("permutation test needs non-empty samples");
  const size_t dim = a[0].size();
  std::vector<const std::vector<double>*> pooled;
  for (const auto& v : a) pooled.push_back(&v);
  for (const auto& v : b) pooled.push_back(&v);
  for (const auto* v : pooled) {
    if (v->size() != dim) throw ValidationError("permutation test vectors differ in length");
  }
  std::vector<double> total(dim, 0.0);
  for (const auto* v : pooled) {
    for (size_t q = 0; q < dim; ++q) total[q] += (*v)[q];
  }
  const size_t na = a.size(), nb = b.size();
  auto stat = [&](const std::vector<size_t>& idx) {
    std::vector<double> sa(dim, 0.0);
    for (size_t t = 0; t < na; ++t) {
      for (size_t q = 0; q < dim; ++q) sa[q] += (*pooled[idx[t]])[q];
    }
    double s = 0.0;
    for (size_t q = 0; q < dim; ++q) {
      s = std::max(s, std::abs(sa[q] / na - (total[q] - sa[q]) / nb));
    }
    return s;
  };
  std::vector<size_t> idx(pooled.size());
  std::iota(idx.begin(), idx.end(), 0);
  PermutationResult r;
  r.statistic = stat(idx);
  std::mt19937_64 rng(seed);
  int extreme = 0;
  for (int s = 0; s < resamples; ++s) {
    // Partial Fisher-Yates: only the first na slots matter.
    for (size_t t = 0; t < na; ++t) {
      std::uniform_int_distribution<size_t> pick(t, idx.size() - 1);
      std::swap(idx[t], idx[pick(rng)]);
    }
    if (stat(idx) >= r.statistic - 1e-12) ++extreme;
  }
  r.p_value = (1.0 + extreme) / (1.0 + resamples);
  return r;
}

}  // namespace sequil
