#pragma once

// Goodness-of-fit quantiles and nonparametric comparisons.

#include <cstdint>
#include <vector>

namespace sequil {

// Upper alpha critical value of the chi-square distribution. Tabulated for
// dof 1..10 at alpha 0.01 and 0.05; Wilson-Hilferty beyond the table.
double chi2_critical(int dof, double alpha = 0.01);

// sup_x |F_a(x) - F_b(x)| for empirical CDFs. Optional weights (one per
// value) turn them into weighted CDFs.
double ks_d(const std::vector<double>& a, const std::vector<double>& b,
            const std::vector<double>& weights_a = {},
            const std::vector<double>& weights_b = {});

struct WilcoxonResult {
  double w_plus = 0.0;   // sum of ranks of positive differences
  double w_minus = 0.0;
  int n = 0;             // non-zero differences
  double z = 0.0;
  double p_value = 1.0;  // two-sided
};

// Paired signed-rank test on x - y: zero differences dropped, mid-ranks for
// ties with variance correction, continuity correction, normal
// approximation.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& x,
                                    const std::vector<double>& y);

struct PermutationResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample permutation test of equal mean vectors. The statistic is the
// largest absolute component difference of the sample means; the p-value
// is (1 + #{resampled >= observed}) / (1 + resamples).
PermutationResult permutation_mean_test(const std::vector<std::vector<double>>& a,
                                        const std::vector<std::vector<double>>& b,
                                        int resamples, uint64_t seed);

}  // namespace sequil
