#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace anchoreval {

double normal_cdf(double x);
double normal_sf(double x);

// Inverse standard normal CDF, |error| < 1e-13 over (0, 1).
double normal_quantile(double p);

// Midranks (average ranks, 1-based) of v; ties share their average position.
std::vector<double> midranks(std::span<const double> v);

struct WilcoxonResult {
  double w_plus = 0.0;   // sum of ranks of positive differences
  double p_value = 1.0;  // one-sided, alternative "greater"
  int n_nonzero = 0;
  bool exact = false;
};

// One-sided Wilcoxon signed-rank test (alternative: median > 0). Zeros are
// ranked with the rest and then discarded (Pratt). Exact conditional null via
// subset-sum enumeration for n <= exact_limit, otherwise normal approximation
// with the Cureton zero adjustment and tie correction, no continuity
// correction.
WilcoxonResult wilcoxon_signed_rank_greater(std::span<const double> diffs,
                                            int exact_limit = 25);

double pearson_correlation(std::span<const double> x, std::span<const double> y);

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;  // 0 when y has no variance
};

OlsFit ols_fit(std::span<const double> x, std::span<const double> y);

double mean_of(std::span<const double> v);
// Sample standard deviation (n - 1); 0 for n < 2.
double sample_std(std::span<const double> v);
double median_of(std::vector<double> v);

}  // namespace anchoreval
