#include "anchoreval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "anchoreval/error.hpp"

namespace anchoreval {

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

double normal_sf(double x) { return 0.5 * std::erfc(x * 0.70710678118654752440); }

namespace {

// Acklam's rational approximation for the probit function.
double probit_estimate(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) fail(Errc::invalid_spec, "normal quantile needs p in (0,1)");
  double x = probit_estimate(p);
  // One Halley refinement against erfc brings the estimate to ~1e-15.
  double e = normal_cdf(x) - p;
  double u = e * std::sqrt(2.0 * 3.14159265358979323846) * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

std::vector<double> midranks(std::span<const double> v) {
  const size_t n = v.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n, 0.0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

WilcoxonResult wilcoxon_signed_rank_greater(std::span<const double> diffs, int exact_limit) {
  WilcoxonResult res;
  const size_t n = diffs.size();
  if (n == 0) return res;

  std::vector<double> absd(n);
  size_t n_zero = 0;
  for (size_t i = 0; i < n; ++i) {
    absd[i] = std::fabs(diffs[i]);
    if (diffs[i] == 0.0) ++n_zero;
  }
  res.n_nonzero = static_cast<int>(n - n_zero);
  if (res.n_nonzero == 0) return res;  // no signal either way

  std::vector<double> ranks = midranks(absd);
  double w_plus = 0.0;
  for (size_t i = 0; i < n; ++i)
    if (diffs[i] > 0.0) w_plus += ranks[i];
  res.w_plus = w_plus;

  if (n <= static_cast<size_t>(exact_limit)) {
    // Exact conditional null: signs of the nonzero entries are independent
    // fair coin flips. Doubled ranks make the subset sums integral even with
    // midranks.
    std::vector<long> r2;
    r2.reserve(n - n_zero);
    long total2 = 0;
    for (size_t i = 0; i < n; ++i) {
      if (diffs[i] == 0.0) continue;
      long r = std::lround(2.0 * ranks[i]);
      r2.push_back(r);
      total2 += r;
    }
    std::vector<double> count(static_cast<size_t>(total2) + 1, 0.0);
    count[0] = 1.0;
    long reach = 0;
    for (long r : r2) {
      for (long s = reach; s >= 0; --s)
        if (count[static_cast<size_t>(s)] > 0.0)
          count[static_cast<size_t>(s + r)] += count[static_cast<size_t>(s)];
      reach += r;
    }
    long w2 = std::lround(2.0 * w_plus);
    double tail = 0.0;
    for (long s = w2; s <= total2; ++s) tail += count[static_cast<size_t>(s)];
    res.p_value = tail / std::pow(2.0, static_cast<double>(r2.size()));
    res.exact = true;
    return res;
  }

  // Normal approximation; zero block removed from mean/variance (Cureton).
  double nn = static_cast<double>(n);
  double z0 = static_cast<double>(n_zero);
  double mean = nn * (nn + 1.0) / 4.0 - z0 * (z0 + 1.0) / 4.0;
  double var24 = nn * (nn + 1.0) * (2.0 * nn + 1.0) - z0 * (z0 + 1.0) * (2.0 * z0 + 1.0);
  // Tie correction over the nonzero ranks.
  std::vector<double> nz;
  nz.reserve(n - n_zero);
  for (size_t i = 0; i < n; ++i)
    if (diffs[i] != 0.0) nz.push_back(ranks[i]);
  std::sort(nz.begin(), nz.end());
  size_t i = 0;
  double tie_sum = 0.0;
  while (i < nz.size()) {
    size_t j = i;
    while (j + 1 < nz.size() && nz[j + 1] == nz[i]) ++j;
    double t = static_cast<double>(j - i + 1);
    tie_sum += t * t * t - t;
    i = j + 1;
  }
  double var = var24 / 24.0 - tie_sum / 48.0;
  if (var <= 0.0) {
    res.p_value = w_plus > mean ? 0.0 : 1.0;
    return res;
  }
  double z = (w_plus - mean) / std::sqrt(var);
  res.p_value = normal_sf(z);
  return res;
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    fail(Errc::invalid_spec, "pearson correlation needs two equal-length series");
  double mx = mean_of(x), my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

OlsFit ols_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    fail(Errc::invalid_spec, "least squares needs two equal-length series");
  OlsFit fit;
  double mx = mean_of(x), my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    fit.intercept = my;
    return fit;  // r_squared = 0 by convention for degenerate inputs
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = (sxy * sxy) / (sxx * syy);
  return fit;
}

double mean_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace anchoreval
