#include "csl/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace csl {

double ks_statistic(const std::vector<double>& sorted,
                    const std::function<double(double)>& cdf) {
  const std::size_t n = sorted.size();
  if (n == 0) throw std::domain_error("ks_statistic: empty sample");
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sorted[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

double ks_statistic_two_sample(const std::vector<double>& a,
                               const std::vector<double>& b) {
  if (a.empty() || b.empty())
    throw std::domain_error("ks_statistic_two_sample: empty sample");
  std::size_t i = 0, j = 0;
  double d = 0.0;
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

namespace {

// Kolmogorov tail Q(x) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 x^2).
double kolmogorov_q(double x) {
  if (x <= 0.0) return 1.0;
  double s = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double t = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 == 1) ? t : -t;
    if (t < 1e-18) break;
  }
  return std::min(1.0, std::max(0.0, 2.0 * s));
}

double kolmogorov_quantile(double alpha) {
  double lo = 0.2, hi = 4.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (kolmogorov_q(mid) > alpha)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double ks_critical(double alpha, std::size_t n) {
  const double c = kolmogorov_quantile(alpha);
  const double sn = std::sqrt(static_cast<double>(n));
  return c / (sn + 0.12 + 0.11 / sn);
}

double ks_critical_two_sample(double alpha, std::size_t n, std::size_t m) {
  const double c = kolmogorov_quantile(alpha);
  return c * std::sqrt((static_cast<double>(n) + m) /
                       (static_cast<double>(n) * m));
}

double normal_upper_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::domain_error("normal_upper_quantile: requires 0 < p < 1");
  // Acklam's rational approximation for the inverse normal cdf, on 1 - p.
  const double q = 1.0 - p;
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (q < plow) {
    const double u = std::sqrt(-2.0 * std::log(q));
    x = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((dd[0] * u + dd[1]) * u + dd[2]) * u + dd[3]) * u + 1.0);
  } else if (q <= 1.0 - plow) {
    const double u = q - 0.5, r = u * u;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        u /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double u = std::sqrt(-2.0 * std::log(1.0 - q));
    x = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((dd[0] * u + dd[1]) * u + dd[2]) * u + dd[3]) * u + 1.0);
  }
  return x;
}

double chi2_critical(double dof, double alpha) {
  if (!(dof > 0.0)) throw std::domain_error("chi2_critical: requires dof > 0");
  const double z = normal_upper_quantile(alpha);
  const double t = 1.0 - 2.0 / (9.0 * dof) + z * std::sqrt(2.0 / (9.0 * dof));
  return dof * t * t * t;
}

MeanSE sample_mean_se(const std::vector<double>& xs) {
  if (xs.size() < 2) throw std::domain_error("sample_mean_se: need >= 2 values");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / (static_cast<double>(xs.size()) - 1.0);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

}  // namespace csl
