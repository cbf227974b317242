#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace csl {

// One-sample Kolmogorov-Smirnov distance against a continuous cdf;
// `sorted` must be ascending.
double ks_statistic(const std::vector<double>& sorted,
                    const std::function<double(double)>& cdf);

// Two-sample KS distance; both inputs ascending.
double ks_statistic_two_sample(const std::vector<double>& a,
                               const std::vector<double>& b);

// Critical values at level alpha (two-sided), finite-n corrected.
double ks_critical(double alpha, std::size_t n);
double ks_critical_two_sample(double alpha, std::size_t n, std::size_t m);

// Upper quantile of the standard normal: P(Z > z) = p.
double normal_upper_quantile(double p);

// Upper critical value of chi^2 with dof degrees of freedom
// (Wilson-Hilferty approximation).
double chi2_critical(double dof, double alpha);

struct MeanSE {
  double mean = 0.0;
  double se = 0.0;
};

MeanSE sample_mean_se(const std::vector<double>& xs);

}  // namespace csl
