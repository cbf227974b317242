#pragma once

#include <functional>
#include <vector>

#include "csl/exact.hpp"

namespace csl {

// Ambient dimension d and flat dimension n of the generating point set.
struct BallConfig {
  int d = 1;
  int n = 1;
};

// Throws std::domain_error unless 1 <= n <= d.
void validate(const BallConfig& cfg);

// Log-space normalization constants, computed once per (d, n) and cached.
// The cache is safe for concurrent lookup.
struct PdfConstants {
  double ln_joint;        // (delta, omega) joint density
  double ln_delta_core;   // gamma-ratio core shared by both delta marginal forms
  double ln_omega_core;   // gamma-ratio core shared by both omega marginal forms
  double ln_center;       // center-distance marginal prefactor, n < d
  double ln_sum_diff;     // (sigma, y) joint density
  double ln_rescaled_sum_diff;  // rescaled (sigma_r, y_r) joint density
  // fully assembled marginal prefactors
  double ln_delta_half;   // delta form with argument (1 - delta)/2
  double ln_delta_sq;     // delta form with argument 1 - delta^2
  double ln_omega_half;   // omega form with argument (1 - omega)/2
  double ln_omega_sq;     // omega form with argument 1 - omega^2
};

const PdfConstants& pdf_constants(const BallConfig& cfg);

// --- joint and conditional densities (lengths relative to the unit ball) ---

// Density of (delta, omega) for contained circumspheres; 0 outside the open
// triangle delta, omega > 0, delta + omega < 1.
double joint_pdf_delta_omega(double delta, double omega, const BallConfig& cfg);

// Density of (delta_r, omega_r) = (delta, omega)/r, a Dirichlet law on the
// open triangle; 0 outside.
double rescaled_joint_pdf(double delta_r, double omega_r, const BallConfig& cfg);

// Conditional density of delta_r given omega_r; 0 outside (0, 1 - omega_r).
double conditional_pdf_delta_r_given_omega_r(double delta_r, double omega_r,
                                             const BallConfig& cfg);

// Density of (sigma, y) = (delta + omega, delta - omega); 0 outside
// 0 < sigma < 1, |y| < sigma.
double joint_pdf_sigma_y(double sigma, double y, const BallConfig& cfg);

// Rescaled counterpart on the same wedge.
double rescaled_pdf_sigma_y(double sigma_r, double y_r, const BallConfig& cfg);

// Density of (delta_c, omega), normalized numerically (cached per cfg).
// Requires delta_c, omega in (0,1) with delta_c^2 + omega^2 <= 1; throws
// std::domain_error outside that quarter disk.  n == d uses the closed
// Dirichlet form; otherwise requires n >= 2.
double joint_pdf_delta_c_omega(double delta_c, double omega,
                               const BallConfig& cfg);

// --- univariate densities on (0, 1); arguments outside throw ---

double pdf_h(double h, const BallConfig& cfg);  // flat offset; n < d only
double pdf_r(double r, const BallConfig& cfg);  // section radius; n < d only
double pdf_delta(double delta, const BallConfig& cfg);
double pdf_delta_alt(double delta, const BallConfig& cfg);  // cross-check form
double pdf_omega(double omega, const BallConfig& cfg);
double pdf_omega_alt(double omega, const BallConfig& cfg);  // cross-check form
double pdf_sigma(double sigma, const BallConfig& cfg);
double pdf_delta_c(double delta_c, const BallConfig& cfg);

// --- moments of the contained-circumsphere variables ---

// Real order k >= 0; gamma-ratio evaluation in log space.
double moment_delta(double k, const BallConfig& cfg);
double moment_omega(double k, const BallConfig& cfg);
double moment_sigma(double k, const BallConfig& cfg);

// Even moments of order 2p through rising factorials; agrees with the
// gamma-ratio forms to roundoff.
double moment_delta_even(int p, const BallConfig& cfg);
double moment_omega_even(int p, const BallConfig& cfg);

// E[Omega^k] / E[Delta^k] is rational for integer k.
Rational moment_ratio_exact(int k, const BallConfig& cfg);

// Center-distance moment E[Delta_c^k] by quadrature; any real k >= 0.
double moment_delta_c(double k, const BallConfig& cfg);

// Exact rationals for k = 2 and 4 (n <= d); other even k fall back to
// quadrature, odd k always do.
Rational moment_delta_c_sq_exact(const BallConfig& cfg);
Rational moment_delta_c_quartic_exact(const BallConfig& cfg);
double moment_delta_c_even(int k, const BallConfig& cfg);

// E[(1 - Delta_c^2)^k] in closed form, integer k >= 0.
double complementary_moment_delta_c(int k, const BallConfig& cfg);

Rational moment_h_sq_exact(const BallConfig& cfg);  // E[H^2]

// --- probabilities ---

// Probability that the circumsphere is entirely inside the unit ball.
double prob_contained(const BallConfig& cfg);
PiRational prob_contained_exact(const BallConfig& cfg);  // may throw ExactOverflow
double prob_contained_limit(int n);  // d -> infinity at fixed n

// Probability that the in-flat projection of the center lies outside the
// circumsphere (delta > omega), conditional on containment.
double prob_origin_outside(const BallConfig& cfg);
Rational prob_origin_outside_exact(const BallConfig& cfg);

// --- asymptotics (d -> infinity, fixed n) ---

struct AsymptoticLimits {
  double delta_limit;
  double omega_limit;
  double sigma_limit;
};

AsymptoticLimits asymptotic_moment_limits(double k, int n);

// --- distribution functions ---

double cdf_sigma(double x, const BallConfig& cfg);
double cdf_h(double x, const BallConfig& cfg);  // n < d
double cdf_r(double x, const BallConfig& cfg);  // n < d

// Piecewise-linear cdf built by per-cell quadrature of a density on
// (lo, hi); absolute error well under 1e-5 for the smooth densities here.
class NumericCdf {
 public:
  NumericCdf() = default;
  NumericCdf(const std::function<double(double)>& pdf, double lo, double hi,
             int cells = 2048);
  double operator()(double x) const;

 private:
  double lo_ = 0.0;
  double hi_ = 1.0;
  std::vector<double> cum_;  // cells + 1 edge values; back() is total mass
};

NumericCdf make_cdf_omega(const BallConfig& cfg, int cells = 2048);
NumericCdf make_cdf_delta(const BallConfig& cfg, int cells = 2048);
NumericCdf make_cdf_delta_c(const BallConfig& cfg, int cells = 2048);

}  // namespace csl
