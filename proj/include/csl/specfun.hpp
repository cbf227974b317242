#pragma once

namespace csl {

// ln Gamma(x) for x > 0.
double ln_gamma(double x);

// ln B(a, b) and B(a, b) for a, b > 0.
double ln_beta(double a, double b);
double beta_fn(double a, double b);

// Rising factorial (x)_k, k >= 0.
double pochhammer(double x, int k);

// Regularized incomplete beta I_x(a, b), x in [0, 1], a, b > 0.
// Absolute error <= 1e-12.
double reg_inc_beta(double x, double a, double b);

// Gauss hypergeometric 2F1(a, b; c; z) for real parameters and z < 1.
// Dispatches between the terminating/power series (z <= 1/2, or any z when
// the series terminates), the z/(z-1) mapping for z < 0, and Gauss-Legendre
// quadrature of the integral representation for z in (1/2, 1).
double gauss_2f1(double a, double b, double c, double z);

namespace detail {
// Individual evaluation paths, exposed for cross-validation.
double hyp2f1_series(double a, double b, double c, double z, int max_terms = 10000);
double hyp2f1_euler_integral(double a, double b, double c, double z);
}  // namespace detail

}  // namespace csl
