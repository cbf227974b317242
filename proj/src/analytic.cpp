#include "csl/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "csl/errors.hpp"
#include "csl/quadrature.hpp"
#include "csl/specfun.hpp"

namespace csl {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kLnPi = 1.14472988584940017414;

std::mutex g_const_mutex;
std::map<std::pair<int, int>, PdfConstants> g_const_cache;

std::mutex g_norm_mutex;
std::map<std::pair<int, int>, double> g_center_joint_norm;

PdfConstants compute_constants(int d, int n) {
  const double nd = static_cast<double>(n) * d;
  const double g_top1 = ln_gamma(0.5 * (n * (d + 1.0) + 1.0));
  const double g_top2 = ln_gamma(0.5 * ((n + 1.0) * d + 2.0));
  PdfConstants c;
  c.ln_joint = (n + nd) * kLn2 - 0.5 * kLnPi + g_top1 + g_top2 - ln_gamma(n) -
               ln_gamma(nd) - ln_gamma(0.5 * (d - n + 2.0));
  c.ln_delta_core =
      g_top1 + g_top2 - ln_gamma(n) - ln_gamma(nd + 0.5 * (d - n) + 1.0);
  c.ln_omega_core =
      g_top1 + g_top2 - ln_gamma(nd) - ln_gamma(0.5 * (n + d) + 1.0);
  c.ln_center = (n < d) ? kLn2 -
                              ln_beta(0.5 * (d - n), 0.5 * n * (d + 1.0) + 1.0) -
                              ln_beta(n, nd + 1.0)
                        : 0.0;
  c.ln_sum_diff = c.ln_joint - (n + nd - 1.0) * kLn2;
  c.ln_rescaled_sum_diff =
      std::log(n * (d + 1.0)) - (nd + n - 1.0) * kLn2 - ln_beta(n, nd);
  const double half_pref = (0.5 * (d + n) + nd) * kLn2 - 0.5 * kLnPi;
  c.ln_delta_half = half_pref + c.ln_delta_core;
  c.ln_delta_sq = n * kLn2 - 0.5 * kLnPi + c.ln_delta_core;
  c.ln_omega_half = half_pref + c.ln_omega_core;
  c.ln_omega_sq = nd * kLn2 - 0.5 * kLnPi + c.ln_omega_core;
  return c;
}

void require_unit_open(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0))
    throw std::domain_error(std::string(what) + " must lie in (0, 1)");
}

double center_joint_unnormalized(double delta_c, double omega, int d, int n) {
  const double bq = beta_fn(0.5 * (d - n), 0.5 * n);
  double tail = 1.0;
  if (delta_c + omega > 1.0) {
    const double dm = delta_c - omega;
    const double dp = delta_c + omega;
    double beta_arg =
        (1.0 - dm * dm) * (dp * dp - 1.0) / (4.0 * omega * omega * delta_c * delta_c);
    beta_arg = std::clamp(beta_arg, 0.0, 1.0);
    tail = 1.0 - reg_inc_beta(beta_arg, 0.5 * (d - n), 0.5 * n);
  }
  return std::pow(delta_c, d - 1) * std::pow(omega, n * d - 1) * bq * tail;
}

double center_joint_norm(const BallConfig& cfg) {
  const std::pair<int, int> key{cfg.d, cfg.n};
  {
    std::lock_guard<std::mutex> lock(g_norm_mutex);
    auto it = g_center_joint_norm.find(key);
    if (it != g_center_joint_norm.end()) return it->second;
  }
  const int d = cfg.d, n = cfg.n;
  auto inner = [d, n](double omega) {
    const double rmax = std::sqrt(std::max(0.0, 1.0 - omega * omega));
    const double split = std::min(1.0 - omega, rmax);
    auto f = [d, n, omega](double x) {
      return center_joint_unnormalized(x, omega, d, n);
    };
    double acc = integrate_adaptive(f, 0.0, split, 1e-13, 1e-11);
    if (rmax > split) acc += integrate_adaptive(f, split, rmax, 1e-13, 1e-11);
    return acc;
  };
  const double norm = integrate_adaptive(inner, 0.0, 1.0, 1e-12, 1e-10);
  std::lock_guard<std::mutex> lock(g_norm_mutex);
  return g_center_joint_norm.emplace(key, norm).first->second;
}

}  // namespace

void validate(const BallConfig& cfg) {
  if (cfg.n < 1 || cfg.d < cfg.n)
    throw std::domain_error("BallConfig requires 1 <= n <= d");
}

const PdfConstants& pdf_constants(const BallConfig& cfg) {
  validate(cfg);
  const std::pair<int, int> key{cfg.d, cfg.n};
  std::lock_guard<std::mutex> lock(g_const_mutex);
  auto it = g_const_cache.find(key);
  if (it == g_const_cache.end())
    it = g_const_cache.emplace(key, compute_constants(cfg.d, cfg.n)).first;
  return it->second;
}

double joint_pdf_delta_omega(double delta, double omega, const BallConfig& cfg) {
  validate(cfg);
  if (!(delta > 0.0 && omega > 0.0 && delta + omega < 1.0)) return 0.0;
  const PdfConstants& c = pdf_constants(cfg);
  const double s = delta + omega;
  return std::exp(c.ln_joint + (cfg.n - 1.0) * std::log(delta) +
                  (cfg.n * cfg.d - 1.0) * std::log(omega) +
                  0.5 * (cfg.d - cfg.n) * std::log1p(-s * s));
}

double rescaled_joint_pdf(double delta_r, double omega_r, const BallConfig& cfg) {
  validate(cfg);
  if (!(delta_r > 0.0 && omega_r > 0.0 && delta_r + omega_r < 1.0)) return 0.0;
  const int n = cfg.n, d = cfg.d;
  return std::exp(std::log(n * (d + 1.0)) - ln_beta(n, double(n) * d) +
                  (n - 1.0) * std::log(delta_r) +
                  (double(n) * d - 1.0) * std::log(omega_r));
}

double conditional_pdf_delta_r_given_omega_r(double delta_r, double omega_r,
                                             const BallConfig& cfg) {
  validate(cfg);
  require_unit_open(omega_r, "omega_r");
  if (!(delta_r > 0.0 && delta_r < 1.0 - omega_r)) return 0.0;
  const int n = cfg.n;
  return n * std::pow(delta_r, n - 1) / std::pow(1.0 - omega_r, n);
}

double joint_pdf_sigma_y(double sigma, double y, const BallConfig& cfg) {
  validate(cfg);
  if (!(sigma > 0.0 && sigma < 1.0 && std::abs(y) < sigma)) return 0.0;
  const PdfConstants& c = pdf_constants(cfg);
  return std::exp(c.ln_sum_diff + (cfg.n - 1.0) * std::log(sigma + y) +
                  (cfg.n * cfg.d - 1.0) * std::log(sigma - y) +
                  0.5 * (cfg.d - cfg.n) * std::log1p(-sigma * sigma));
}

double rescaled_pdf_sigma_y(double sigma_r, double y_r, const BallConfig& cfg) {
  validate(cfg);
  if (!(sigma_r > 0.0 && sigma_r < 1.0 && std::abs(y_r) < sigma_r)) return 0.0;
  const PdfConstants& c = pdf_constants(cfg);
  return std::exp(c.ln_rescaled_sum_diff + (cfg.n - 1.0) * std::log(sigma_r + y_r) +
                  (cfg.n * cfg.d - 1.0) * std::log(sigma_r - y_r));
}

double joint_pdf_delta_c_omega(double delta_c, double omega,
                               const BallConfig& cfg) {
  validate(cfg);
  if (!(delta_c > 0.0 && delta_c < 1.0 && omega > 0.0 && omega < 1.0 &&
        delta_c * delta_c + omega * omega <= 1.0))
    throw std::domain_error(
        "joint_pdf_delta_c_omega: (delta_c, omega) outside the quarter disk");
  const int d = cfg.d, n = cfg.n;
  if (n == d) {
    if (delta_c + omega >= 1.0) return 0.0;
    const PdfConstants& c = pdf_constants(cfg);
    return std::exp(c.ln_joint + (d - 1.0) * std::log(delta_c) +
                    (double(d) * d - 1.0) * std::log(omega));
  }
  if (n < 2)
    throw std::domain_error("joint_pdf_delta_c_omega requires n >= 2 or n == d");
  return center_joint_unnormalized(delta_c, omega, d, n) / center_joint_norm(cfg);
}

double pdf_h(double h, const BallConfig& cfg) {
  validate(cfg);
  if (cfg.n == cfg.d)
    throw std::domain_error("pdf_h: flat offset is degenerate at 0 for n == d");
  require_unit_open(h, "h");
  const int d = cfg.d, n = cfg.n;
  return std::exp(kLn2 - ln_beta(0.5 * (d - n), 1.0 + 0.5 * n * (d + 1.0)) +
                  (d - n - 1.0) * std::log(h) +
                  0.5 * n * (d + 1.0) * std::log1p(-h * h));
}

double pdf_r(double r, const BallConfig& cfg) {
  validate(cfg);
  if (cfg.n == cfg.d)
    throw std::domain_error("pdf_r: section radius is fixed at 1 for n == d");
  require_unit_open(r, "r");
  const int d = cfg.d, n = cfg.n;
  return std::exp(kLn2 - ln_beta(0.5 * (d - n), 1.0 + 0.5 * n * (d + 1.0)) +
                  (n * (d + 1.0) + 1.0) * std::log(r) +
                  0.5 * (d - n - 2.0) * std::log1p(-r * r));
}

double pdf_delta(double delta, const BallConfig& cfg) {
  validate(cfg);
  require_unit_open(delta, "delta");
  const int d = cfg.d, n = cfg.n;
  const PdfConstants& c = pdf_constants(cfg);
  const double nd = double(n) * d;
  const double f = gauss_2f1(0.5 * (d - n) + 1.0, 0.5 * (n - d),
                             nd + 0.5 * (d - n) + 1.0, 0.5 * (1.0 - delta));
  return std::exp(c.ln_delta_half + (n - 1.0) * std::log(delta) +
                  (nd + 0.5 * (d - n)) * std::log1p(-delta)) *
         f;
}

double pdf_delta_alt(double delta, const BallConfig& cfg) {
  validate(cfg);
  require_unit_open(delta, "delta");
  const int d = cfg.d, n = cfg.n;
  const PdfConstants& c = pdf_constants(cfg);
  const double nd = double(n) * d;
  const double f = gauss_2f1(0.5 * nd, 0.5 * (nd - n + d + 1.0),
                             nd + 0.5 * (d - n) + 1.0, 1.0 - delta * delta);
  return std::exp(c.ln_delta_sq + (n - 1.0) * std::log(delta) +
                  (nd + 0.5 * (d - n)) * std::log1p(-delta * delta)) *
         f;
}

double pdf_omega(double omega, const BallConfig& cfg) {
  validate(cfg);
  require_unit_open(omega, "omega");
  const int d = cfg.d, n = cfg.n;
  const PdfConstants& c = pdf_constants(cfg);
  const double f = gauss_2f1(0.5 * (d - n) + 1.0, 0.5 * (n - d),
                             0.5 * (d + n) + 1.0, 0.5 * (1.0 - omega));
  return std::exp(c.ln_omega_half + (double(n) * d - 1.0) * std::log(omega) +
                  0.5 * (d + n) * std::log1p(-omega)) *
         f;
}

double pdf_omega_alt(double omega, const BallConfig& cfg) {
  validate(cfg);
  require_unit_open(omega, "omega");
  const int d = cfg.d, n = cfg.n;
  const PdfConstants& c = pdf_constants(cfg);
  const double f = gauss_2f1(0.5 * n, 0.5 * (d + 1.0), 0.5 * (d + n) + 1.0,
                             1.0 - omega * omega);
  return std::exp(c.ln_omega_sq + (double(n) * d - 1.0) * std::log(omega) +
                  0.5 * (d + n) * std::log1p(-omega * omega)) *
         f;
}

double pdf_sigma(double sigma, const BallConfig& cfg) {
  validate(cfg);
  require_unit_open(sigma, "sigma");
  const int d = cfg.d, n = cfg.n;
  return std::exp(kLn2 - ln_beta(0.5 * n * (d + 1.0), 1.0 + 0.5 * (d - n)) +
                  (n * (d + 1.0) - 1.0) * std::log(sigma) +
                  0.5 * (d - n) * std::log1p(-sigma * sigma));
}

double pdf_delta_c(double delta_c, const BallConfig& cfg) {
  validate(cfg);
  require_unit_open(delta_c, "delta_c");
  const int d = cfg.d, n = cfg.n;
  if (n == d) {
    return std::exp(-ln_beta(d, double(d) * d + 1.0) +
                    (d - 1.0) * std::log(delta_c) +
                    double(d) * d * std::log1p(-delta_c));
  }
  const PdfConstants& c = pdf_constants(cfg);
  const double dc = delta_c;
  auto integrand = [d, n, dc](double t) {
    const double s = std::sin(t);
    const double x = dc * s;
    return std::pow(s, n - 1) * std::pow(std::cos(t), d - n - 1) *
           std::exp(0.5 * d * (n - 1.0) * std::log1p(-x) -
                    0.5 * d * (n + 1.0) * std::log1p(x));
  };
  const double integral =
      integrate_adaptive(integrand, 0.0, 1.5707963267948966, 1e-14, 1e-12);
  return std::exp(c.ln_center + (d - 1.0) * std::log(delta_c) +
                  0.5 * n * (d + 1.0) * std::log1p(-delta_c * delta_c)) *
         integral;
}

double moment_delta(double k, const BallConfig& cfg) {
  validate(cfg);
  if (k < 0.0) throw std::domain_error("moment_delta: order must be >= 0");
  const int d = cfg.d, n = cfg.n;
  return std::exp(-k * kLn2 + ln_gamma(n + k) - ln_gamma(n) +
                  ln_gamma(0.5 * ((n + 1.0) * d + 2.0)) -
                  ln_gamma(0.5 * ((n + 1.0) * d + 2.0 + k)) +
                  ln_gamma(0.5 * (n * (d + 1.0) + 1.0)) -
                  ln_gamma(0.5 * (n * (d + 1.0) + 1.0 + k)));
}

double moment_omega(double k, const BallConfig& cfg) {
  validate(cfg);
  if (k < 0.0) throw std::domain_error("moment_omega: order must be >= 0");
  const int d = cfg.d, n = cfg.n;
  const double nd = double(n) * d;
  return std::exp(-k * kLn2 + ln_gamma(nd + k) - ln_gamma(nd) +
                  ln_gamma(0.5 * ((n + 1.0) * d + 2.0)) -
                  ln_gamma(0.5 * ((n + 1.0) * d + 2.0 + k)) +
                  ln_gamma(0.5 * (n * (d + 1.0) + 1.0)) -
                  ln_gamma(0.5 * (n * (d + 1.0) + 1.0 + k)));
}

double moment_sigma(double k, const BallConfig& cfg) {
  validate(cfg);
  if (k < 0.0) throw std::domain_error("moment_sigma: order must be >= 0");
  const int d = cfg.d, n = cfg.n;
  return std::exp(ln_gamma(0.5 * ((n + 1.0) * d + 2.0)) -
                  ln_gamma(0.5 * ((n + 1.0) * d + 2.0 + k)) +
                  ln_gamma(0.5 * (n * (d + 1.0) + k)) -
                  ln_gamma(0.5 * n * (d + 1.0)));
}

double moment_delta_even(int p, const BallConfig& cfg) {
  validate(cfg);
  if (p < 0) throw std::domain_error("moment_delta_even: order must be >= 0");
  const int d = cfg.d, n = cfg.n;
  return pochhammer(0.5 * n, p) * pochhammer(0.5 * (n + 1.0), p) /
         (pochhammer(0.5 * (n * (d + 1.0) + 1.0), p) *
          pochhammer(0.5 * ((n + 1.0) * d + 2.0), p));
}

double moment_omega_even(int p, const BallConfig& cfg) {
  validate(cfg);
  if (p < 0) throw std::domain_error("moment_omega_even: order must be >= 0");
  const int d = cfg.d, n = cfg.n;
  const double nd = double(n) * d;
  return pochhammer(0.5 * nd, p) * pochhammer(0.5 * (nd + 1.0), p) /
         (pochhammer(0.5 * (n * (d + 1.0) + 1.0), p) *
          pochhammer(0.5 * ((n + 1.0) * d + 2.0), p));
}

Rational moment_ratio_exact(int k, const BallConfig& cfg) {
  validate(cfg);
  if (k < 0) throw std::domain_error("moment_ratio_exact: order must be >= 0");
  Rational acc = rat(1);
  for (int i = 0; i < k; ++i)
    acc = acc * rat(int64_t(cfg.n) * cfg.d + i, int64_t(cfg.n) + i);
  return acc;
}

double moment_delta_c(double k, const BallConfig& cfg) {
  validate(cfg);
  if (k < 0.0) throw std::domain_error("moment_delta_c: order must be >= 0");
  if (k == 0.0) return 1.0;
  const int d = cfg.d, n = cfg.n;
  if (n == d) {
    const double dd1 = double(d) * d + d + 1.0;
    return std::exp(ln_gamma(d + k) - ln_gamma(d) + ln_gamma(dd1) -
                    ln_gamma(dd1 + k));
  }
  const double nd = double(n) * d;
  auto integrand = [d, n, nd, k](double x) {
    const double f = gauss_2f1(0.5 * n * (d + 1.0) + 1.0, -0.5 * k,
                               0.5 * d * (n + 1.0) + 1.0, 1.0 - x * x);
    return std::exp((n - 1.0) * std::log(x) + nd * std::log1p(-x)) * f;
  };
  return integrate_adaptive(integrand, 0.0, 1.0, 1e-13, 1e-12) /
         beta_fn(n, nd + 1.0);
}

Rational moment_delta_c_sq_exact(const BallConfig& cfg) {
  validate(cfg);
  const int64_t d = cfg.d, n = cfg.n;
  return rat(d * (n * d - n * n + n + 1),
             (n * (d + 1) + 1) * ((n + 1) * d + 2));
}

Rational moment_delta_c_quartic_exact(const BallConfig& cfg) {
  validate(cfg);
  const int64_t d = cfg.d, n = cfg.n;
  const int64_t poly = d * d * d * n * n -
                       2 * d * d * (n * n * n - 2 * n * n - 2 * n) +
                       d * (n * n * n * n - 4 * n * n * n - n * n + 12 * n + 3) -
                       2 * n * n * n - 6 * n * n + 8 * n + 6;
  Rational num = rat(d * poly, (n * (d + 1) + 1) * (n * (d + 1) + 3));
  return num / rat(((n + 1) * d + 2) * ((n + 1) * d + 4));
}

double moment_delta_c_even(int k, const BallConfig& cfg) {
  validate(cfg);
  if (k < 2) throw std::domain_error("moment_delta_c_even: order must be >= 2");
  if (k % 2 != 0) {
    std::cerr << "moment_delta_c_even: odd order " << k
              << " has no closed form; using quadrature\n";
    return moment_delta_c(k, cfg);
  }
  if (k == 2) return to_double(moment_delta_c_sq_exact(cfg));
  if (k == 4) return to_double(moment_delta_c_quartic_exact(cfg));
  return moment_delta_c(k, cfg);
}

double complementary_moment_delta_c(int k, const BallConfig& cfg) {
  validate(cfg);
  if (k < 0)
    throw std::domain_error("complementary_moment_delta_c: order must be >= 0");
  const int d = cfg.d, n = cfg.n;
  const double nd = double(n) * d;
  return pochhammer(1.0 + 0.5 * n * (d + 1.0), k) /
         pochhammer(1.0 + 0.5 * d * (n + 1.0), k) * pochhammer(nd + 1.0, n) /
         pochhammer(nd + 1.0 + k, n) *
         gauss_2f1(-k, n, n * (d + 1.0) + k + 1.0, -1.0);
}

Rational moment_h_sq_exact(const BallConfig& cfg) {
  validate(cfg);
  return rat(int64_t(cfg.d) - cfg.n, (int64_t(cfg.n) + 1) * cfg.d + 2);
}

double prob_contained(const BallConfig& cfg) {
  validate(cfg);
  const int d = cfg.d, n = cfg.n;
  if (n == 1) return 1.0;
  const double nd = double(n) * d;
  const double ln_p =
      std::log(d - 1.0) + n * std::log(double(d)) + 0.5 * (n - 1.0) * kLnPi -
      kLn2 - std::log(n + 1.0) + ln_beta(0.5 * (n + 1.0), 0.5 * nd) +
      ln_beta(0.5 * (d - 1.0), 0.5 * (nd + 1.0)) -
      ln_beta(0.5 * (d - n + 1.0), 0.5 * nd) +
      (n + 1.0) * (ln_gamma(0.5 * d) - ln_gamma(0.5 * (d + 1.0)));
  return std::exp(ln_p);
}

PiRational prob_contained_exact(const BallConfig& cfg) {
  validate(cfg);
  const int d = cfg.d, n = cfg.n;
  if (n == 1) return PiRational{rat(1), 0};
  PiRational res{rat(d - 1, 2 * (int64_t(n) + 1)), n - 1};
  for (int i = 0; i < n; ++i) res.q = res.q * rat(d);
  res = res * beta_half(n + 1, n * d);
  res = res * beta_half(d - 1, n * d + 1);
  res = res / beta_half(d - n + 1, n * d);
  res = res * pow_int(gamma_half(d) / gamma_half(d + 1), n + 1);
  return res;
}

double prob_contained_limit(int n) {
  if (n < 1) throw std::domain_error("prob_contained_limit: n must be >= 1");
  return std::exp(0.5 * n * (2.0 * kLn2 - std::log(double(n))) +
                  0.5 * (n - 1.0) * kLnPi + ln_gamma(0.5 * (n + 1.0)) -
                  0.5 * (n + 1.0) * std::log(n + 1.0));
}

Rational prob_origin_outside_exact(const BallConfig& cfg) {
  validate(cfg);
  const int big_n = cfg.n * (cfg.d + 1) - 1;
  if (big_n >= 63)
    throw ExactOverflow("prob_origin_outside_exact: power of two exceeds 64 bits");
  std::int64_t num = 0;
  for (int k = 0; k < cfg.n; ++k)
    num += static_cast<std::int64_t>(binomial_u64(big_n, k));
  return rat(num, std::int64_t(1) << big_n);
}

double prob_origin_outside(const BallConfig& cfg) {
  validate(cfg);
  try {
    return to_double(prob_origin_outside_exact(cfg));
  } catch (const ExactOverflow&) {
    const double big_n = cfg.n * (cfg.d + 1.0) - 1.0;
    double acc = 0.0;
    for (int k = 0; k < cfg.n; ++k)
      acc += std::exp(ln_gamma(big_n + 1.0) - ln_gamma(k + 1.0) -
                      ln_gamma(big_n - k + 1.0) - big_n * kLn2);
    return acc;
  }
}

AsymptoticLimits asymptotic_moment_limits(double k, int n) {
  if (n < 1 || k < 0.0)
    throw std::domain_error("asymptotic_moment_limits: need n >= 1, k >= 0");
  const double limit = std::pow(n / (n + 1.0), 0.5 * k);
  return {0.0, limit, limit};
}

double cdf_sigma(double x, const BallConfig& cfg) {
  validate(cfg);
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return reg_inc_beta(x * x, 0.5 * cfg.n * (cfg.d + 1.0),
                      1.0 + 0.5 * (cfg.d - cfg.n));
}

double cdf_h(double x, const BallConfig& cfg) {
  validate(cfg);
  if (cfg.n == cfg.d) throw std::domain_error("cdf_h: degenerate for n == d");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return reg_inc_beta(x * x, 0.5 * (cfg.d - cfg.n),
                      1.0 + 0.5 * cfg.n * (cfg.d + 1.0));
}

double cdf_r(double x, const BallConfig& cfg) {
  validate(cfg);
  if (cfg.n == cfg.d) throw std::domain_error("cdf_r: degenerate for n == d");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return reg_inc_beta(x * x, 1.0 + 0.5 * cfg.n * (cfg.d + 1.0),
                      0.5 * (cfg.d - cfg.n));
}

NumericCdf::NumericCdf(const std::function<double(double)>& pdf, double lo,
                       double hi, int cells)
    : lo_(lo), hi_(hi), cum_(cells + 1, 0.0) {
  if (cells < 2 || !(hi > lo))
    throw std::domain_error("NumericCdf: need cells >= 2 and hi > lo");
  const GaussLegendreRule& rule = gauss_legendre(16);
  const double width = (hi - lo) / cells;
  for (int i = 0; i < cells; ++i) {
    const double a = lo + width * i;
    const double b = (i + 1 == cells) ? hi : lo + width * (i + 1);
    cum_[i + 1] = cum_[i] + gl_integrate(pdf, a, b, rule);
  }
  if (!(cum_.back() > 0.0)) throw EvalError("NumericCdf: zero total mass");
}

double NumericCdf::operator()(double x) const {
  if (cum_.size() < 2) throw EvalError("NumericCdf: not built");
  if (x <= lo_) return 0.0;
  if (x >= hi_) return 1.0;
  const int cells = static_cast<int>(cum_.size()) - 1;
  double t = (x - lo_) / (hi_ - lo_) * cells;
  int j = std::min(static_cast<int>(t), cells - 1);
  const double frac = t - j;
  return (cum_[j] + frac * (cum_[j + 1] - cum_[j])) / cum_.back();
}

NumericCdf make_cdf_omega(const BallConfig& cfg, int cells) {
  return NumericCdf([cfg](double x) { return pdf_omega(x, cfg); }, 0.0, 1.0,
                    cells);
}

NumericCdf make_cdf_delta(const BallConfig& cfg, int cells) {
  return NumericCdf([cfg](double x) { return pdf_delta(x, cfg); }, 0.0, 1.0,
                    cells);
}

NumericCdf make_cdf_delta_c(const BallConfig& cfg, int cells) {
  return NumericCdf([cfg](double x) { return pdf_delta_c(x, cfg); }, 0.0, 1.0,
                    cells);
}

}  // namespace csl
