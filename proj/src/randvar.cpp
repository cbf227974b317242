#include "csl/randvar.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "csl/specfun.hpp"

namespace csl {

double sample_std_normal(RngStream& rng) {
  if (rng.has_spare) {
    rng.has_spare = false;
    return rng.spare;
  }
  const double u1 = rng.next_uniform();
  const double u2 = rng.next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * M_PI * u2;
  rng.spare = r * std::sin(t);
  rng.has_spare = true;
  return r * std::cos(t);
}

void sample_uniform_ball(int d, RngStream& rng, double* out) {
  if (d < 1) throw std::domain_error("sample_uniform_ball: requires d >= 1");
  double norm_sq = 0.0;
  for (int i = 0; i < d; ++i) {
    out[i] = sample_std_normal(rng);
    norm_sq += out[i] * out[i];
  }
  const double u = rng.next_uniform();
  const double scale = std::pow(u, 1.0 / d) / std::sqrt(norm_sq);
  for (int i = 0; i < d; ++i) out[i] *= scale;
}

std::vector<double> sample_uniform_ball(int d, RngStream& rng) {
  std::vector<double> p(d);
  sample_uniform_ball(d, rng, p.data());
  return p;
}

double sample_gamma(double q, RngStream& rng) {
  if (!(q > 0.0)) throw std::domain_error("sample_gamma: requires q > 0");
  if (q < 1.0) {
    // boost: Gamma(q) = Gamma(q+1) * U^(1/q)
    const double g = sample_gamma(q + 1.0, rng);
    return g * std::pow(rng.next_uniform(), 1.0 / q);
  }
  const double d = q - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = sample_std_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_beta(double a, double b, RngStream& rng) {
  const double g1 = sample_gamma(a, rng);
  const double g2 = sample_gamma(b, rng);
  return g1 / (g1 + g2);
}

void sample_dirichlet(const double* q, int k, RngStream& rng, double* out) {
  if (k < 1) throw std::domain_error("sample_dirichlet: requires k >= 1");
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    out[i] = sample_gamma(q[i], rng);
    total += out[i];
  }
  for (int i = 0; i < k; ++i) out[i] /= total;
}

double beta_product_pdf(double x, const BetaShape& p1, const BetaShape& p2) {
  if (!(p1.alpha > 0.0) || !(p1.beta > 0.0) || !(p2.alpha > 0.0) ||
      !(p2.beta > 0.0))
    throw std::domain_error("beta_product_pdf: shapes must be positive");
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double a1 = p1.alpha, b1 = p1.beta, a2 = p2.alpha, b2 = p2.beta;
  const double ln_pref = ln_beta(b1, b2) - ln_beta(a1, b1) - ln_beta(a2, b2) +
                         (a1 - 1.0) * std::log(x) +
                         (b1 + b2 - 1.0) * std::log1p(-x);
  return std::exp(ln_pref) * gauss_2f1(a1 + b1 - a2, b2, b1 + b2, 1.0 - x);
}

BetaPairSolutions invert_beta_product(double a, double b, double c, double s) {
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0) || !(s > 0.0))
    throw std::domain_error("invert_beta_product: parameters must be positive");
  if (!(c > a) || !(c > b))
    throw std::domain_error("invert_beta_product: requires c > a and c > b");
  if (!(c + s > a + b))
    throw std::domain_error("invert_beta_product: requires c + s > a + b");
  if (a == b)
    throw std::domain_error("invert_beta_product: requires a != b");
  BetaPairSolutions sol;
  sol.first = BetaPair{{s, c - b}, {c + s - (a + b), b}};
  sol.second = BetaPair{{s, c - a}, {c + s - (a + b), a}};
  return sol;
}

double sample_beta_product(const BetaPair& pair, RngStream& rng) {
  return sample_beta(pair.x1.alpha, pair.x1.beta, rng) *
         sample_beta(pair.x2.alpha, pair.x2.beta, rng);
}

namespace {

void check_dn(int d, int n, const char* who) {
  if (n < 1 || d < 1 || n > d)
    throw std::domain_error(std::string(who) + ": requires 1 <= n <= d");
}

}  // namespace

BetaPair delta_sq_rep(int d, int n, DeltaRep rep) {
  check_dn(d, n, "delta_sq_rep");
  const double nd = static_cast<double>(n) * d;
  if (rep == DeltaRep::R1)
    return BetaPair{{n / 2.0, (nd - n + d + 2.0) / 2.0},
                    {(n + 1.0) / 2.0, nd / 2.0}};
  return BetaPair{{n / 2.0, (nd + 1.0) / 2.0},
                  {(n + 1.0) / 2.0, (nd - n + d + 1.0) / 2.0}};
}

BetaPair omega_sq_rep(int d, int n, OmegaRep rep) {
  check_dn(d, n, "omega_sq_rep");
  const double nd = static_cast<double>(n) * d;
  if (rep == OmegaRep::S1)
    return BetaPair{{nd / 2.0, (n + 1.0) / 2.0},
                    {(nd + 1.0) / 2.0, (d + 1.0) / 2.0}};
  return BetaPair{{nd / 2.0, (d + 2.0) / 2.0}, {(nd + 1.0) / 2.0, n / 2.0}};
}

double sample_delta(int d, int n, RngStream& rng, DeltaRep rep) {
  return std::sqrt(sample_beta_product(delta_sq_rep(d, n, rep), rng));
}

double sample_omega(int d, int n, RngStream& rng, OmegaRep rep) {
  return std::sqrt(sample_beta_product(omega_sq_rep(d, n, rep), rng));
}

double sample_delta_c_sq(int d, int n, RngStream& rng) {
  check_dn(d, n, "sample_delta_c_sq");
  if (n == d)
    throw std::domain_error(
        "sample_delta_c_sq: center offset coincides with the in-flat offset "
        "when n = d");
  const double z =
      sample_beta((d - n) / 2.0, 1.0 + n * (d + 1.0) / 2.0, rng);
  const double dr = sample_beta(n, static_cast<double>(n) * d + 1.0, rng);
  return z + dr * dr * (1.0 - z);
}

double sample_chord_half_surface(int d, RngStream& rng) {
  if (d < 1)
    throw std::domain_error("sample_chord_half_surface: requires d >= 1");
  return std::sqrt(sample_beta((d + 1.0) / 2.0, (d + 1.0) / 2.0, rng));
}

}  // namespace csl
