#pragma once

#include <vector>

#include "csl/rng.hpp"

namespace csl {

struct BetaShape {
  double alpha;
  double beta;
};

struct BetaPair {
  BetaShape x1;
  BetaShape x2;
};

struct BetaPairSolutions {
  BetaPair first;
  BetaPair second;
};

double sample_std_normal(RngStream& rng);

// Uniform point in the d-dimensional unit ball; out has length d.
void sample_uniform_ball(int d, RngStream& rng, double* out);
std::vector<double> sample_uniform_ball(int d, RngStream& rng);

// Gamma(q, 1) by the Marsaglia-Tsang squeeze; exact for all q > 0.
double sample_gamma(double q, RngStream& rng);

double sample_beta(double a, double b, RngStream& rng);

// Dirichlet(q[0..k-1]); out has length k and sums to 1.
void sample_dirichlet(const double* q, int k, RngStream& rng, double* out);

// Density of the product of two independent beta variables.
double beta_product_pdf(double x, const BetaShape& p1, const BetaShape& p2);

// Given a density proportional to x^(s-1) (1-x)^(c-1) 2F1(a, b; c; 1-x),
// the two beta pairs whose product has that law.  Requires a, b, c, s > 0,
// c > a, c > b, c + s > a + b, and a != b.
BetaPairSolutions invert_beta_product(double a, double b, double c, double s);

double sample_beta_product(const BetaPair& pair, RngStream& rng);

// Two equivalent beta-pair representations for each squared circumsphere
// variable; 1 <= n <= d.
enum class DeltaRep { R1, R2 };
enum class OmegaRep { S1, S2 };
BetaPair delta_sq_rep(int d, int n, DeltaRep rep);
BetaPair omega_sq_rep(int d, int n, OmegaRep rep);

// Center offset and circumradius for the simplex problem, drawn directly
// from their laws (no geometry involved).
double sample_delta(int d, int n, RngStream& rng, DeltaRep rep = DeltaRep::R1);
double sample_omega(int d, int n, RngStream& rng, OmegaRep rep = OmegaRep::S1);

// Squared center distance Delta_c^2 composed from its two-stage law; n < d.
double sample_delta_c_sq(int d, int n, RngStream& rng);

// Half-chord radius for a random chord of the unit (d+1)-sphere surface.
double sample_chord_half_surface(int d, RngStream& rng);

}  // namespace csl
