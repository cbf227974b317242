#pragma once

#include <vector>

#include "csl/errors.hpp"

namespace csl {

enum class Family { C, D, E };

// One simulated circumsphere event.  All lengths are relative to the unit
// ball: omega = circumradius, delta = in-flat center offset, h = distance
// from the origin to the point flat, delta_c = full center distance,
// sigma = delta + omega, r = radius of the flat's ball section.
struct CircumRecord {
  double omega = 0.0;
  double delta = 0.0;
  double h = 0.0;
  double delta_c = 0.0;
  double sigma = 0.0;
  double r = 1.0;
  Family family = Family::C;
};

// Strict inequalities; boundary ties fall through to the next family.
Family classify(double sigma, double h, double delta_c);

// Orthonormalizes n row vectors of length d (row-major) into frame.
// Throws DegenerateFlat when a pivot norm falls below pivot_tol times the
// largest input norm.
void gram_schmidt(const double* vecs, int n, int d, double pivot_tol,
                  double* frame);

// RMS distance of m points (rows, length d) from their best-fitting
// (m-2)-flat; the near-degeneracy diagnostic.
double flat_residual(const double* pts, int m, int d);

// Circumsphere solver for n+1 points spanning an n-flat in R^d.
// Reusable: one instance per worker, no allocation in solve().
class CircumSolver {
 public:
  CircumSolver(int d, int n, double pivot_tol = 1e-12);

  // pts: (n+1) x d row-major.  Throws DegenerateFlat on rank deficiency.
  CircumRecord solve(const double* pts);

  int dim() const { return d_; }
  int npts() const { return n_ + 1; }
  double pivot_tol() const { return tol_; }

 private:
  int d_;
  int n_;
  double tol_;
  std::vector<double> edges_;   // n x d
  std::vector<double> gram_;    // n x n
  std::vector<double> chol_;    // n x n
  std::vector<double> rhs_;     // n
  std::vector<double> alpha_;   // n
  std::vector<double> frame_;   // n x d
  std::vector<double> center_;  // d
};

// Convenience one-shot wrapper.
CircumRecord circumsphere(const std::vector<double>& pts, int d, int n,
                          double pivot_tol = 1e-12);

}  // namespace csl
