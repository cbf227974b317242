#include "csl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace csl {

Family classify(double sigma, double h, double delta_c) {
  const double r = std::sqrt(std::max(0.0, 1.0 - h * h));
  if (sigma < r) return Family::C;
  if (delta_c < 1.0) return Family::D;
  return Family::E;
}

void gram_schmidt(const double* vecs, int n, int d, double pivot_tol,
                  double* frame) {
  double max_norm = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += vecs[i * d + j] * vecs[i * d + j];
    max_norm = std::max(max_norm, std::sqrt(s));
  }
  for (int i = 0; i < n; ++i) {
    double* fi = frame + i * d;
    for (int j = 0; j < d; ++j) fi[j] = vecs[i * d + j];
    // two projection passes keep the frame orthogonal to machine precision
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < i; ++k) {
        const double* fk = frame + k * d;
        double dot = 0.0;
        for (int j = 0; j < d; ++j) dot += fi[j] * fk[j];
        for (int j = 0; j < d; ++j) fi[j] -= dot * fk[j];
      }
    }
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += fi[j] * fi[j];
    const double norm = std::sqrt(s);
    if (norm <= pivot_tol * max_norm)
      throw DegenerateFlat("gram_schmidt: rank-deficient input");
    const double inv = 1.0 / norm;
    for (int j = 0; j < d; ++j) fi[j] *= inv;
  }
}

namespace {

// Jacobi sweeps; a is k x k symmetric, destroyed; eigenvalues out ascending.
void jacobi_eigenvalues(double* a, int k, double* eig) {
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < k; ++p)
      for (int q = p + 1; q < k; ++q) off += a[p * k + q] * a[p * k + q];
    if (off < 1e-30) break;
    for (int p = 0; p < k; ++p) {
      for (int q = p + 1; q < k; ++q) {
        const double apq = a[p * k + q];
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a[q * k + q] - a[p * k + p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int j = 0; j < k; ++j) {
          const double ajp = a[j * k + p], ajq = a[j * k + q];
          a[j * k + p] = c * ajp - s * ajq;
          a[j * k + q] = s * ajp + c * ajq;
        }
        for (int j = 0; j < k; ++j) {
          const double apj = a[p * k + j], aqj = a[q * k + j];
          a[p * k + j] = c * apj - s * aqj;
          a[q * k + j] = s * apj + c * aqj;
        }
      }
    }
  }
  for (int i = 0; i < k; ++i) eig[i] = a[i * k + i];
  std::sort(eig, eig + k);
}

}  // namespace

double flat_residual(const double* pts, int m, int d) {
  if (m < 2) throw std::domain_error("flat_residual: need at least two points");
  std::vector<double> mean(d, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < d; ++j) mean[j] += pts[i * d + j];
  for (int j = 0; j < d; ++j) mean[j] /= m;
  std::vector<double> g(m * m, 0.0);
  for (int i = 0; i < m; ++i) {
    for (int l = i; l < m; ++l) {
      double s = 0.0;
      for (int j = 0; j < d; ++j)
        s += (pts[i * d + j] - mean[j]) * (pts[l * d + j] - mean[j]);
      g[i * m + l] = s;
      g[l * m + i] = s;
    }
  }
  std::vector<double> eig(m);
  jacobi_eigenvalues(g.data(), m, eig.data());
  // centering forces one zero eigenvalue; the next one up measures the
  // deviation from an (m-2)-flat
  return std::sqrt(std::max(0.0, eig[1]) / m);
}

CircumSolver::CircumSolver(int d, int n, double pivot_tol)
    : d_(d), n_(n), tol_(pivot_tol) {
  if (d < 1 || n < 1 || n > d)
    throw std::domain_error("CircumSolver: requires 1 <= n <= d");
  if (!(pivot_tol > 0.0))
    throw std::domain_error("CircumSolver: pivot_tol must be positive");
  edges_.resize(n * d);
  gram_.resize(n * n);
  chol_.resize(n * n);
  rhs_.resize(n);
  alpha_.resize(n);
  frame_.resize(n * d);
  center_.resize(d);
}

CircumRecord CircumSolver::solve(const double* pts) {
  const int n = n_, d = d_;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j)
      edges_[i * d + j] = pts[(i + 1) * d + j] - pts[j];

  double max_edge_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int l = i; l < n; ++l) {
      double s = 0.0;
      for (int j = 0; j < d; ++j) s += edges_[i * d + j] * edges_[l * d + j];
      gram_[i * n + l] = s;
      gram_[l * n + i] = s;
    }
    max_edge_sq = std::max(max_edge_sq, gram_[i * n + i]);
    rhs_[i] = 0.5 * gram_[i * n + i];
  }
  if (max_edge_sq <= 0.0) throw DegenerateFlat("coincident points");
  const double scale = std::sqrt(max_edge_sq);
  const double pivot_floor = tol_ * scale;

  // Cholesky with a condition estimate from the factor diagonal; fall back
  // to full pivoting when ill-conditioned.
  bool ok = true;
  double min_piv = 0.0, max_piv = 0.0;
  std::copy(gram_.begin(), gram_.end(), chol_.begin());
  for (int i = 0; i < n && ok; ++i) {
    double s = chol_[i * n + i];
    for (int k = 0; k < i; ++k) s -= chol_[i * n + k] * chol_[i * n + k];
    if (s <= pivot_floor * pivot_floor) {
      ok = false;
      break;
    }
    const double piv = std::sqrt(s);
    chol_[i * n + i] = piv;
    min_piv = (i == 0) ? piv : std::min(min_piv, piv);
    max_piv = std::max(max_piv, piv);
    for (int l = i + 1; l < n; ++l) {
      double t = gram_[l * n + i];
      for (int k = 0; k < i; ++k) t -= chol_[l * n + k] * chol_[i * n + k];
      chol_[l * n + i] = t / piv;
    }
  }
  if (ok && (max_piv / min_piv) * (max_piv / min_piv) > 1e12) ok = false;

  if (ok) {
    for (int i = 0; i < n; ++i) {
      double s = rhs_[i];
      for (int k = 0; k < i; ++k) s -= chol_[i * n + k] * alpha_[k];
      alpha_[i] = s / chol_[i * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = alpha_[i];
      for (int k = i + 1; k < n; ++k) s -= chol_[k * n + i] * alpha_[k];
      alpha_[i] = s / chol_[i * n + i];
    }
  } else {
    // full-pivot Gaussian elimination on a fresh copy of the Gram system
    std::copy(gram_.begin(), gram_.end(), chol_.begin());
    std::copy(rhs_.begin(), rhs_.end(), alpha_.begin());
    std::vector<int> col(n);
    for (int i = 0; i < n; ++i) col[i] = i;
    for (int step = 0; step < n; ++step) {
      int pr = step, pc = step;
      double best = 0.0;
      for (int i = step; i < n; ++i)
        for (int j = step; j < n; ++j)
          if (std::abs(chol_[i * n + j]) > best) {
            best = std::abs(chol_[i * n + j]);
            pr = i;
            pc = j;
          }
      if (best <= pivot_floor * pivot_floor)
        throw DegenerateFlat("rank-deficient point set");
      if (pr != step)
        for (int j = 0; j < n; ++j)
          std::swap(chol_[pr * n + j], chol_[step * n + j]);
      if (pr != step) std::swap(alpha_[pr], alpha_[step]);
      if (pc != step) {
        for (int i = 0; i < n; ++i)
          std::swap(chol_[i * n + pc], chol_[i * n + step]);
        std::swap(col[pc], col[step]);
      }
      const double piv = chol_[step * n + step];
      for (int i = step + 1; i < n; ++i) {
        const double f = chol_[i * n + step] / piv;
        for (int j = step; j < n; ++j) chol_[i * n + j] -= f * chol_[step * n + j];
        alpha_[i] -= f * alpha_[step];
      }
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = alpha_[i];
      for (int k = i + 1; k < n; ++k) s -= chol_[i * n + k] * alpha_[k];
      alpha_[i] = s / chol_[i * n + i];
    }
    std::vector<double> unperm(n);
    for (int i = 0; i < n; ++i) unperm[col[i]] = alpha_[i];
    std::copy(unperm.begin(), unperm.end(), alpha_.begin());
  }

  double omega_sq = 0.0;
  for (int j = 0; j < d; ++j) {
    double v = 0.0;
    for (int i = 0; i < n; ++i) v += alpha_[i] * edges_[i * d + j];
    center_[j] = pts[j] + v;
    omega_sq += v * v;
  }
  double delta_c_sq = 0.0;
  for (int j = 0; j < d; ++j) delta_c_sq += center_[j] * center_[j];

  CircumRecord rec;
  rec.omega = std::sqrt(omega_sq);
  rec.delta_c = std::sqrt(delta_c_sq);
  if (n == d) {
    rec.delta = rec.delta_c;
    rec.h = 0.0;
    rec.r = 1.0;
  } else {
    gram_schmidt(edges_.data(), n, d, tol_, frame_.data());
    double par_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < d; ++j) s += center_[j] * frame_[i * d + j];
      par_sq += s * s;
    }
    rec.delta = std::sqrt(par_sq);
    rec.h = std::sqrt(std::max(0.0, delta_c_sq - par_sq));
    rec.r = std::sqrt(std::max(0.0, 1.0 - rec.h * rec.h));
  }
  rec.sigma = rec.delta + rec.omega;
  rec.family = classify(rec.sigma, rec.h, rec.delta_c);
  return rec;
}

CircumRecord circumsphere(const std::vector<double>& pts, int d, int n,
                          double pivot_tol) {
  if (pts.size() != static_cast<std::size_t>((n + 1) * d))
    throw std::domain_error("circumsphere: expected (n+1)*d coordinates");
  CircumSolver solver(d, n, pivot_tol);
  return solver.solve(pts.data());
}

}  // namespace csl
