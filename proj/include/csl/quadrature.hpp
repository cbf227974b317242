#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "csl/errors.hpp"

namespace csl {

// Gauss-Legendre nodes/weights on [-1, 1], computed once per order and cached.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussLegendreRule& gauss_legendre(int order);

template <typename F>
double gl_integrate(F&& f, double a, double b, const GaussLegendreRule& rule) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * acc;
}

// Adaptive bisection driven by the GL8/GL16 discrepancy on each panel.
template <typename F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-12,
                          double rel_tol = 1e-12, int max_depth = 48) {
  const GaussLegendreRule& lo = gauss_legendre(8);
  const GaussLegendreRule& hi = gauss_legendre(16);

  struct Panel {
    double a, b;
    int depth;
  };
  std::vector<Panel> stack{{a, b, 0}};
  double total = 0.0;
  const double scale = std::abs(gl_integrate(f, a, b, hi)) + abs_tol;
  std::size_t panels = 0;
  while (!stack.empty()) {
    if (++panels > 200000)
      throw EvalError("integrate_adaptive: panel budget exhausted");
    Panel p = stack.back();
    stack.pop_back();
    const double coarse = gl_integrate(f, p.a, p.b, lo);
    const double fine = gl_integrate(f, p.a, p.b, hi);
    const double err = std::abs(fine - coarse);
    if (err <= abs_tol || err <= rel_tol * scale || p.depth >= max_depth) {
      if (p.depth >= max_depth &&
          (!std::isfinite(fine) ||
           err > 1e3 * (abs_tol + rel_tol * scale)))
        throw EvalError("integrate_adaptive: panel did not converge");
      total += fine;
    } else {
      const double m = 0.5 * (p.a + p.b);
      stack.push_back({p.a, m, p.depth + 1});
      stack.push_back({m, p.b, p.depth + 1});
    }
  }
  return total;
}

// Integral over (0, 1) on a dyadic mesh refined toward both endpoints,
// GL-128 per panel.  Handles integrable endpoint singularities.
template <typename F>
double integrate_graded_01(F&& f, double tail_cut = 1e-16) {
  const GaussLegendreRule& rule = gauss_legendre(128);
  double total = 0.0;
  // middle panel [1/4, 3/4], then dyadic shells toward 0 and 1
  total += gl_integrate(f, 0.25, 0.75, rule);
  double lo = 0.25, hi = 0.75;
  while (lo > tail_cut) {
    const double nlo = 0.5 * lo;
    total += gl_integrate(f, nlo, lo, rule);
    total += gl_integrate(f, hi, 1.0 - nlo, rule);
    lo = nlo;
    hi = 1.0 - nlo;
  }
  return total;
}

}  // namespace csl
