#include "csl/extremes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "csl/histogram.hpp"

namespace csl {

namespace {

constexpr double kPenalty = 1e300;
constexpr double kShapeLo = 0.05;
constexpr double kShapeHi = 20.0;

double excess_exponent(const FrechetParams& p, double cap) {
  if (!std::isfinite(cap)) return 0.0;
  return std::pow((cap - p.location) / p.scale, -p.shape);
}

struct NmResult {
  std::array<double, 3> x{};
  double f = kPenalty;
  bool converged = false;
};

template <typename F>
NmResult nelder_mead(F&& f, std::array<double, 3> x0,
                     std::array<double, 3> step, int max_iter, double tol) {
  constexpr int n = 3;
  std::array<std::array<double, 3>, n + 1> v;
  std::array<double, n + 1> fv;
  v[0] = x0;
  fv[0] = f(v[0].data());
  for (int i = 0; i < n; ++i) {
    v[i + 1] = x0;
    v[i + 1][i] += step[i];
    fv[i + 1] = f(v[i + 1].data());
  }

  NmResult res;
  for (int it = 0; it < max_iter; ++it) {
    int lo = 0, hi = 0, nh = 0;
    for (int i = 1; i <= n; ++i) {
      if (fv[i] < fv[lo]) lo = i;
      if (fv[i] > fv[hi]) hi = i;
    }
    for (int i = 0; i <= n; ++i)
      if (i != hi && fv[i] > fv[nh]) nh = i;

    if (std::abs(fv[hi] - fv[lo]) <= tol * (std::abs(fv[lo]) + tol)) {
      res.converged = true;
      break;
    }

    std::array<double, 3> cen{};
    for (int i = 0; i <= n; ++i)
      if (i != hi)
        for (int j = 0; j < n; ++j) cen[j] += v[i][j] / n;

    auto blend = [&](double t) {
      std::array<double, 3> x;
      for (int j = 0; j < n; ++j) x[j] = cen[j] + t * (cen[j] - v[hi][j]);
      return x;
    };

    const std::array<double, 3> xr = blend(1.0);
    const double fr = f(xr.data());
    if (fr < fv[lo]) {
      const std::array<double, 3> xe = blend(2.0);
      const double fe = f(xe.data());
      if (fe < fr) {
        v[hi] = xe;
        fv[hi] = fe;
      } else {
        v[hi] = xr;
        fv[hi] = fr;
      }
    } else if (fr < fv[nh]) {
      v[hi] = xr;
      fv[hi] = fr;
    } else {
      const std::array<double, 3> xc = blend(fr < fv[hi] ? 0.5 : -0.5);
      const double fc = f(xc.data());
      if (fc < std::min(fr, fv[hi])) {
        v[hi] = xc;
        fv[hi] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == lo) continue;
          for (int j = 0; j < n; ++j)
            v[i][j] = v[lo][j] + 0.5 * (v[i][j] - v[lo][j]);
          fv[i] = f(v[i].data());
        }
      }
    }
  }

  int lo = 0;
  for (int i = 1; i <= n; ++i)
    if (fv[i] < fv[lo]) lo = i;
  res.x = v[lo];
  res.f = fv[lo];
  return res;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * (sorted.size() - 1);
  const std::size_t i = static_cast<std::size_t>(pos);
  if (i + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - i;
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

// Peak of a parabola through the argmax bin and its neighbors.
double histogram_mode(const Histogram& h) {
  int best = 0;
  for (int i = 1; i < h.bins(); ++i)
    if (h.count(i) > h.count(best)) best = i;
  if (best == 0 || best + 1 >= h.bins()) return h.mid(best);
  const double cm = static_cast<double>(h.count(best - 1));
  const double c0 = static_cast<double>(h.count(best));
  const double cp = static_cast<double>(h.count(best + 1));
  const double denom = cm - 2.0 * c0 + cp;
  if (denom >= 0.0) return h.mid(best);
  const double shift = 0.5 * (cm - cp) / denom;
  const double w = h.right_edge(best) - h.left_edge(best);
  return h.mid(best) + shift * w;
}

struct Ols {
  double slope = 0.0;
  double intercept = 0.0;
};

Ols ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  Ols o;
  if (n < 2) return o;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) return o;
  o.slope = (n * sxy - sx * sy) / det;
  o.intercept = (sy - o.slope * sx) / n;
  return o;
}

}  // namespace

double frechet_pdf(double x, const FrechetParams& p) {
  if (!(x > p.location)) return 0.0;
  const double lu = std::log((x - p.location) / p.scale);
  const double lf = std::log(p.shape / p.scale) - (1.0 + p.shape) * lu -
                    std::exp(-p.shape * lu);
  return std::isfinite(lf) ? std::exp(lf) : 0.0;
}

double frechet_cdf(double x, const FrechetParams& p) {
  if (!(x > p.location)) return 0.0;
  const double u = (x - p.location) / p.scale;
  return std::exp(-std::pow(u, -p.shape));
}

double frechet_mode(const FrechetParams& p) {
  return p.location +
         p.scale * std::pow(p.shape / (1.0 + p.shape), 1.0 / p.shape);
}

double truncated_pdf(double x, const FrechetParams& p, double cap) {
  if (!(x > p.location) || x >= cap) return 0.0;
  return frechet_pdf(x, p) * std::exp(excess_exponent(p, cap));
}

double truncated_cdf(double x, const FrechetParams& p, double cap) {
  if (!(x > p.location)) return 0.0;
  if (x >= cap) return 1.0;
  const double u = (x - p.location) / p.scale;
  return std::exp(excess_exponent(p, cap) - std::pow(u, -p.shape));
}

double truncated_quantile(double u, const FrechetParams& p, double cap) {
  if (!(u > 0.0 && u < 1.0))
    throw std::domain_error("truncated_quantile: u must be in (0, 1)");
  const double v = excess_exponent(p, cap) - std::log(u);
  return p.location + p.scale * std::pow(v, -1.0 / p.shape);
}

double sample_truncated(RngStream& rng, const FrechetParams& p, double cap) {
  return truncated_quantile(rng.next_uniform(), p, cap);
}

std::vector<double> block_maxima(const std::vector<double>& xs, std::size_t k) {
  if (k == 0) throw std::domain_error("block_maxima: k must be >= 1");
  std::vector<double> out;
  out.reserve(xs.size() / k);
  for (std::size_t start = 0; start + k <= xs.size(); start += k)
    out.push_back(*std::max_element(xs.begin() + start, xs.begin() + start + k));
  return out;
}

FitResult fit_truncated(const std::vector<double>& maxima, double cap,
                        std::uint64_t seed) {
  FitResult res;
  std::vector<double> xs;
  xs.reserve(maxima.size());
  for (double x : maxima) {
    if (x < cap)
      xs.push_back(x);
    else
      ++res.n_discarded;
  }
  res.n_used = xs.size();
  if (xs.size() < 8) return res;

  std::sort(xs.begin(), xs.end());
  const double min_x = xs.front();
  const double max_x = xs.back();
  if (!(max_x > min_x)) return res;
  const double median = quantile_sorted(xs, 0.5);

  const std::size_t nobs = xs.size();
  auto nll = [&](const double* q) {
    const double a = q[0], s = q[1], m = q[2];
    if (!(a > kShapeLo && a < kShapeHi) || !(s > 1e-8) || !(m >= 0.0) ||
        !(m < min_x))
      return kPenalty;
    const FrechetParams p{a, s, m};
    const double c = excess_exponent(p, cap);
    double acc = 0.0;
    for (double x : xs) {
      const double lu = std::log((x - m) / s);
      acc += (1.0 + a) * lu + std::exp(-a * lu);
    }
    acc += nobs * (std::log(s) - std::log(a) - c);
    return std::isfinite(acc) ? acc : kPenalty;
  };

  RngStream rng(seed, 0x7a1Cull);
  NmResult best;
  for (int restart = 0; restart < 5; ++restart) {
    double a0 = 1.0, m0 = 0.5 * min_x;
    double s0 = std::max((median - m0) * 0.6931471805599453, 1e-4);
    if (restart > 0) {
      a0 *= std::exp(1.2 * (rng.next_uniform() - 0.5));
      s0 *= std::exp(1.2 * (rng.next_uniform() - 0.5));
      m0 = min_x * 0.95 * rng.next_uniform();
    }
    const std::array<double, 3> x0{a0, s0, m0};
    const std::array<double, 3> step{0.3 * a0, 0.3 * s0,
                                     0.3 * (min_x - m0) + 1e-6};
    NmResult r = nelder_mead(nll, x0, step, 4000, 1e-12);
    if (r.f < best.f || (r.converged && !best.converged && r.f < best.f + 1e-9))
      best = r;
  }
  if (best.f >= kPenalty) return res;

  res.params = {best.x[0], best.x[1], best.x[2]};
  res.nll = best.f;
  res.converged = best.converged;

  // Weighted histogram cross-fit.  Without a truncation cap the range is
  // quantile-bounded; linear bins over [0, max] cannot resolve the body of a
  // heavy-tailed sample.
  const double wls_hi = std::isfinite(cap)
                            ? cap
                            : std::min(max_x * 1.0000001,
                                       4.0 * quantile_sorted(xs, 0.9));
  Histogram wh(0.0, wls_hi, 160);
  for (double x : xs) wh.add(x);
  auto wls = [&](const double* q) {
    const double a = q[0], s = q[1], m = q[2];
    if (!(a > kShapeLo && a < kShapeHi) || !(s > 1e-8) || !(m >= 0.0) ||
        !(m < min_x))
      return kPenalty;
    const FrechetParams p{a, s, m};
    double acc = 0.0;
    for (int i = 0; i < wh.bins(); ++i) {
      const double w = wh.right_edge(i) - wh.left_edge(i);
      const double pred =
          static_cast<double>(nobs) * w * truncated_pdf(wh.mid(i), p, cap);
      const double obs = static_cast<double>(wh.count(i));
      acc += (obs - pred) * (obs - pred) / std::max(obs, 1.0);
    }
    return std::isfinite(acc) ? acc : kPenalty;
  };
  const std::array<double, 3> wstep{0.2 * res.params.shape,
                                    0.2 * res.params.scale,
                                    0.2 * (min_x - res.params.location) + 1e-6};
  NmResult wr = nelder_mead(
      wls, {res.params.shape, res.params.scale, res.params.location}, wstep,
      3000, 1e-12);
  res.wls_params = {wr.x[0], wr.x[1], wr.x[2]};
  res.wls_objective = wr.f;

  Histogram mh(0.0, std::min(wls_hi, 5.0 * median), 512);
  for (double x : xs) mh.add(x);
  res.mode_empirical = histogram_mode(mh);
  return res;
}

TailScan tail_scan(const std::vector<double>& xs,
                   const std::vector<std::size_t>& ks, double cap,
                   std::uint64_t seed) {
  TailScan scan;
  if (xs.empty()) return scan;

  std::array<double, 13> power_sums{};
  double mx = xs.front();
  for (double x : xs) {
    double p = 1.0;
    for (std::size_t j = 1; j < power_sums.size(); ++j) {
      p *= x;
      power_sums[j] += p;
    }
    mx = std::max(mx, x);
  }
  scan.max_value = mx;
  for (int j = 1; j <= 11; ++j)
    scan.moment_ratios.push_back(
        power_sums[j] > 0.0 ? power_sums[j + 1] / power_sums[j] : 0.0);

  std::vector<double> kx, sc, md, shapes;
  for (std::size_t k : ks) {
    ScanRow row;
    row.k = k;
    row.fit = fit_truncated(block_maxima(xs, k), cap, seed + k);
    if (row.fit.converged) {
      kx.push_back(static_cast<double>(k));
      sc.push_back(row.fit.params.scale);
      md.push_back(row.fit.mode_empirical);
      shapes.push_back(row.fit.params.shape);
    }
    scan.rows.push_back(row);
  }

  scan.scale_slope = ols_fit(kx, sc).slope;
  scan.mode_slope = ols_fit(kx, md).slope;
  if (!shapes.empty()) {
    const double mean =
        std::accumulate(shapes.begin(), shapes.end(), 0.0) / shapes.size();
    double ss = 0.0;
    for (double a : shapes) ss += (a - mean) * (a - mean);
    scan.shape_mean = mean;
    scan.shape_sd =
        shapes.size() > 1 ? std::sqrt(ss / (shapes.size() - 1)) : 0.0;
  }
  scan.complete = shapes.size() >= 3;
  return scan;
}

void write_scan_csv(std::ostream& os, const TailScan& scan) {
  os << "k,a,s,m,mode,sse,n_maxima\n";
  for (const ScanRow& row : scan.rows) {
    os << row.k << ',' << double_repr(row.fit.params.shape) << ','
       << double_repr(row.fit.params.scale) << ','
       << double_repr(row.fit.params.location) << ','
       << double_repr(row.fit.mode_empirical) << ','
       << double_repr(row.fit.wls_objective) << ',' << row.fit.n_used << '\n';
  }
}

}  // namespace csl
