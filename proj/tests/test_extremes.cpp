#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "csl/extremes.hpp"
#include "csl/quadrature.hpp"
#include "csl/rng.hpp"

using namespace csl;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_SUITE("extremes") {

TEST_CASE("density integrates to the distribution function") {
  RngStream rng(31, 0);
  for (int rep = 0; rep < 20; ++rep) {
    FrechetParams p;
    p.shape = 0.5 + 2.5 * rng.next_uniform();
    p.scale = 0.2 + 3.0 * rng.next_uniform();
    p.location = 2.0 * rng.next_uniform();
    const bool capped = rep % 2;
    const double cap =
        capped ? p.location + p.scale * (1.0 + 30.0 * rng.next_uniform())
               : kInf;
    const double hi = capped ? cap : p.location + 12.0 * p.scale;
    const double mass = integrate_adaptive(
        [&](double x) { return truncated_pdf(x, p, cap); }, p.location, hi,
        1e-11, 1e-10);
    CHECK(mass == doctest::Approx(truncated_cdf(hi, p, cap)).epsilon(1e-8));
    if (capped)
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));  // all mass below cap
  }
}

TEST_CASE("truncated family reduces to the plain one at infinite cap") {
  const FrechetParams p{1.3, 0.7, 0.2};
  for (double x : {0.3, 0.9, 2.0, 7.5}) {
    CHECK(truncated_pdf(x, p, kInf) ==
          doctest::Approx(frechet_pdf(x, p)).epsilon(1e-14));
    CHECK(truncated_cdf(x, p, kInf) ==
          doctest::Approx(frechet_cdf(x, p)).epsilon(1e-14));
  }
  // with a cap, all mass sits below it
  const double cap = 3.0;
  CHECK(truncated_cdf(cap, p, cap) == doctest::Approx(1.0).epsilon(1e-13));
  const double total = integrate_adaptive(
      [&](double x) { return truncated_pdf(x, p, cap); }, p.location, cap,
      1e-12, 1e-11);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(frechet_pdf(p.location, p) == 0.0);
  CHECK(frechet_cdf(p.location, p) == 0.0);
}

TEST_CASE("quantile inverts the distribution function") {
  const FrechetParams p{0.8, 1.4, 0.5};
  for (double cap : {kInf, 20.0}) {
    for (double u : {0.05, 0.3, 0.5, 0.9, 0.99}) {
      const double x = truncated_quantile(u, p, cap);
      CHECK(truncated_cdf(x, p, cap) == doctest::Approx(u).epsilon(1e-12));
      if (!std::isinf(cap)) CHECK(x < cap);
    }
  }
}

TEST_CASE("mode formula sits at the density peak") {
  for (const FrechetParams& p :
       {FrechetParams{1.0, 1.0, 0.0}, FrechetParams{2.5, 0.6, 1.0},
        FrechetParams{0.7, 2.0, 0.3}}) {
    const double m = frechet_mode(p);
    CHECK(m == doctest::Approx(p.location +
                               p.scale * std::pow(p.shape / (1.0 + p.shape),
                                                  1.0 / p.shape))
                   .epsilon(1e-14));
    const double f0 = frechet_pdf(m, p);
    const double off = 0.02 * (m - p.location);
    CHECK(frechet_pdf(m + off, p) < f0);
    CHECK(frechet_pdf(m - off, p) < f0);
  }
}

TEST_CASE("sampling matches the distribution function") {
  RngStream rng(32, 0);
  const FrechetParams p{1.2, 0.9, 0.1};
  const double cap = 8.0;
  const std::size_t N = 20000;
  int below = 0;
  const double x0 = 1.5;
  for (std::size_t i = 0; i < N; ++i) {
    const double x = sample_truncated(rng, p, cap);
    REQUIRE(x > p.location);
    REQUIRE(x < cap);
    below += (x <= x0);
  }
  const double want = truncated_cdf(x0, p, cap);
  const double se = std::sqrt(want * (1.0 - want) / N);
  CHECK(std::abs(below / double(N) - want) <= 4.0 * se);
}

TEST_CASE("window maxima") {
  const std::vector<double> xs{3, 1, 4, 1, 5, 9, 2, 6};
  CHECK(block_maxima(xs, 2) == std::vector<double>{3, 4, 9, 6});
  CHECK(block_maxima(xs, 3) == std::vector<double>{4, 9});
  CHECK(block_maxima(xs, 8) == std::vector<double>{9});
  CHECK(block_maxima(xs, 9).empty());
  CHECK(block_maxima(xs, 1) == xs);
  // windows compose
  CHECK(block_maxima(block_maxima(xs, 2), 3) == block_maxima(xs, 6));
}

TEST_CASE("synthetic parameter recovery") {
  RngStream rng(33, 0);
  const FrechetParams truth{1.0, 2.0, 0.5};
  std::vector<double> xs(40000);
  for (double& x : xs) x = sample_truncated(rng, truth, kInf);
  const FitResult fit = fit_truncated(xs, kInf, 5);
  REQUIRE(fit.converged);
  CHECK(fit.n_used == xs.size());
  CHECK(fit.n_discarded == 0);
  CHECK(std::abs(fit.params.shape - truth.shape) <= 0.08 * truth.shape);
  CHECK(std::abs(fit.params.scale - truth.scale) <= 0.08 * truth.scale);
  CHECK(std::abs(fit.params.location - truth.location) <= 0.15);
  // histogram cross-fit lands in the same region
  CHECK(std::abs(fit.wls_params.shape - truth.shape) <= 0.2 * truth.shape);
  // empirical mode near the analytic one
  CHECK(std::abs(fit.mode_empirical - frechet_mode(truth)) <= 0.25);
}

TEST_CASE("recovery under truncation") {
  RngStream rng(34, 0);
  const FrechetParams truth{1.0, 2.0, 0.5};
  const double cap = 30.0;
  std::vector<double> raw(40000);
  for (double& x : raw) x = sample_truncated(rng, truth, kInf);
  const FitResult fit = fit_truncated(raw, cap, 5);
  REQUIRE(fit.converged);
  CHECK(fit.n_used + fit.n_discarded == raw.size());
  CHECK(fit.n_discarded > 0);
  CHECK(std::abs(fit.params.shape - truth.shape) <= 0.08 * truth.shape);
  CHECK(std::abs(fit.params.scale - truth.scale) <= 0.08 * truth.scale);
}

TEST_CASE("fit is scale equivariant") {
  RngStream rng(35, 0);
  const FrechetParams truth{1.5, 1.0, 0.3};
  std::vector<double> xs(5000);
  for (double& x : xs) x = sample_truncated(rng, truth, kInf);
  const double c = 7.0;
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = c * xs[i];
  const FitResult fx = fit_truncated(xs, kInf, 2);
  const FitResult fy = fit_truncated(ys, kInf, 2);
  REQUIRE(fx.converged);
  REQUIRE(fy.converged);
  CHECK(fy.params.shape == doctest::Approx(fx.params.shape).epsilon(1e-6));
  CHECK(fy.params.scale ==
        doctest::Approx(c * fx.params.scale).epsilon(1e-6));
  CHECK(fy.params.location ==
        doctest::Approx(c * fx.params.location).epsilon(1e-6));
}

TEST_CASE("degenerate inputs do not converge") {
  const std::vector<double> tiny{1.0, 2.0, 3.0};
  CHECK(!fit_truncated(tiny, kInf, 0).converged);
  const std::vector<double> flat(100, 2.5);
  CHECK(!fit_truncated(flat, kInf, 0).converged);
  const std::vector<double> empty;
  CHECK(!fit_truncated(empty, kInf, 0).converged);
  // everything at or above the cap
  const std::vector<double> high(50, 10.0);
  CHECK(!fit_truncated(high, 5.0, 0).converged);
}

TEST_CASE("window scan on an inverse-uniform tail") {
  // x = 1/u has a unit-index power tail, so maxima of growing windows keep
  // shape near 1 while scale and mode grow linearly in the window length
  RngStream rng(36, 0);
  std::vector<double> xs(60000);
  for (double& x : xs) x = 1.0 / rng.next_uniform();
  const std::vector<std::size_t> ks{20, 40, 80};
  const TailScan scan = tail_scan(xs, ks, 1e4, 11);
  REQUIRE(scan.rows.size() == 3);
  CHECK(scan.complete);
  CHECK(scan.shape_mean > 0.8);
  CHECK(scan.shape_mean < 1.2);
  // maxima of k inverse-uniforms have scale ~ k and mode ~ k/2
  CHECK(scan.scale_slope > 0.6);
  CHECK(scan.scale_slope < 1.4);
  CHECK(scan.mode_slope > 0.3);
  CHECK(scan.mode_slope < 0.7);
  REQUIRE(scan.moment_ratios.size() == 11);
  for (double r : scan.moment_ratios) CHECK(r > 0.0);
  CHECK(scan.max_value >= xs[0]);

  std::ostringstream os;
  write_scan_csv(os, scan);
  const std::string text = os.str();
  CHECK(text.rfind("k,a,s,m,mode,sse,n_maxima\n", 0) == 0);
  // one line per row plus the header
  std::size_t lines = 0;
  for (char ch : text)
    if (ch == '\n') ++lines;
  CHECK(lines == 1 + scan.rows.size());
}

}  // TEST_SUITE
