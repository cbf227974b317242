#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "csl/rng.hpp"

namespace csl {

// Heavy-tailed location-scale family with inverse-power decay of index
// `shape`; block maxima of the circumradius land here.
struct FrechetParams {
  double shape = 1.0;     // a
  double scale = 1.0;     // s
  double location = 0.0;  // m
};

double frechet_pdf(double x, const FrechetParams& p);
double frechet_cdf(double x, const FrechetParams& p);
double frechet_mode(const FrechetParams& p);

// The same law conditioned on x < cap; cap may be +infinity, which recovers
// the untruncated family.
double truncated_pdf(double x, const FrechetParams& p, double cap);
double truncated_cdf(double x, const FrechetParams& p, double cap);
double truncated_quantile(double u, const FrechetParams& p, double cap);
double sample_truncated(RngStream& rng, const FrechetParams& p, double cap);

// Maxima of consecutive length-k windows; a trailing partial window is
// dropped.
std::vector<double> block_maxima(const std::vector<double>& xs, std::size_t k);

struct FitResult {
  FrechetParams params;        // maximum-likelihood estimate
  double nll = 0.0;            // negative log-likelihood at params
  FrechetParams wls_params;    // weighted histogram fit, for cross-checking
  double wls_objective = 0.0;  // Poisson-weighted squared residual sum
  double mode_empirical = 0.0; // histogram peak, parabolic refinement
  std::size_t n_used = 0;      // maxima below the cap
  std::size_t n_discarded = 0; // maxima at or above the cap
  bool converged = false;
};

// Fits the truncated family to block maxima by simplex search with
// deterministic restarts keyed on `seed`.
FitResult fit_truncated(const std::vector<double>& maxima, double cap,
                        std::uint64_t seed = 0);

struct ScanRow {
  std::size_t k = 0;
  FitResult fit;
};

struct TailScan {
  std::vector<ScanRow> rows;
  double scale_slope = 0.0;   // least-squares slope of fitted scale vs k
  double mode_slope = 0.0;    // least-squares slope of empirical mode vs k
  double shape_mean = 0.0;    // over converged fits
  double shape_sd = 0.0;
  std::vector<double> moment_ratios;  // <x^(j+1)>/<x^j>, j = 1..11
  double max_value = 0.0;
  bool complete = false;      // at least three converged fits
};

// Runs fit_truncated over every window length in ks against the one
// unfiltered circumradius sequence.
TailScan tail_scan(const std::vector<double>& xs,
                   const std::vector<std::size_t>& ks, double cap,
                   std::uint64_t seed = 0);

// Header: k,a,s,m,mode,sse,n_maxima
void write_scan_csv(std::ostream& os, const TailScan& scan);

}  // namespace csl
