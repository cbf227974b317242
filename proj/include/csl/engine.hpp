#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csl/analytic.hpp"
#include "csl/histogram.hpp"

namespace csl {

enum class FamilyFilter { C, D, E, All };

// omega_all is the circumradius with no family filter applied; every other
// variable is recorded only for events matching the configured family.
enum class TrackedVar { Omega, Delta, H, DeltaC, Sigma, OmegaAll };

const char* var_name(TrackedVar v);
const char* family_name(FamilyFilter f);
std::optional<TrackedVar> var_from_name(const std::string& s);
std::optional<FamilyFilter> family_from_name(const std::string& s);

enum class SliceVar;
const char* slice_var_name(SliceVar v);
std::optional<SliceVar> slice_var_from_name(const std::string& s);

// Conditional-law probe on family-C events.  DeltaR collects delta/r inside
// a window of omega/r; DeltaC collects the center distance inside a window
// of omega itself.
enum class SliceVar { DeltaR, DeltaC };

struct ConditionalSlice {
  double omega0 = 0.5;
  double eps = 0.01;
  int bins = 200;
  SliceVar var = SliceVar::DeltaR;
};

struct SimConfig {
  BallConfig ball{2, 2};
  std::uint64_t n_events = 1000000;
  std::uint64_t seed = 0;
  int workers = 1;
  int bins = 1000;
  // The run is partitioned into n_blocks independent RNG streams; this
  // invocation executes blocks [block_begin, block_end) (block_end == 0
  // means n_blocks).  Partial runs over disjoint block ranges merge into
  // the same result as one full run.
  int n_blocks = 64;
  int block_begin = 0;
  int block_end = 0;
  FamilyFilter family = FamilyFilter::C;
  std::vector<TrackedVar> vars;  // empty: filled by default_vars()
  bool keep_samples = false;
  std::optional<ConditionalSlice> slice;
  double pivot_tol = 1e-12;
};

std::vector<TrackedVar> default_vars(const SimConfig& cfg);

struct VarStats {
  static constexpr int kPowers = 12;
  double power_sum[kPowers] = {};
  std::uint64_t count = 0;

  void add(double x) {
    double p = 1.0;
    for (double& s : power_sum) {
      p *= x;
      s += p;
    }
    ++count;
  }
  void merge(const VarStats& o) {
    for (int i = 0; i < kPowers; ++i) power_sum[i] += o.power_sum[i];
    count += o.count;
  }
  double moment(int k) const {
    return count ? power_sum[k - 1] / static_cast<double>(count) : 0.0;
  }
};

// One step of the running-maximum chain of the circumradius.
struct MaxStep {
  std::uint64_t index = 0;  // global event index
  double omega = 0.0;
  double flat_residual = 0.0;
};

struct BlockResult {
  std::uint64_t first_index = 0;
  std::uint64_t n_events = 0;
  std::uint64_t family_counts[3] = {0, 0, 0};
  std::uint64_t degenerate = 0;
  std::uint64_t origin_outside = 0;  // family-C events with delta > omega
  std::vector<VarStats> stats;       // parallel to vars
  std::vector<Histogram> hists;      // parallel to vars
  Histogram slice_hist;              // delta_r of in-window family-C events
  std::vector<MaxStep> max_steps;    // block-local running maxima
  std::vector<std::vector<double>> samples;  // parallel to vars if kept
};

struct SimResult {
  SimConfig config;                // vars filled in
  std::vector<BlockResult> blocks; // ascending first_index
};

struct SimAggregate {
  std::uint64_t n_events = 0;
  std::uint64_t family_counts[3] = {0, 0, 0};
  std::uint64_t degenerate = 0;
  std::uint64_t origin_outside = 0;
  std::vector<VarStats> stats;
  std::vector<Histogram> hists;
  Histogram slice_hist;
  std::vector<MaxStep> max_steps;  // global chain
  std::vector<std::vector<double>> samples;  // block order == event order
};

// Runs blocks [block_begin, block_end) on cfg.workers threads.  Identical
// cfg gives an identical result regardless of thread scheduling.
SimResult run_simulation(const SimConfig& cfg);

// Folds blocks in ascending first_index order; the result is independent of
// how the blocks were produced or grouped.
SimAggregate aggregate(const SimResult& res);

// Disjoint block ranges of the same logical run; throws
// std::invalid_argument on config mismatch or overlapping blocks.
SimResult merge(const SimResult& a, const SimResult& b);

// JSON without timestamps: identical runs serialize to identical bytes.
// Holds the config, the aggregate (histograms included), and one summary
// row per block; samples never leave the process.
std::string to_json_string(const SimResult& res);

struct LoadedResult {
  SimConfig config;
  SimAggregate agg;
};
LoadedResult load_result_json(const std::string& text);

}  // namespace csl
