#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "csl/analytic.hpp"
#include "csl/engine.hpp"
#include "csl/quadrature.hpp"
#include "csl/specfun.hpp"
#include "csl/stats.hpp"

using namespace csl;

namespace {

SimConfig base_config() {
  SimConfig cfg;
  cfg.ball = BallConfig{2, 2};
  cfg.n_events = 400000;
  cfg.seed = 99;
  cfg.workers = 1;
  cfg.bins = 200;
  cfg.n_blocks = 16;
  return cfg;
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("name round trips") {
  for (TrackedVar v : {TrackedVar::Omega, TrackedVar::Delta, TrackedVar::H,
                       TrackedVar::DeltaC, TrackedVar::Sigma,
                       TrackedVar::OmegaAll}) {
    const auto back = var_from_name(var_name(v));
    REQUIRE(back.has_value());
    CHECK(*back == v);
  }
  CHECK(!var_from_name("bogus").has_value());
  for (FamilyFilter f : {FamilyFilter::C, FamilyFilter::D, FamilyFilter::E,
                         FamilyFilter::All}) {
    const auto back = family_from_name(family_name(f));
    REQUIRE(back.has_value());
    CHECK(*back == f);
  }
  CHECK(!family_from_name("x").has_value());
}

TEST_CASE("configuration validation") {
  SimConfig cfg = base_config();
  cfg.n_blocks = 0;
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);
  cfg = base_config();
  cfg.block_begin = 10;
  cfg.block_end = 5;
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);
  cfg = base_config();
  cfg.block_end = 99;
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);
  cfg = base_config();
  cfg.bins = 0;
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);
  cfg = base_config();
  cfg.n_events = 4;  // fewer events than blocks
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);
  cfg = base_config();
  cfg.ball = BallConfig{2, 3};
  CHECK_THROWS_AS(run_simulation(cfg), std::domain_error);
}

TEST_CASE("containment and center frequencies") {
  const SimConfig cfg = base_config();
  const SimAggregate agg = aggregate(run_simulation(cfg));
  const double N = static_cast<double>(cfg.n_events);

  CHECK(agg.n_events == cfg.n_events);
  CHECK(agg.family_counts[0] + agg.family_counts[1] + agg.family_counts[2] ==
        cfg.n_events);

  // P(contained) = 2/5 at (2,2)
  const double p = 0.4;
  const double phat = agg.family_counts[0] / N;
  CHECK(std::abs(phat - p) <= 4.0 * std::sqrt(p * (1.0 - p) / N));

  // among contained events the center projection falls outside with
  // probability 3/16
  const double nc = static_cast<double>(agg.family_counts[0]);
  const double q = 3.0 / 16.0;
  const double qhat = agg.origin_outside / nc;
  CHECK(std::abs(qhat - q) <= 4.0 * std::sqrt(q * (1.0 - q) / nc));
}

TEST_CASE("histogram totals route every event") {
  SimConfig cfg = base_config();
  cfg.n_events = 100000;
  cfg.vars = {TrackedVar::Omega, TrackedVar::OmegaAll};
  const SimResult res = run_simulation(cfg);
  const SimAggregate agg = aggregate(res);
  REQUIRE(agg.hists.size() == 2);
  // family-filtered variable holds exactly the family-C events
  CHECK(agg.hists[0].total() == agg.family_counts[0]);
  CHECK(agg.stats[0].count == agg.family_counts[0]);
  // unfiltered circumradius sees every event
  CHECK(agg.hists[1].total() == cfg.n_events);
  CHECK(agg.stats[1].count == cfg.n_events);
  // all contained radii live in (0,1): no overflow on the filtered hist
  CHECK(agg.hists[0].underflow() == 0);
  CHECK(agg.hists[0].overflow() == 0);
}

TEST_CASE("byte-identical output across thread counts") {
  SimConfig cfg = base_config();
  cfg.n_events = 80000;
  const std::string one = to_json_string(run_simulation(cfg));
  cfg.workers = 3;
  const std::string three = to_json_string(run_simulation(cfg));
  CHECK(one == three);
  cfg.workers = 1;
  const std::string again = to_json_string(run_simulation(cfg));
  CHECK(one == again);
}

TEST_CASE("split runs merge to the full run") {
  SimConfig cfg = base_config();
  cfg.n_events = 120000;
  cfg.n_blocks = 8;
  const std::string full = to_json_string(run_simulation(cfg));

  SimConfig lo = cfg, mid = cfg, hi = cfg;
  lo.block_begin = 0;
  lo.block_end = 3;
  mid.block_begin = 3;
  mid.block_end = 4;
  hi.block_begin = 4;
  hi.block_end = 8;
  const SimResult rlo = run_simulation(lo);
  const SimResult rmid = run_simulation(mid);
  const SimResult rhi = run_simulation(hi);

  // associativity: both grouping orders give the full result
  const SimResult m1 = merge(merge(rlo, rmid), rhi);
  const SimResult m2 = merge(rlo, merge(rmid, rhi));
  CHECK(to_json_string(m1) == full);
  CHECK(to_json_string(m2) == full);
  // merge order of disjoint ranges does not matter
  const SimResult m3 = merge(rhi, merge(rlo, rmid));
  CHECK(to_json_string(m3) == full);

  // overlapping ranges are rejected
  CHECK_THROWS_AS(merge(rlo, rlo), std::invalid_argument);
  SimConfig other = lo;
  other.seed = 123;
  const SimResult rother = run_simulation(other);
  CHECK_THROWS_AS(merge(rother, rhi), std::invalid_argument);
}

TEST_CASE("uneven block sizes account for every event") {
  SimConfig cfg = base_config();
  cfg.n_events = 1001;
  cfg.n_blocks = 64;
  cfg.bins = 16;
  const SimResult res = run_simulation(cfg);
  REQUIRE(res.blocks.size() == 64);
  std::uint64_t total = 0;
  for (const BlockResult& b : res.blocks) total += b.n_events;
  CHECK(total == 1001);
  // remainder is carried by the final block
  CHECK(res.blocks.back().n_events == 1001 / 64 + 1001 % 64);
  // block first indices tile the range
  std::uint64_t expect = 0;
  for (const BlockResult& b : res.blocks) {
    CHECK(b.first_index == expect);
    expect += b.n_events;
  }
}

TEST_CASE("running maxima form an increasing chain") {
  SimConfig cfg = base_config();
  cfg.n_events = 50000;
  cfg.family = FamilyFilter::All;
  cfg.vars = {TrackedVar::OmegaAll};
  const SimAggregate agg = aggregate(run_simulation(cfg));
  REQUIRE(!agg.max_steps.empty());
  for (std::size_t i = 1; i < agg.max_steps.size(); ++i) {
    CHECK(agg.max_steps[i].omega > agg.max_steps[i - 1].omega);
    CHECK(agg.max_steps[i].index > agg.max_steps[i - 1].index);
  }
  for (const MaxStep& s : agg.max_steps) {
    CHECK(s.index < cfg.n_events);
    CHECK(s.flat_residual >= 0.0);
  }
}

TEST_CASE("flat-offset samples follow their law") {
  SimConfig cfg;
  cfg.ball = BallConfig{3, 1};
  cfg.n_events = 60000;
  cfg.seed = 7;
  cfg.n_blocks = 8;
  cfg.family = FamilyFilter::All;
  cfg.vars = {TrackedVar::H};
  cfg.keep_samples = true;
  const SimAggregate agg = aggregate(run_simulation(cfg));
  REQUIRE(agg.samples.size() == 1);
  std::vector<double> hs = agg.samples[0];
  REQUIRE(hs.size() == cfg.n_events);
  std::sort(hs.begin(), hs.end());
  const double ks = ks_statistic(
      hs, [&](double x) { return cdf_h(std::clamp(x, 0.0, 1.0), cfg.ball); });
  CHECK(ks < ks_critical(0.01, hs.size()));
}

TEST_CASE("conditional slice matches the window-averaged law") {
  SimConfig cfg = base_config();
  cfg.n_events = 400000;
  cfg.slice = ConditionalSlice{0.5, 0.05, 10};
  const SimAggregate agg = aggregate(run_simulation(cfg));
  const Histogram& sh = agg.slice_hist;
  const std::uint64_t total = sh.total();
  REQUIRE(total > 5000);

  // expected bin mass: average the conditional cdf over the window against
  // the Be(nd, n+1) weight
  const int n = cfg.ball.n, d = cfg.ball.d;
  const double lo = cfg.slice->omega0 - cfg.slice->eps;
  const double hi = cfg.slice->omega0 + cfg.slice->eps;
  auto be_pdf = [&](double w) {
    return std::exp((n * d - 1.0) * std::log(w) + n * std::log1p(-w) -
                    ln_beta(n * d, n + 1.0));
  };
  auto window_cdf = [&](double x) {
    // P(delta_r <= x | omega_r in window), by quadrature over the window
    const GaussLegendreRule& rule = gauss_legendre(16);
    double num = 0.0, den = 0.0;
    const double c = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double w = c + hw * rule.nodes[i];
      const double f =
          std::clamp(std::pow(x / (1.0 - w), double(n)), 0.0, 1.0);
      num += rule.weights[i] * be_pdf(w) * f;
      den += rule.weights[i] * be_pdf(w);
    }
    return num / den;
  };

  double chi2 = 0.0;
  int groups = 0;
  for (int i = 0; i < sh.bins(); ++i) {
    const double p =
        window_cdf(sh.right_edge(i)) - window_cdf(sh.left_edge(i));
    const double expect = p * static_cast<double>(total);
    if (expect < 5.0) continue;
    const double obs = static_cast<double>(sh.counts()[i]);
    chi2 += (obs - expect) * (obs - expect) / expect;
    ++groups;
  }
  REQUIRE(groups >= 5);
  CHECK(chi2 < chi2_critical(groups - 1, 0.01));
}

TEST_CASE("center-distance slice is uniform in the shrunken ball") {
  SimConfig cfg;
  cfg.ball = BallConfig{3, 2};
  cfg.n_events = 1500000;
  cfg.seed = 113;
  cfg.workers = 1;
  cfg.bins = 200;
  cfg.n_blocks = 16;
  cfg.slice = ConditionalSlice{0.3, 0.02, 25, SliceVar::DeltaC};
  const SimAggregate agg = aggregate(run_simulation(cfg));
  const Histogram& sh = agg.slice_hist;
  REQUIRE(sh.total() > 4000);

  // Below delta_c = 1-omega the center is uniform in the concentric ball of
  // that radius, so restricted to delta_c <= a with a <= 1-omega for every
  // omega in the window, the law is delta_c^(d-1) on (0,a) with the window
  // dependence cancelled.  Beyond 1-omega a separate tail regime holds (the
  // sphere still fits because it is confined to its flat).
  const int d = cfg.ball.d;
  const double a = 1.0 - (cfg.slice->omega0 + cfg.slice->eps);
  std::uint64_t below = 0;
  int last = -1;
  for (int i = 0; i < sh.bins(); ++i) {
    if (sh.right_edge(i) > a + 1e-12) break;
    below += sh.counts()[i];
    last = i;
  }
  REQUIRE(last >= 5);
  REQUIRE(below > 2000);

  double chi2 = 0.0;
  int groups = 0;
  const double za = std::pow(a, double(d));
  for (int i = 0; i <= last; ++i) {
    const double p = (std::pow(sh.right_edge(i), double(d)) -
                      std::pow(sh.left_edge(i), double(d))) /
                     za;
    const double expect = p * static_cast<double>(below);
    if (expect < 5.0) continue;
    const double obs = static_cast<double>(sh.counts()[i]);
    chi2 += (obs - expect) * (obs - expect) / expect;
    ++groups;
  }
  REQUIRE(groups >= 5);
  CHECK(chi2 < chi2_critical(groups - 1, 0.01));
}

TEST_CASE("serialization round trip") {
  SimConfig cfg = base_config();
  cfg.n_events = 40000;
  cfg.slice = ConditionalSlice{0.5, 0.02, 32};
  const SimResult res = run_simulation(cfg);
  const SimAggregate agg = aggregate(res);
  const std::string text = to_json_string(res);

  const LoadedResult loaded = load_result_json(text);
  CHECK(loaded.config.ball.d == cfg.ball.d);
  CHECK(loaded.config.ball.n == cfg.ball.n);
  CHECK(loaded.config.n_events == cfg.n_events);
  CHECK(loaded.config.seed == cfg.seed);
  CHECK(loaded.config.bins == cfg.bins);
  CHECK(loaded.config.n_blocks == cfg.n_blocks);
  CHECK(loaded.config.family == cfg.family);
  CHECK(loaded.agg.n_events == agg.n_events);
  CHECK(loaded.agg.family_counts[0] == agg.family_counts[0]);
  CHECK(loaded.agg.family_counts[1] == agg.family_counts[1]);
  CHECK(loaded.agg.family_counts[2] == agg.family_counts[2]);
  CHECK(loaded.agg.origin_outside == agg.origin_outside);
  REQUIRE(loaded.agg.stats.size() == agg.stats.size());
  for (std::size_t i = 0; i < agg.stats.size(); ++i) {
    CHECK(loaded.agg.stats[i].count == agg.stats[i].count);
    for (int k = 0; k < VarStats::kPowers; ++k)
      CHECK(loaded.agg.stats[i].power_sum[k] == agg.stats[i].power_sum[k]);
  }
  REQUIRE(loaded.agg.hists.size() == agg.hists.size());
  for (std::size_t i = 0; i < agg.hists.size(); ++i) {
    CHECK(loaded.agg.hists[i].total() == agg.hists[i].total());
    CHECK(loaded.agg.hists[i].counts() == agg.hists[i].counts());
  }
  CHECK(loaded.agg.slice_hist.counts() == agg.slice_hist.counts());
  REQUIRE(loaded.agg.max_steps.size() == agg.max_steps.size());
  for (std::size_t i = 0; i < agg.max_steps.size(); ++i) {
    CHECK(loaded.agg.max_steps[i].index == agg.max_steps[i].index);
    CHECK(loaded.agg.max_steps[i].omega == agg.max_steps[i].omega);
  }
}

TEST_CASE("default variable sets") {
  SimConfig cfg = base_config();
  const std::vector<TrackedVar> dv = default_vars(cfg);
  CHECK(!dv.empty());
  // full flat: no flat offset to track
  CHECK(std::find(dv.begin(), dv.end(), TrackedVar::H) == dv.end());
  cfg.ball = BallConfig{3, 2};
  const std::vector<TrackedVar> dv2 = default_vars(cfg);
  CHECK(std::find(dv2.begin(), dv2.end(), TrackedVar::H) != dv2.end());
}

}  // TEST_SUITE
