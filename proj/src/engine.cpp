#include "csl/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>

#include "csl/geometry.hpp"
#include "csl/randvar.hpp"
#include "csl/rng.hpp"

#include <json.hpp>

namespace csl {

namespace {

constexpr double kOmegaAllLo = 1e-3;
constexpr double kOmegaAllHi = 1e9;

// Degenerate point sets are redrawn; the event index stays put.
constexpr int kMaxRedraws = 100;

struct BlockPlan {
  std::uint64_t first = 0;
  std::uint64_t count = 0;
};

BlockPlan plan_block(const SimConfig& cfg, int b) {
  const std::uint64_t evpb = cfg.n_events / cfg.n_blocks;
  BlockPlan p;
  p.first = evpb * static_cast<std::uint64_t>(b);
  p.count = evpb;
  if (b == cfg.n_blocks - 1) p.count += cfg.n_events % cfg.n_blocks;
  return p;
}

Histogram make_hist(TrackedVar v, int bins) {
  if (v == TrackedVar::OmegaAll)
    return Histogram(kOmegaAllLo, kOmegaAllHi, bins, Histogram::Scale::Log);
  return Histogram(0.0, 1.0, bins, Histogram::Scale::Linear);
}

double var_value(TrackedVar v, const CircumRecord& rec) {
  switch (v) {
    case TrackedVar::Omega:
    case TrackedVar::OmegaAll:
      return rec.omega;
    case TrackedVar::Delta:
      return rec.delta;
    case TrackedVar::H:
      return rec.h;
    case TrackedVar::DeltaC:
      return rec.delta_c;
    case TrackedVar::Sigma:
      return rec.sigma;
  }
  return 0.0;
}

bool family_matches(FamilyFilter f, Family fam) {
  switch (f) {
    case FamilyFilter::All:
      return true;
    case FamilyFilter::C:
      return fam == Family::C;
    case FamilyFilter::D:
      return fam == Family::D;
    case FamilyFilter::E:
      return fam == Family::E;
  }
  return false;
}

int effective_block_end(const SimConfig& cfg) {
  return cfg.block_end == 0 ? cfg.n_blocks : cfg.block_end;
}

void validate_sim_config(const SimConfig& cfg) {
  validate(cfg.ball);
  if (cfg.n_blocks < 1) throw std::invalid_argument("SimConfig: n_blocks >= 1");
  const int end = effective_block_end(cfg);
  if (cfg.block_begin < 0 || cfg.block_begin >= end || end > cfg.n_blocks)
    throw std::invalid_argument("SimConfig: bad block range");
  if (cfg.bins < 1) throw std::invalid_argument("SimConfig: bins >= 1");
  if (cfg.workers < 1) throw std::invalid_argument("SimConfig: workers >= 1");
  if (cfg.n_events < static_cast<std::uint64_t>(cfg.n_blocks))
    throw std::invalid_argument("SimConfig: need n_events >= n_blocks");
  if (cfg.slice) {
    const ConditionalSlice& s = *cfg.slice;
    if (!(s.omega0 - s.eps > 0.0 && s.omega0 + s.eps < 1.0) || s.bins < 1)
      throw std::invalid_argument("SimConfig: bad conditional slice");
  }
}

BlockResult run_block(const SimConfig& cfg, int b,
                      const std::vector<TrackedVar>& vars) {
  const int d = cfg.ball.d;
  const int n = cfg.ball.n;
  const BlockPlan plan = plan_block(cfg, b);

  BlockResult res;
  res.first_index = plan.first;
  res.n_events = plan.count;
  res.stats.resize(vars.size());
  res.hists.reserve(vars.size());
  for (TrackedVar v : vars) res.hists.push_back(make_hist(v, cfg.bins));
  if (cfg.slice)
    res.slice_hist = Histogram(0.0, 1.0, cfg.slice->bins);
  if (cfg.keep_samples) res.samples.resize(vars.size());

  RngStream rng(cfg.seed, static_cast<std::uint64_t>(b));
  CircumSolver solver(d, n, cfg.pivot_tol);
  std::vector<double> pts(static_cast<std::size_t>(n + 1) * d);
  double local_max = -1.0;

  for (std::uint64_t e = 0; e < plan.count; ++e) {
    CircumRecord rec;
    int attempts = 0;
    for (;;) {
      for (int i = 0; i <= n; ++i)
        sample_uniform_ball(d, rng, &pts[static_cast<std::size_t>(i) * d]);
      try {
        rec = solver.solve(pts.data());
        break;
      } catch (const DegenerateFlat&) {
        ++res.degenerate;
        if (++attempts >= kMaxRedraws) throw;
      }
    }

    ++res.family_counts[static_cast<int>(rec.family)];
    const bool routed = family_matches(cfg.family, rec.family);
    if (rec.family == Family::C && rec.delta > rec.omega) ++res.origin_outside;

    for (std::size_t v = 0; v < vars.size(); ++v) {
      const bool use = (vars[v] == TrackedVar::OmegaAll) || routed;
      if (!use) continue;
      const double x = var_value(vars[v], rec);
      res.stats[v].add(x);
      res.hists[v].add(x);
      if (cfg.keep_samples) res.samples[v].push_back(x);
    }

    if (cfg.slice && rec.family == Family::C) {
      const ConditionalSlice& sl = *cfg.slice;
      if (sl.var == SliceVar::DeltaR) {
        if (std::abs(rec.omega / rec.r - sl.omega0) <= sl.eps)
          res.slice_hist.add(rec.delta / rec.r);
      } else {
        if (std::abs(rec.omega - sl.omega0) <= sl.eps)
          res.slice_hist.add(rec.delta_c);
      }
    }

    if (rec.omega > local_max) {
      local_max = rec.omega;
      res.max_steps.push_back(
          {plan.first + e, rec.omega, flat_residual(pts.data(), n + 1, d)});
    }
  }
  return res;
}

nlohmann::json hist_to_json(const Histogram& h) {
  return {{"lo", h.lo()},
          {"hi", h.hi()},
          {"bins", h.bins()},
          {"scale", h.scale() == Histogram::Scale::Log ? "log" : "linear"},
          {"counts", h.counts()},
          {"underflow", h.underflow()},
          {"overflow", h.overflow()}};
}

Histogram hist_from_json(const nlohmann::json& j) {
  Histogram h(j.at("lo").get<double>(), j.at("hi").get<double>(),
              j.at("bins").get<int>(),
              j.at("scale").get<std::string>() == "log"
                  ? Histogram::Scale::Log
                  : Histogram::Scale::Linear);
  h.restore(j.at("counts").get<std::vector<std::uint64_t>>(),
            j.at("underflow").get<std::uint64_t>(),
            j.at("overflow").get<std::uint64_t>());
  return h;
}

}  // namespace

const char* var_name(TrackedVar v) {
  switch (v) {
    case TrackedVar::Omega: return "omega";
    case TrackedVar::Delta: return "delta";
    case TrackedVar::H: return "h";
    case TrackedVar::DeltaC: return "delta_c";
    case TrackedVar::Sigma: return "sigma";
    case TrackedVar::OmegaAll: return "omega_all";
  }
  return "?";
}

const char* family_name(FamilyFilter f) {
  switch (f) {
    case FamilyFilter::C: return "C";
    case FamilyFilter::D: return "D";
    case FamilyFilter::E: return "E";
    case FamilyFilter::All: return "all";
  }
  return "?";
}

std::optional<TrackedVar> var_from_name(const std::string& s) {
  for (TrackedVar v : {TrackedVar::Omega, TrackedVar::Delta, TrackedVar::H,
                       TrackedVar::DeltaC, TrackedVar::Sigma,
                       TrackedVar::OmegaAll})
    if (s == var_name(v)) return v;
  return std::nullopt;
}

std::optional<FamilyFilter> family_from_name(const std::string& s) {
  for (FamilyFilter f : {FamilyFilter::C, FamilyFilter::D, FamilyFilter::E,
                         FamilyFilter::All})
    if (s == family_name(f)) return f;
  return std::nullopt;
}

const char* slice_var_name(SliceVar v) {
  return v == SliceVar::DeltaC ? "delta_c" : "delta_r";
}

std::optional<SliceVar> slice_var_from_name(const std::string& s) {
  if (s == "delta_r") return SliceVar::DeltaR;
  if (s == "delta_c") return SliceVar::DeltaC;
  return std::nullopt;
}

std::vector<TrackedVar> default_vars(const SimConfig& cfg) {
  std::vector<TrackedVar> vars{TrackedVar::Omega, TrackedVar::Delta,
                               TrackedVar::Sigma, TrackedVar::DeltaC};
  if (cfg.ball.n < cfg.ball.d) vars.push_back(TrackedVar::H);
  if (cfg.family == FamilyFilter::All) vars.push_back(TrackedVar::OmegaAll);
  return vars;
}

SimResult run_simulation(const SimConfig& cfg) {
  validate_sim_config(cfg);
  SimResult result;
  result.config = cfg;
  if (result.config.vars.empty()) result.config.vars = default_vars(cfg);
  result.config.block_end = effective_block_end(cfg);
  const SimConfig& rc = result.config;

  const int nb = rc.block_end - rc.block_begin;
  result.blocks.resize(nb);

  std::atomic<int> next{rc.block_begin};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const int b = next.fetch_add(1);
      if (b >= rc.block_end) return;
      try {
        result.blocks[b - rc.block_begin] = run_block(rc, b, rc.vars);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int nthreads = std::min(rc.workers, nb);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return result;
}

SimAggregate aggregate(const SimResult& res) {
  const SimConfig& cfg = res.config;
  SimAggregate agg;
  agg.stats.resize(cfg.vars.size());
  agg.hists.reserve(cfg.vars.size());
  for (TrackedVar v : cfg.vars) agg.hists.push_back(make_hist(v, cfg.bins));
  if (cfg.slice) agg.slice_hist = Histogram(0.0, 1.0, cfg.slice->bins);
  if (cfg.keep_samples) agg.samples.resize(cfg.vars.size());

  std::vector<const BlockResult*> order;
  order.reserve(res.blocks.size());
  for (const BlockResult& b : res.blocks) order.push_back(&b);
  std::sort(order.begin(), order.end(),
            [](const BlockResult* a, const BlockResult* b) {
              return a->first_index < b->first_index;
            });

  double running_max = -1.0;
  for (const BlockResult* b : order) {
    agg.n_events += b->n_events;
    for (int i = 0; i < 3; ++i) agg.family_counts[i] += b->family_counts[i];
    agg.degenerate += b->degenerate;
    agg.origin_outside += b->origin_outside;
    for (std::size_t v = 0; v < agg.stats.size(); ++v) {
      agg.stats[v].merge(b->stats[v]);
      agg.hists[v].merge(b->hists[v]);
      if (cfg.keep_samples)
        agg.samples[v].insert(agg.samples[v].end(), b->samples[v].begin(),
                              b->samples[v].end());
    }
    if (cfg.slice) agg.slice_hist.merge(b->slice_hist);
    for (const MaxStep& s : b->max_steps) {
      if (s.omega > running_max) {
        running_max = s.omega;
        agg.max_steps.push_back(s);
      }
    }
  }
  return agg;
}

SimResult merge(const SimResult& a, const SimResult& b) {
  const SimConfig& ca = a.config;
  const SimConfig& cb = b.config;
  const bool same =
      ca.ball.d == cb.ball.d && ca.ball.n == cb.ball.n &&
      ca.n_events == cb.n_events && ca.seed == cb.seed && ca.bins == cb.bins &&
      ca.n_blocks == cb.n_blocks && ca.family == cb.family &&
      ca.vars == cb.vars && ca.keep_samples == cb.keep_samples &&
      ca.slice.has_value() == cb.slice.has_value() &&
      (!ca.slice || (ca.slice->omega0 == cb.slice->omega0 &&
                     ca.slice->eps == cb.slice->eps &&
                     ca.slice->bins == cb.slice->bins &&
                     ca.slice->var == cb.slice->var)) &&
      ca.pivot_tol == cb.pivot_tol;
  if (!same) throw std::invalid_argument("merge: configs differ");

  SimResult out;
  out.config = ca;
  out.config.block_begin = std::min(ca.block_begin, cb.block_begin);
  out.config.block_end = std::max(ca.block_end, cb.block_end);
  out.blocks = a.blocks;
  out.blocks.insert(out.blocks.end(), b.blocks.begin(), b.blocks.end());
  std::sort(out.blocks.begin(), out.blocks.end(),
            [](const BlockResult& x, const BlockResult& y) {
              return x.first_index < y.first_index;
            });
  for (std::size_t i = 1; i < out.blocks.size(); ++i) {
    const BlockResult& prev = out.blocks[i - 1];
    if (out.blocks[i].first_index < prev.first_index + prev.n_events)
      throw std::invalid_argument("merge: overlapping blocks");
  }
  return out;
}

std::string to_json_string(const SimResult& res) {
  const SimConfig& cfg = res.config;
  const SimAggregate agg = aggregate(res);

  nlohmann::json jcfg{{"d", cfg.ball.d},
                      {"n", cfg.ball.n},
                      {"n_events", cfg.n_events},
                      {"seed", cfg.seed},
                      {"bins", cfg.bins},
                      {"n_blocks", cfg.n_blocks},
                      {"block_begin", cfg.block_begin},
                      {"block_end", cfg.block_end},
                      {"family", family_name(cfg.family)},
                      {"pivot_tol", cfg.pivot_tol}};
  nlohmann::json jvars = nlohmann::json::array();
  for (TrackedVar v : cfg.vars) jvars.push_back(var_name(v));
  jcfg["vars"] = jvars;
  if (cfg.slice)
    jcfg["slice"] = {{"omega0", cfg.slice->omega0},
                     {"eps", cfg.slice->eps},
                     {"bins", cfg.slice->bins},
                     {"var", slice_var_name(cfg.slice->var)}};

  nlohmann::json jagg{{"n_events", agg.n_events},
                      {"family_counts",
                       {agg.family_counts[0], agg.family_counts[1],
                        agg.family_counts[2]}},
                      {"degenerate", agg.degenerate},
                      {"origin_outside", agg.origin_outside}};
  nlohmann::json jstats = nlohmann::json::object();
  nlohmann::json jhists = nlohmann::json::object();
  for (std::size_t v = 0; v < cfg.vars.size(); ++v) {
    const VarStats& s = agg.stats[v];
    nlohmann::json jps = nlohmann::json::array();
    for (double p : s.power_sum) jps.push_back(p);
    jstats[var_name(cfg.vars[v])] = {{"count", s.count},
                                     {"power_sums", std::move(jps)}};
    jhists[var_name(cfg.vars[v])] = hist_to_json(agg.hists[v]);
  }
  jagg["stats"] = jstats;
  jagg["histograms"] = jhists;
  if (cfg.slice) jagg["slice_histogram"] = hist_to_json(agg.slice_hist);
  nlohmann::json jmax = nlohmann::json::array();
  for (const MaxStep& s : agg.max_steps)
    jmax.push_back({{"index", s.index},
                    {"omega", s.omega},
                    {"flat_residual", s.flat_residual}});
  jagg["max_steps"] = jmax;

  nlohmann::json jblocks = nlohmann::json::array();
  for (const BlockResult& b : res.blocks)
    jblocks.push_back({{"first_index", b.first_index},
                       {"n_events", b.n_events},
                       {"family_counts",
                        {b.family_counts[0], b.family_counts[1],
                         b.family_counts[2]}},
                       {"degenerate", b.degenerate},
                       {"origin_outside", b.origin_outside}});

  nlohmann::json root{{"config", jcfg}, {"aggregate", jagg}, {"blocks", jblocks}};
  return root.dump(2);
}

LoadedResult load_result_json(const std::string& text) {
  const nlohmann::json root = nlohmann::json::parse(text);
  const nlohmann::json& jcfg = root.at("config");
  LoadedResult out;
  SimConfig& cfg = out.config;
  cfg.ball.d = jcfg.at("d").get<int>();
  cfg.ball.n = jcfg.at("n").get<int>();
  cfg.n_events = jcfg.at("n_events").get<std::uint64_t>();
  cfg.seed = jcfg.at("seed").get<std::uint64_t>();
  cfg.bins = jcfg.at("bins").get<int>();
  cfg.n_blocks = jcfg.at("n_blocks").get<int>();
  cfg.block_begin = jcfg.at("block_begin").get<int>();
  cfg.block_end = jcfg.at("block_end").get<int>();
  const auto fam = family_from_name(jcfg.at("family").get<std::string>());
  if (!fam) throw std::invalid_argument("load_result_json: bad family");
  cfg.family = *fam;
  cfg.pivot_tol = jcfg.at("pivot_tol").get<double>();
  for (const auto& s : jcfg.at("vars")) {
    const auto v = var_from_name(s.get<std::string>());
    if (!v) throw std::invalid_argument("load_result_json: bad var");
    cfg.vars.push_back(*v);
  }
  if (jcfg.contains("slice")) {
    ConditionalSlice s;
    s.omega0 = jcfg["slice"].at("omega0").get<double>();
    s.eps = jcfg["slice"].at("eps").get<double>();
    s.bins = jcfg["slice"].at("bins").get<int>();
    const auto v =
        slice_var_from_name(jcfg["slice"].at("var").get<std::string>());
    if (!v) throw std::invalid_argument("load_result_json: bad slice var");
    s.var = *v;
    cfg.slice = s;
  }

  const nlohmann::json& jagg = root.at("aggregate");
  SimAggregate& agg = out.agg;
  agg.n_events = jagg.at("n_events").get<std::uint64_t>();
  for (int i = 0; i < 3; ++i)
    agg.family_counts[i] = jagg.at("family_counts")[i].get<std::uint64_t>();
  agg.degenerate = jagg.at("degenerate").get<std::uint64_t>();
  agg.origin_outside = jagg.at("origin_outside").get<std::uint64_t>();
  for (std::size_t v = 0; v < cfg.vars.size(); ++v) {
    const nlohmann::json& js = jagg.at("stats").at(var_name(cfg.vars[v]));
    VarStats s;
    s.count = js.at("count").get<std::uint64_t>();
    for (int i = 0; i < VarStats::kPowers; ++i)
      s.power_sum[i] = js.at("power_sums")[i].get<double>();
    agg.stats.push_back(s);
    agg.hists.push_back(
        hist_from_json(jagg.at("histograms").at(var_name(cfg.vars[v]))));
  }
  if (jagg.contains("slice_histogram"))
    agg.slice_hist = hist_from_json(jagg.at("slice_histogram"));
  for (const auto& jm : jagg.at("max_steps"))
    agg.max_steps.push_back({jm.at("index").get<std::uint64_t>(),
                             jm.at("omega").get<double>(),
                             jm.at("flat_residual").get<double>()});
  return out;
}

}  // namespace csl
