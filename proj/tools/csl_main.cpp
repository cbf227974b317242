#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csl/analytic.hpp"
#include "csl/engine.hpp"
#include "csl/errors.hpp"
#include "csl/exact.hpp"
#include "csl/extremes.hpp"
#include "csl/histogram.hpp"
#include "csl/quadrature.hpp"
#include "csl/stats.hpp"
#include "csl/version.hpp"

namespace fs = std::filesystem;
using csl::double_repr;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitVerdict = 3;

std::string iso_timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << content;
}

// The manifest is the only output that carries a timestamp; every numeric
// artifact must be byte-identical across reruns.
void write_manifest(const fs::path& dir, const std::string& command,
                    const std::vector<std::string>& outputs) {
  nlohmann::json j{{"version", csl::kVersion},
                   {"command", command},
                   {"created", iso_timestamp_utc()},
                   {"outputs", outputs}};
  write_file(dir / "manifest.json", j.dump(2) + "\n");
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CSL_DEFAULT_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 0;
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

struct SimOptions {
  int d = 2;
  int n = 2;
  std::uint64_t events = 1000000;
  std::uint64_t seed = default_seed();
  int workers = 1;
  int bins = 1000;
  int blocks = 64;
  std::string family = "C";
  std::string out;
};

void add_sim_options(CLI::App* cmd, SimOptions& o, bool out_required) {
  cmd->add_option("-d,--dim", o.d, "ambient dimension");
  cmd->add_option("-n,--flat-dim", o.n, "point-set dimension (n+1 points)");
  cmd->add_option("-N,--events", o.events, "number of simulated point sets");
  cmd->add_option("--seed", o.seed, "RNG seed (default: $CSL_DEFAULT_SEED or 0)");
  cmd->add_option("--workers", o.workers, "worker threads");
  cmd->add_option("--bins", o.bins, "histogram bins");
  cmd->add_option("--blocks", o.blocks, "independent RNG blocks");
  cmd->add_option("--family", o.family, "family filter: C, D, E, or all")
      ->check(CLI::IsMember({"C", "D", "E", "all"}));
  auto* out = cmd->add_option("--out", o.out, "output directory");
  if (out_required) out->required();
}

csl::SimConfig to_sim_config(const SimOptions& o) {
  csl::SimConfig cfg;
  cfg.ball = {o.d, o.n};
  cfg.n_events = o.events;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  cfg.bins = o.bins;
  cfg.n_blocks = o.blocks;
  cfg.family = *csl::family_from_name(o.family);
  return cfg;
}

int run_simulate(const SimOptions& o, double slice_center, double slice_width,
                 const std::string& slice_var, const std::string& command) {
  csl::SimConfig cfg = to_sim_config(o);
  if (slice_center > 0.0) {
    const auto sv = csl::slice_var_from_name(slice_var);
    if (!sv) {
      std::cerr << "unknown slice variable: " << slice_var << "\n";
      return 1;
    }
    cfg.slice = csl::ConditionalSlice{slice_center, slice_width, 200, *sv};
  }

  const csl::SimResult result = csl::run_simulation(cfg);
  const csl::SimAggregate agg = csl::aggregate(result);

  const fs::path dir(o.out);
  fs::create_directories(dir);
  std::vector<std::string> outputs{"simresult.json"};
  write_file(dir / "simresult.json", csl::to_json_string(result));
  for (std::size_t v = 0; v < result.config.vars.size(); ++v) {
    std::ostringstream os;
    agg.hists[v].write_csv(os);
    const std::string name =
        std::string("hist_") + csl::var_name(result.config.vars[v]) + ".csv";
    write_file(dir / name, os.str());
    outputs.push_back(name);
  }
  if (cfg.slice) {
    std::ostringstream os;
    agg.slice_hist.write_csv(os);
    const std::string name = std::string("hist_slice_") +
                             csl::slice_var_name(cfg.slice->var) + ".csv";
    write_file(dir / name, os.str());
    outputs.push_back(name);
  }
  write_manifest(dir, command, outputs);

  const double total = static_cast<double>(agg.n_events);
  std::cout << "events " << agg.n_events << "  C "
            << agg.family_counts[0] / total << "  D "
            << agg.family_counts[1] / total << "  E "
            << agg.family_counts[2] / total << "  degenerate redraws "
            << agg.degenerate << "\n"
            << "wrote " << (dir / "simresult.json").string() << "\n";
  return 0;
}

int run_pdf(int d, int n, const std::string& var, int grid,
            const std::string& out, const std::string& command) {
  const csl::BallConfig ball{d, n};
  csl::validate(ball);
  if ((var == "h" || var == "r") && n == d)
    throw CLI::ValidationError("--var " + var + " needs n < d");

  const int g = grid > 0 ? grid : (var == "joint" ? 200 : 1000);
  std::ostringstream os;
  if (var == "joint") {
    os << "delta,omega,density\n";
    for (int i = 0; i < g; ++i) {
      const double x = (i + 0.5) / g;
      for (int j = 0; j < g; ++j) {
        const double y = (j + 0.5) / g;
        os << double_repr(x) << ',' << double_repr(y) << ','
           << double_repr(csl::joint_pdf_delta_omega(x, y, ball)) << '\n';
      }
    }
  } else {
    double (*f)(double, const csl::BallConfig&) = nullptr;
    if (var == "h") f = csl::pdf_h;
    else if (var == "r") f = csl::pdf_r;
    else if (var == "delta") f = csl::pdf_delta;
    else if (var == "omega") f = csl::pdf_omega;
    else if (var == "sigma") f = csl::pdf_sigma;
    else if (var == "delta_c") f = csl::pdf_delta_c;
    else
      throw CLI::ValidationError("unknown --var " + var);
    os << "x,density\n";
    for (int i = 0; i < g; ++i) {
      const double x = (i + 0.5) / g;
      os << double_repr(x) << ',' << double_repr(f(x, ball)) << '\n';
    }
  }

  if (out.empty()) {
    std::cout << os.str();
  } else {
    const fs::path dir(out);
    fs::create_directories(dir);
    const std::string name = "pdf_" + var + ".csv";
    write_file(dir / name, os.str());
    write_manifest(dir, command, {name});
    std::cout << "wrote " << (dir / name).string() << "\n";
  }
  return 0;
}

struct BinExpect {
  double prob = 0.0;
};

int run_compare(const std::string& result_path, const std::string& var,
                const std::string& out, const std::string& command) {
  std::ifstream is(result_path, std::ios::binary);
  if (!is) throw CLI::ValidationError("cannot open " + result_path);
  std::stringstream buffer;
  buffer << is.rdbuf();
  const csl::LoadedResult loaded = csl::load_result_json(buffer.str());
  const csl::SimConfig& cfg = loaded.config;

  if (cfg.family != csl::FamilyFilter::C)
    throw CLI::ValidationError("compare needs a family C result");
  const auto vopt = csl::var_from_name(var);
  if (!vopt || *vopt == csl::TrackedVar::OmegaAll)
    throw CLI::ValidationError("compare: unsupported --var " + var);
  std::size_t idx = cfg.vars.size();
  for (std::size_t v = 0; v < cfg.vars.size(); ++v)
    if (cfg.vars[v] == *vopt) idx = v;
  if (idx == cfg.vars.size())
    throw CLI::ValidationError("result does not track " + var);

  const csl::Histogram& hist = loaded.agg.hists[idx];
  const std::uint64_t total = hist.total();
  if (total == 0) throw CLI::ValidationError("empty histogram");

  const csl::BallConfig ball = cfg.ball;
  const csl::GaussLegendreRule& rule = csl::gauss_legendre(8);
  auto bin_prob = [&](int i) {
    const double a = hist.left_edge(i), b = hist.right_edge(i);
    if (*vopt == csl::TrackedVar::Sigma)
      return csl::cdf_sigma(b, ball) - csl::cdf_sigma(a, ball);
    if (*vopt == csl::TrackedVar::H)
      return csl::cdf_h(b, ball) - csl::cdf_h(a, ball);
    double (*f)(double, const csl::BallConfig&) =
        *vopt == csl::TrackedVar::Omega
            ? csl::pdf_omega
            : (*vopt == csl::TrackedVar::Delta ? csl::pdf_delta
                                               : csl::pdf_delta_c);
    return csl::gl_integrate([&](double x) { return f(x, ball); }, a, b, rule);
  };

  // Pooled chi-square plus a binned distribution distance.
  std::vector<double> expected(hist.bins());
  for (int i = 0; i < hist.bins(); ++i)
    expected[i] = bin_prob(i) * static_cast<double>(total);

  double chi2 = 0.0;
  int groups = 0;
  double pool_obs = 0.0, pool_exp = 0.0;
  for (int i = 0; i < hist.bins(); ++i) {
    pool_obs += static_cast<double>(hist.count(i));
    pool_exp += expected[i];
    if (pool_exp >= 5.0) {
      chi2 += (pool_obs - pool_exp) * (pool_obs - pool_exp) / pool_exp;
      ++groups;
      pool_obs = pool_exp = 0.0;
    }
  }
  if (pool_exp > 0.0 && groups > 0) {
    chi2 += (pool_obs - pool_exp) * (pool_obs - pool_exp) / pool_exp;
  }
  const int dof = std::max(groups - 1, 1);
  const double chi2_crit = csl::chi2_critical(dof, 0.01);

  double ks = 0.0, cum_obs = 0.0, cum_exp = 0.0, max_abs_diff = 0.0;
  for (int i = 0; i < hist.bins(); ++i) {
    cum_obs += static_cast<double>(hist.count(i)) / static_cast<double>(total);
    cum_exp += expected[i] / static_cast<double>(total);
    ks = std::max(ks, std::abs(cum_obs - cum_exp));
    const double diff =
        std::abs(hist.density(i, total) -
                 expected[i] / static_cast<double>(total) /
                     (hist.right_edge(i) - hist.left_edge(i)));
    max_abs_diff = std::max(max_abs_diff, diff);
  }
  const double ks_crit = csl::ks_critical(0.01, total);

  const bool pass = chi2 <= chi2_crit && ks <= ks_crit;

  nlohmann::json verdict{{"var", var},
                         {"d", ball.d},
                         {"n", ball.n},
                         {"events", total},
                         {"chi2", chi2},
                         {"chi2_dof", dof},
                         {"chi2_critical", chi2_crit},
                         {"ks_binned", ks},
                         {"ks_critical", ks_crit},
                         {"max_abs_density_diff", max_abs_diff},
                         {"alpha", 0.01},
                         {"pass", pass}};

  if (!out.empty()) {
    const fs::path dir(out);
    fs::create_directories(dir);
    std::ostringstream os;
    os << "bin_left,bin_mid,bin_right,count,expected,residual_sigma\n";
    for (int i = 0; i < hist.bins(); ++i) {
      const double sd = expected[i] > 0.0 ? std::sqrt(expected[i]) : 1.0;
      os << double_repr(hist.left_edge(i)) << ',' << double_repr(hist.mid(i))
         << ',' << double_repr(hist.right_edge(i)) << ',' << hist.count(i)
         << ',' << double_repr(expected[i]) << ','
         << double_repr((static_cast<double>(hist.count(i)) - expected[i]) / sd)
         << '\n';
    }
    write_file(dir / ("residuals_" + var + ".csv"), os.str());
    write_file(dir / ("verdict_" + var + ".json"), verdict.dump(2) + "\n");
    write_manifest(dir, command,
                   {"residuals_" + var + ".csv", "verdict_" + var + ".json"});
  }

  std::cout << verdict.dump(2) << "\n";
  return pass ? 0 : kExitVerdict;
}

int run_containment(std::uint64_t events, std::uint64_t seed, int workers,
               const std::string& out, const std::string& command) {
  std::ostringstream csv;
  csv << "d,n,exact,exact_decimal,estimate,abs_error,four_se,pass\n";
  bool all_pass = true;
  std::cout << "  d   exact                         estimate      |err|/4se\n";
  for (int d = 2; d <= 9; ++d) {
    csl::SimConfig cfg;
    cfg.ball = {d, 2};
    cfg.n_events = events;
    cfg.seed = seed;
    cfg.workers = workers;
    cfg.bins = 10;
    cfg.vars = {csl::TrackedVar::Omega};
    const csl::SimResult res = csl::run_simulation(cfg);
    const csl::SimAggregate agg = csl::aggregate(res);

    const csl::PiRational exact = csl::prob_contained_exact(cfg.ball);
    const double p = csl::to_double(exact);
    const double est =
        static_cast<double>(agg.family_counts[0]) / static_cast<double>(events);
    const double four_se =
        4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(events));
    const bool pass = std::abs(est - p) <= four_se;
    all_pass = all_pass && pass;

    csv << d << ",2," << csl::to_string(exact) << ',' << double_repr(p) << ','
        << double_repr(est) << ',' << double_repr(std::abs(est - p)) << ','
        << double_repr(four_se) << ',' << (pass ? "yes" : "no") << '\n';
    std::cout << "  " << d << "   " << csl::to_string(exact);
    for (std::size_t pad = csl::to_string(exact).size(); pad < 28; ++pad)
      std::cout << ' ';
    std::cout << double_repr(est) << "   " << std::abs(est - p) / four_se
              << (pass ? "  ok" : "  FAIL") << "\n";
  }
  if (!out.empty()) {
    const fs::path dir(out);
    fs::create_directories(dir);
    write_file(dir / "containment.csv", csv.str());
    write_manifest(dir, command, {"containment.csv"});
  }
  return all_pass ? 0 : kExitVerdict;
}

int run_extremes(const SimOptions& o, const std::string& k_list,
                 double omega_max, const std::string& command) {
  csl::SimConfig cfg = to_sim_config(o);
  cfg.family = csl::FamilyFilter::All;
  cfg.vars = {csl::TrackedVar::OmegaAll};
  cfg.keep_samples = true;
  cfg.bins = o.bins;

  std::vector<std::size_t> ks;
  {
    std::stringstream ss(k_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const long v = std::strtol(tok.c_str(), nullptr, 10);
      if (v < 1) throw CLI::ValidationError("bad --k-list entry: " + tok);
      ks.push_back(static_cast<std::size_t>(v));
    }
  }
  if (ks.empty()) throw CLI::ValidationError("--k-list is empty");

  const csl::SimResult res = csl::run_simulation(cfg);
  const csl::SimAggregate agg = csl::aggregate(res);
  const std::vector<double>& omegas = agg.samples[0];

  const csl::TailScan scan = csl::tail_scan(omegas, ks, omega_max, o.seed);

  const fs::path dir(o.out);
  fs::create_directories(dir);
  std::vector<std::string> outputs{"scan.csv", "scan.json"};
  {
    std::ostringstream os;
    csl::write_scan_csv(os, scan);
    write_file(dir / "scan.csv", os.str());
  }
  nlohmann::json jrows = nlohmann::json::array();
  int n_converged = 0;
  for (const csl::ScanRow& row : scan.rows) {
    n_converged += row.fit.converged ? 1 : 0;
    jrows.push_back({{"k", row.k},
                     {"shape", row.fit.params.shape},
                     {"scale", row.fit.params.scale},
                     {"location", row.fit.params.location},
                     {"mode_empirical", row.fit.mode_empirical},
                     {"mode_fitted", csl::frechet_mode(row.fit.params)},
                     {"wls_shape", row.fit.wls_params.shape},
                     {"wls_scale", row.fit.wls_params.scale},
                     {"wls_location", row.fit.wls_params.location},
                     {"wls_objective", row.fit.wls_objective},
                     {"nll", row.fit.nll},
                     {"n_maxima", row.fit.n_used},
                     {"n_discarded", row.fit.n_discarded},
                     {"converged", row.fit.converged}});
  }
  nlohmann::json jscan{{"rows", jrows},
                       {"scale_slope", scan.scale_slope},
                       {"mode_slope", scan.mode_slope},
                       {"shape_mean", scan.shape_mean},
                       {"shape_sd", scan.shape_sd},
                       {"moment_ratios", scan.moment_ratios},
                       {"max_value", scan.max_value},
                       {"complete", scan.complete},
                       {"omega_max", omega_max},
                       {"events", cfg.n_events}};
  write_file(dir / "scan.json", jscan.dump(2) + "\n");

  for (const csl::ScanRow& row : scan.rows) {
    if (!row.fit.converged) continue;
    std::ostringstream os;
    os << "x,density\n";
    const double lo = row.fit.params.location;
    for (int i = 0; i < 400; ++i) {
      const double x = lo + (omega_max - lo) * (i + 0.5) / 400.0;
      os << double_repr(x) << ','
         << double_repr(csl::truncated_pdf(x, row.fit.params, omega_max))
         << '\n';
    }
    const std::string name = "fit_k" + std::to_string(row.k) + ".csv";
    write_file(dir / name, os.str());
    outputs.push_back(name);
  }
  write_manifest(dir, command, outputs);

  std::cout << "windows fitted: " << n_converged << "/" << scan.rows.size()
            << "  scale slope " << scan.scale_slope << "  mode slope "
            << scan.mode_slope << "  shape mean " << scan.shape_mean << "\n"
            << "wrote " << (dir / "scan.json").string() << "\n";
  return n_converged > 0 ? 0 : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random circumsphere laboratory for point sets in the unit ball"};
  app.require_subcommand(1);
  const std::string command = join_args(argc, argv);

  SimOptions sim_opts;
  double slice_center = 0.0, slice_width = 0.01;
  std::string slice_var = "delta_r";
  CLI::App* simulate = app.add_subcommand(
      "simulate", "sample circumspheres and write histograms");
  add_sim_options(simulate, sim_opts, true);
  simulate->add_option("--slice-center", slice_center,
                       "collect the slice variable near this radius value");
  simulate->add_option("--slice-width", slice_width, "slice half-width");
  simulate->add_option(
      "--slice-var", slice_var,
      "delta_r (rescaled offset at fixed omega_r) or delta_c (center "
      "distance at fixed omega)");

  int pdf_d = 2, pdf_n = 2, pdf_grid = 0;
  std::string pdf_var = "omega", pdf_out;
  CLI::App* pdf = app.add_subcommand("pdf", "evaluate analytic densities");
  pdf->add_option("-d,--dim", pdf_d, "ambient dimension");
  pdf->add_option("-n,--flat-dim", pdf_n, "point-set dimension");
  pdf->add_option("--var", pdf_var,
                  "h, r, delta, omega, sigma, delta_c, or joint")
      ->check(CLI::IsMember({"h", "r", "delta", "omega", "sigma", "delta_c",
                             "joint"}));
  pdf->add_option("--grid", pdf_grid, "evaluation points (midpoints of 1/grid cells)");
  pdf->add_option("--out", pdf_out, "output directory (default: stdout)");

  std::string cmp_result, cmp_var = "omega", cmp_out;
  CLI::App* compare = app.add_subcommand(
      "compare", "test a simulation result against the analytic law");
  compare->add_option("--result", cmp_result, "simresult.json path")->required();
  compare->add_option("--var", cmp_var, "tracked variable to test");
  compare->add_option("--out", cmp_out, "output directory");

  std::uint64_t ct_events = 1000000, ct_seed = default_seed();
  int ct_workers = 1;
  std::string ct_out;
  CLI::App* containment = app.add_subcommand(
      "containment", "containment probability, d = 2..9, n = 2: exact vs simulated");
  containment->add_option("-N,--events", ct_events, "events per dimension");
  containment->add_option("--seed", ct_seed, "RNG seed");
  containment->add_option("--workers", ct_workers, "worker threads");
  containment->add_option("--out", ct_out, "output directory");

  SimOptions ext_opts;
  ext_opts.bins = 240;
  std::string k_list = "25,50,75,100,125,150,175,200";
  double omega_max = 250.0;
  CLI::App* extremes = app.add_subcommand(
      "extremes", "block-maxima study of the unfiltered circumradius");
  add_sim_options(extremes, ext_opts, true);
  extremes->add_option("--k-list", k_list, "comma-separated window lengths");
  extremes->add_option("--omega-max", omega_max,
                       "discard maxima at or above this cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (app.got_subcommand(simulate))
      return run_simulate(sim_opts, slice_center, slice_width, slice_var,
                          command);
    if (app.got_subcommand(pdf))
      return run_pdf(pdf_d, pdf_n, pdf_var, pdf_grid, pdf_out, command);
    if (app.got_subcommand(compare))
      return run_compare(cmp_result, cmp_var, cmp_out, command);
    if (app.got_subcommand(containment))
      return run_containment(ct_events, ct_seed, ct_workers, ct_out, command);
    if (app.got_subcommand(extremes))
      return run_extremes(ext_opts, k_list, omega_max, command);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
