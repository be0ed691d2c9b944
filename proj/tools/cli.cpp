#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mwt/error.hpp"
#include "mwt/harness.hpp"
#include "mwt/limits.hpp"

namespace mwt::cli {

namespace {

using nlohmann::json;

// Integer-valued flags accept scientific notation ("1e6") as long as the
// value is integral.
std::int64_t parse_count(const std::string& text, const char* flag) {
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(value) ||
      value != std::floor(value) || value < 0 || value > 9.0e18) {
    throw InvalidArgument(std::string(flag) + " expects a non-negative integer, got '" + text + "'");
  }
  return static_cast<std::int64_t>(value);
}

std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InvalidArgument("--seed expects an unsigned 64-bit integer, got '" + text + "'");
  }
  return value;
}

double parse_real(const std::string& text, const char* flag) {
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw InvalidArgument(std::string(flag) + " expects a number, got '" + text + "'");
  }
  return value;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  const auto colon = std::count(text.begin(), text.end(), ':');
  if (colon == 2) {
    // start:stop:count, inclusive.
    const auto p1 = text.find(':');
    const auto p2 = text.find(':', p1 + 1);
    const double a = parse_real(text.substr(0, p1), "--t-grid");
    const double b = parse_real(text.substr(p1 + 1, p2 - p1 - 1), "--t-grid");
    const auto count = parse_count(text.substr(p2 + 1), "--t-grid");
    if (count < 1) throw InvalidArgument("--t-grid needs at least one point");
    for (std::int64_t i = 0; i < count; ++i) {
      grid.push_back(count == 1 ? a : a + (b - a) * static_cast<double>(i) / (count - 1));
    }
    return grid;
  }
  if (colon != 0) throw InvalidArgument("--t-grid is either a comma list or start:stop:count");
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    grid.push_back(parse_real(text.substr(start, comma - start), "--t-grid"));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return grid;
}

unsigned default_threads() {
  if (const char* env = std::getenv("MWT_THREADS"); env && *env) {
    return static_cast<unsigned>(parse_count(env, "MWT_THREADS"));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Expands a flat JSON object into "--key value" tokens. Booleans become bare
// flags (or nothing when false).
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw InvalidArgument("config file must hold a flat JSON object");
  std::vector<std::string> tokens;
  for (const auto& [key, value] : doc.items()) {
    if (value.is_boolean()) {
      if (value.get<bool>()) tokens.push_back("--" + key);
    } else if (value.is_string()) {
      tokens.push_back("--" + key);
      tokens.push_back(value.get<std::string>());
    } else if (value.is_number()) {
      tokens.push_back("--" + key);
      tokens.push_back(value.dump());
    } else {
      throw InvalidArgument("config key '" + key + "' must be a string, number or boolean");
    }
  }
  return tokens;
}

// Config-file tokens go right after the subcommand so the explicit flags,
// which come later, win under the take-last policy.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path || args.empty()) return args;
  std::vector<std::string> merged;
  merged.push_back(args.front());
  for (auto& t : config_tokens(*path)) merged.push_back(std::move(t));
  merged.insert(merged.end(), args.begin() + 1, args.end());
  return merged;
}

struct RegimeFlags {
  std::string n = "100";
  std::string mu = "1e-3";
  int m = 2;
  double band = kDefaultBorderBand;
  std::string config;

  void attach(CLI::App& app) {
    app.add_option("--n", n, "Population size (scientific notation allowed)")->capture_default_str();
    app.add_option("--mu", mu, "Mutation rate per individual per unit time")->capture_default_str();
    app.add_option("--m", m, "Number of mutations to wait for")->capture_default_str();
    app.add_option("--band", band, "Border band: |ln(mu / N^b)| <= band counts as border")
        ->capture_default_str();
    app.add_option("--config", config, "JSON file of flag values; explicit flags win");
  }

  double population() const { return static_cast<double>(parse_count(n, "--n")); }
  double rate() const { return parse_real(mu, "--mu"); }
};

struct SimulateFlags {
  RegimeFlags regime;
  std::string replicates = "1000";
  std::string seed = "0";
  std::string budget_events = "1e9";
  std::string budget_time = "inf";
  std::string out;
  std::string scale = "auto";
  std::string law = "auto";
  double truncation_cap = 0.01;
  unsigned threads = 1;

  void attach(CLI::App& app, const std::string& default_out) {
    regime.attach(app);
    out = default_out;
    threads = default_threads();
    app.add_option("--replicates", replicates, "Number of independent replicates")->capture_default_str();
    app.add_option("--seed", seed, "Base seed; replicate i uses seed_for_replicate(seed, i)")
        ->capture_default_str();
    app.add_option("--budget-events", budget_events, "Per-replicate cap on effective transitions")
        ->capture_default_str();
    app.add_option("--budget-time", budget_time, "Per-replicate cap on model time")->capture_default_str();
    app.add_option("--out", out, "Output prefix for <out>.csv and <out>.json (empty: no files)")
        ->capture_default_str();
    app.add_option("--scale", scale, "'auto' (regime timescale) or an explicit factor")
        ->capture_default_str();
    app.add_option("--law", law, "'auto' or a law descriptor such as gamma:2, exp:1, "
                                 "hypoexp:1:1.43, powerexp:2, quad:1:2:1")
        ->capture_default_str();
    app.add_option("--truncation-cap", truncation_cap, "Maximum tolerated fraction of truncated replicates")
        ->capture_default_str();
    app.add_option("--threads", threads, "Worker threads (default: MWT_THREADS or hardware concurrency)")
        ->capture_default_str();
  }

  ExperimentConfig resolve() const {
    ExperimentConfig c;
    c.n = static_cast<std::int64_t>(regime.population());
    c.mu = regime.rate();
    c.m = regime.m;
    c.band = regime.band;
    c.replicates = static_cast<std::uint64_t>(parse_count(replicates, "--replicates"));
    c.base_seed = parse_seed(seed);
    c.budget.max_events = static_cast<std::uint64_t>(parse_count(budget_events, "--budget-events"));
    c.budget.max_time = parse_real(budget_time, "--budget-time");
    if (scale != "auto") c.scale = parse_real(scale, "--scale");
    if (law != "auto") c.comparison = LimitLaw::parse(law);
    c.output_path = out;
    c.truncation_cap = truncation_cap;
    c.threads = threads;
    c.validate();
    return c;
  }
};

int cmd_simulate(const SimulateFlags& flags, std::ostream& out) {
  const auto config = flags.resolve();
  const auto result = run_experiment(config);
  write_outputs(config, result);
  out << summary_json(config, result.summary).dump(2) << '\n';
  return kExitOk;
}

int cmd_compare(const SimulateFlags& flags, double alpha, std::optional<double> ks_max,
                std::ostream& out) {
  const auto config = flags.resolve();
  const auto result = run_experiment(config);
  write_outputs(config, result);
  const auto& s = result.summary;
  if (!s.law) throw InvalidArgument("compare needs --law when --scale is explicit");
  if (!s.ks) throw Error("no untruncated samples to compare");
  const double dkw = dkw_bound(s.n_samples, alpha);
  const double threshold = ks_max.value_or(dkw);
  const bool pass = *s.ks <= threshold;
  json report = summary_json(config, s);
  report["alpha"] = alpha;
  report["dkw"] = dkw;
  report["threshold"] = threshold;
  report["pass"] = pass;
  out << report.dump(2) << '\n';
  return pass ? kExitOk : kExitFailure;
}

int cmd_regime(const RegimeFlags& flags, std::ostream& out) {
  const auto regime = classify_regime(flags.population(), flags.rate(), flags.m, flags.band);
  json report;
  report["config"] = {{"n", flags.population()}, {"mu", flags.rate()}, {"m", flags.m}, {"band", flags.band}};
  report["regime"] = regime_json(regime, flags.m, flags.band);
  try {
    const auto asym = small_t_asymptote(regime, flags.m);
    report["small_t"] = {{"power", asym.power}, {"coefficient", asym.coefficient},
                         {"timescale", asym.timescale}};
  } catch (const UnsupportedRegime&) {
    report["small_t"] = nullptr;
  }
  out << report.dump(2) << '\n';
  return kExitOk;
}

int cmd_limit_cdf(const RegimeFlags& flags, const std::string& law_text, const std::string& grid_text,
                  std::ostream& out) {
  json config = {{"law", law_text}, {"t_grid", grid_text}};
  LimitLaw law;
  if (law_text == "auto") {
    const auto regime = classify_regime(flags.population(), flags.rate(), flags.m, flags.band);
    law = limit_law(regime, flags.m);
    config["n"] = flags.population();
    config["mu"] = flags.rate();
    config["m"] = flags.m;
    config["band"] = flags.band;
    config["regime"] = regime_json(regime, flags.m, flags.band);
  } else {
    law = LimitLaw::parse(law_text);
  }
  config["resolved_law"] = law.describe();
  const auto grid = parse_grid(grid_text);
  out << "# " << config.dump() << '\n' << "t,cdf\n";
  char buf[64];
  for (double t : grid) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", t, law.cdf(t));
    out << buf;
  }
  return kExitOk;
}

int cmd_lambda(double A, int j, std::ostream& out) {
  const double value = lambda_j(A, j);
  json report = {{"A", A}, {"j", j}, {"B", std::pow(A, 2.0 * (1.0 - std::ldexp(1.0, -(j - 1))))},
                 {"lambda", value}};
  out << report.dump(2) << '\n';
  return kExitOk;
}

int cmd_qm(double mu, int m, bool asymptotic, std::ostream& out) {
  json report = {{"mu", mu}, {"m", m}, {"method", asymptotic ? "asymptotic" : "exact"}};
  report["q"] = asymptotic ? q_asymptotic(mu, m) : p_recursion(mu, m);
  out << report.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Waiting time for m mutations in the Moran model", "mwt"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  SimulateFlags simulate_flags;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo of tau_m; writes CSV and summary JSON");
  simulate_flags.attach(*simulate, "mwt_tau");

  SimulateFlags compare_flags;
  double alpha = 0.01;
  std::optional<double> ks_max;
  auto* compare = app.add_subcommand("compare", "Simulate and compare against a limit law (KS vs DKW)");
  compare_flags.attach(*compare, "");
  compare->add_option("--alpha", alpha, "DKW confidence level")->capture_default_str();
  compare->add_option("--ks-max", ks_max, "Absolute KS threshold (default: DKW bound)");

  RegimeFlags regime_flags;
  auto* regime = app.add_subcommand("regime", "Classify (N, mu, m) into its asymptotic regime");
  regime_flags.attach(*regime);

  RegimeFlags cdf_flags;
  std::string cdf_law = "auto";
  std::string t_grid;
  auto* limit_cdf = app.add_subcommand("limit-cdf", "Evaluate a limit-law CDF on a grid");
  cdf_flags.attach(*limit_cdf);
  limit_cdf->add_option("--law", cdf_law, "'auto' (from --n/--mu/--m) or a law descriptor")
      ->capture_default_str();
  limit_cdf->add_option("--t-grid", t_grid, "Comma list or start:stop:count")->required();

  double lambda_A = 1.0;
  int lambda_jj = 2;
  std::string lambda_config;
  auto* lambda = app.add_subcommand("lambda", "Rate lambda_j(A) of the border exponential");
  lambda->add_option("--A", lambda_A, "Border constant A > 0")->required();
  lambda->add_option("--j", lambda_jj, "Border index j >= 2")->required();
  lambda->add_option("--config", lambda_config, "JSON file of flag values");

  std::string qm_mu;
  int qm_m = 2;
  bool qm_exact = false;
  bool qm_asymptotic = false;
  std::string qm_config;
  auto* qm = app.add_subcommand("qm", "Probability that one mutant founds an m-fold mutant");
  qm->add_option("--mu", qm_mu, "Mutation rate")->required();
  qm->add_option("--m", qm_m, "Number of mutations")->required();
  auto* exact_flag = qm->add_flag("--exact", qm_exact, "Exact branching recursion (default)");
  qm->add_flag("--asymptotic", qm_asymptotic, "Leading order mu^{1 - 2^{-(m-1)}}")->excludes(exact_flag);
  qm->add_option("--config", qm_config, "JSON file of flag values");

  try {
    auto args = merge_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "mwt: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(simulate_flags, out);
    if (*compare) return cmd_compare(compare_flags, alpha, ks_max, out);
    if (*regime) return cmd_regime(regime_flags, out);
    if (*limit_cdf) return cmd_limit_cdf(cdf_flags, cdf_law, t_grid, out);
    if (*lambda) return cmd_lambda(lambda_A, lambda_jj, out);
    if (*qm) return cmd_qm(parse_real(qm_mu, "--mu"), qm_m, qm_asymptotic, out);
  } catch (const InvalidArgument& e) {
    err << "mwt: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Stalled& e) {
    err << "mwt: stalled: " << e.what() << '\n';
    return kExitFailure;
  } catch (const Error& e) {
    err << "mwt: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "mwt: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace mwt::cli
