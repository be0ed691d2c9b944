#include "mwt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>

#include "mwt/error.hpp"
#include "mwt/rng.hpp"

namespace mwt {

std::uint64_t seed_for_replicate(std::uint64_t base, std::uint64_t index) {
  return mix64(base + 0x9e3779b97f4a7c15ULL * (index + 1));
}

void ExperimentConfig::validate() const {
  if (n < 2) throw InvalidArgument("n must be >= 2");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw InvalidArgument("mu must be finite and >= 0");
  if (m < 1) throw InvalidArgument("m must be >= 1");
  if (replicates < 1) throw InvalidArgument("replicates must be >= 1");
  if (scale && !(*scale > 0.0)) throw InvalidArgument("explicit scale must be positive");
  if (!(truncation_cap >= 0.0 && truncation_cap <= 1.0)) {
    throw InvalidArgument("truncation cap must lie in [0, 1]");
  }
  budget.validate();
}

EmpiricalDistribution make_distribution(std::vector<double> samples, std::size_t truncated) {
  std::sort(samples.begin(), samples.end());
  EmpiricalDistribution dist;
  dist.count = samples.size() + truncated;
  dist.truncated_count = truncated;
  dist.samples = std::move(samples);
  return dist;
}

double ecdf(const EmpiricalDistribution& dist, double t) {
  if (dist.samples.empty()) return 0.0;
  const auto it = std::upper_bound(dist.samples.begin(), dist.samples.end(), t);
  return static_cast<double>(it - dist.samples.begin()) / static_cast<double>(dist.samples.size());
}

double ks_distance(const EmpiricalDistribution& dist, const LimitLaw& law) {
  const auto& x = dist.samples;
  if (x.empty()) throw InvalidArgument("KS distance needs at least one untruncated sample");
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = law.cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double dkw_bound(std::size_t count, double alpha) {
  if (count < 1) throw InvalidArgument("DKW bound needs count >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(count)));
}

double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return std::nan("");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();

  if (config.mu == 0.0) {
    throw Stalled("mu = 0: no mutation can ever occur, tau_" + std::to_string(config.m) +
                  " is infinite");
  }

  ExperimentSummary summary;
  if (config.scale) {
    summary.scale = *config.scale;
  } else {
    summary.regime = classify_regime(static_cast<double>(config.n), config.mu, config.m, config.band);
    summary.scale = summary.regime->timescale;
  }
  if (config.comparison) {
    summary.law = config.comparison;
  } else if (summary.regime) {
    summary.law = limit_law(*summary.regime, config.m);
  }

  ExperimentResult result;
  result.records.resize(config.replicates);
  for_each_replicate(config.replicates, config.threads, [&](std::uint64_t i) {
    Rng rng(seed_for_replicate(config.base_seed, i));
    auto& rec = result.records[i];
    rec.index = i;
    rec.sample = simulate_tau(config.n, config.mu, config.m, config.budget, rng);
    rec.scaled_tau = rec.sample.tau * summary.scale;
  });

  std::vector<double> scaled;
  scaled.reserve(result.records.size());
  std::size_t truncated = 0;
  for (const auto& rec : result.records) {
    if (rec.sample.truncated) {
      ++truncated;
    } else {
      scaled.push_back(rec.scaled_tau);
    }
  }
  result.distribution = make_distribution(std::move(scaled), truncated);

  const auto& samples = result.distribution.samples;
  summary.n_samples = samples.size();
  summary.truncated = truncated;
  summary.truncation_fraction =
      static_cast<double>(truncated) / static_cast<double>(config.replicates);
  if (!samples.empty()) {
    summary.mean = std::accumulate(samples.begin(), samples.end(), 0.0) /
                   static_cast<double>(samples.size());
    for (std::size_t q = 0; q < kSummaryQuantiles.size(); ++q) {
      summary.quantiles[q] = quantile(samples, kSummaryQuantiles[q]);
    }
    summary.dkw_99 = dkw_bound(samples.size(), 0.01);
    if (summary.law) summary.ks = ks_distance(result.distribution, *summary.law);
  }
  result.summary = summary;

  if (summary.truncation_fraction > config.truncation_cap) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu of %llu replicates truncated (%.4g > cap %.4g)", truncated,
                  static_cast<unsigned long long>(config.replicates), summary.truncation_fraction,
                  config.truncation_cap);
    throw TruncationCapExceeded(buf);
  }
  return result;
}

void write_samples_csv(std::ostream& out, const std::vector<ReplicateRecord>& records) {
  out << "replicate_index,raw_tau,scaled_tau,events,fixations,truncated\n";
  char buf[160];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%llu,%d,%d\n",
                  static_cast<unsigned long long>(r.index), r.sample.tau, r.scaled_tau,
                  static_cast<unsigned long long>(r.sample.events), r.sample.fixations,
                  r.sample.truncated ? 1 : 0);
    out << buf;
  }
}

nlohmann::json config_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["n"] = c.n;
  j["mu"] = c.mu;
  j["m"] = c.m;
  j["replicates"] = c.replicates;
  j["seed"] = c.base_seed;
  j["budget_events"] = c.budget.max_events;
  j["budget_time"] = std::isfinite(c.budget.max_time) ? nlohmann::json(c.budget.max_time)
                                                      : nlohmann::json("inf");
  j["scale"] = c.scale ? nlohmann::json(*c.scale) : nlohmann::json("auto");
  j["law"] = c.comparison ? nlohmann::json(c.comparison->describe()) : nlohmann::json("auto");
  j["band"] = c.band;
  j["truncation_cap"] = c.truncation_cap;
  j["threads"] = c.threads;
  j["out"] = c.output_path;
  return j;
}

nlohmann::json regime_json(const Regime& regime, int m, double band) {
  nlohmann::json j;
  j["kind"] = std::string(to_string(regime.kind));
  j["j"] = regime.j;
  j["A"] = regime.A ? nlohmann::json(*regime.A) : nlohmann::json(nullptr);
  j["timescale"] = regime.timescale;
  j["exponent"] = regime.exponent;
  j["band"] = band;
  j["law"] = limit_law(regime, m).describe();
  return j;
}

nlohmann::json summary_json(const ExperimentConfig& config, const ExperimentSummary& s) {
  nlohmann::json j;
  j["config"] = config_json(config);
  j["regime"] = s.regime ? regime_json(*s.regime, config.m, config.band) : nlohmann::json(nullptr);
  j["scale"] = s.scale;
  j["law"] = s.law ? nlohmann::json(s.law->describe()) : nlohmann::json(nullptr);
  j["n_samples"] = s.n_samples;
  j["truncated"] = s.truncated;
  j["truncation_fraction"] = s.truncation_fraction;
  j["mean"] = s.mean;
  j["ks"] = s.ks ? nlohmann::json(*s.ks) : nlohmann::json(nullptr);
  j["dkw_99"] = s.dkw_99;
  nlohmann::json q = nlohmann::json::object();
  for (std::size_t i = 0; i < kSummaryQuantiles.size(); ++i) {
    q[std::to_string(static_cast<int>(std::lround(kSummaryQuantiles[i] * 100)))] = s.quantiles[i];
  }
  j["quantiles"] = q;
  return j;
}

void write_outputs(const ExperimentConfig& config, const ExperimentResult& result) {
  if (config.output_path.empty()) return;
  std::ofstream csv(config.output_path + ".csv", std::ios::binary);
  if (!csv) throw Error("cannot open " + config.output_path + ".csv for writing");
  write_samples_csv(csv, result.records);
  std::ofstream json(config.output_path + ".json", std::ios::binary);
  if (!json) throw Error("cannot open " + config.output_path + ".json for writing");
  json << summary_json(config, result.summary).dump(2) << '\n';
}

}  // namespace mwt
