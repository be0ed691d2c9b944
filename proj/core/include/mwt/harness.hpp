#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <exception>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "mwt/limits.hpp"
#include "mwt/moran.hpp"

namespace mwt {

/// Seed of replicate `index` under `base`. Stable across versions:
/// mix64(base + 0x9e3779b97f4a7c15 * (index + 1)), with mix64 the SplitMix64
/// finalizer. Injective in `index` for a fixed base.
std::uint64_t seed_for_replicate(std::uint64_t base, std::uint64_t index);

/// Runs fn(index) for index in [0, count) on `threads` workers (0 means
/// hardware concurrency). fn must only touch per-index state. The first
/// exception thrown by any worker is rethrown after all workers stop.
template <class Fn>
void for_each_replicate(std::uint64_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads == 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const auto i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  const auto n_workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
  pool.reserve(n_workers);
  for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

struct ExperimentConfig {
  std::int64_t n = 100;
  double mu = 1e-3;
  int m = 2;
  std::uint64_t replicates = 1000;
  std::uint64_t base_seed = 0;
  SimBudget budget;
  std::optional<double> scale;  // nullopt: regime timescale
  std::optional<LimitLaw> comparison;
  std::string output_path;  // prefix for <path>.csv / <path>.json; empty: no files
  double band = kDefaultBorderBand;
  double truncation_cap = 0.01;
  unsigned threads = 1;

  void validate() const;
};

/// Sorted scaled waiting times of the untruncated replicates.
struct EmpiricalDistribution {
  std::vector<double> samples;
  std::size_t count = 0;  // samples.size() + truncated_count
  std::size_t truncated_count = 0;
};

struct ReplicateRecord {
  std::uint64_t index = 0;
  TauSample sample;
  double scaled_tau = 0.0;
};

inline constexpr std::array<double, 7> kSummaryQuantiles{0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99};

struct ExperimentSummary {
  double scale = 1.0;
  std::optional<Regime> regime;
  std::optional<LimitLaw> law;
  std::size_t n_samples = 0;
  std::size_t truncated = 0;
  double truncation_fraction = 0.0;
  double mean = 0.0;
  std::array<double, kSummaryQuantiles.size()> quantiles{};
  std::optional<double> ks;
  double dkw_99 = 0.0;
};

struct ExperimentResult {
  std::vector<ReplicateRecord> records;  // ordered by replicate index
  EmpiricalDistribution distribution;
  ExperimentSummary summary;
};

/// Runs `replicates` independent waiting-time simulations, scales them, and
/// summarizes against the comparison law (or the regime's limit law when the
/// scale is automatic). Throws Stalled, or TruncationCapExceeded when more
/// than `truncation_cap` of the replicates hit their budget.
ExperimentResult run_experiment(const ExperimentConfig& config);

EmpiricalDistribution make_distribution(std::vector<double> samples, std::size_t truncated = 0);

/// Right-continuous ECDF of the untruncated samples.
double ecdf(const EmpiricalDistribution& dist, double t);

/// Two-sided Kolmogorov-Smirnov distance to a continuous law.
double ks_distance(const EmpiricalDistribution& dist, const LimitLaw& law);

/// Dvoretzky-Kiefer-Wolfowitz band sqrt(ln(2 / alpha) / (2 count)).
double dkw_bound(std::size_t count, double alpha);

/// Linear-interpolation (type 7) quantile of sorted samples.
double quantile(const std::vector<double>& sorted, double p);

void write_samples_csv(std::ostream& out, const std::vector<ReplicateRecord>& records);
nlohmann::json config_json(const ExperimentConfig& config);
nlohmann::json regime_json(const Regime& regime, int m, double band);
nlohmann::json summary_json(const ExperimentConfig& config, const ExperimentSummary& summary);

/// Writes <output_path>.csv and <output_path>.json. No-op for an empty path.
void write_outputs(const ExperimentConfig& config, const ExperimentResult& result);

}  // namespace mwt
