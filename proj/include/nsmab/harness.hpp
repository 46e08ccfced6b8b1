#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsmab/environments.hpp"
#include "nsmab/policy.hpp"

namespace nsmab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One experiment: an environment, a policy with hyperparameters, and a
// bundle of seeded runs. `env` is a synthetic kind name or "replay:PATH".
struct ExperimentConfig {
  std::string env = "stationary";
  std::string policy = "ts";
  int num_arms = 100;
  std::int64_t horizon = 30000;
  int plays = 1;
  int runs = 100;
  std::uint64_t base_seed = 1;
  double delta = 0.001;
  std::map<std::string, double> params;  // policy knobs: gamma, window, batch, ...
  std::int64_t cadence = 0;              // 0 -> max(1, horizon / 1000)
  int threads = 0;                       // 0 -> hardware concurrency

  std::int64_t effective_cadence(std::int64_t horizon_rounds) const;
};

void validate_config(const ExperimentConfig& config);

struct MetricRow {
  std::int64_t t = 0;
  double value = 0.0;       // cumulative regret (synthetic) or reward (replay)
  std::int64_t resets = 0;  // cumulative detection events
};

struct RunRecord {
  int run = 0;
  std::string metric;  // "regret" or "reward"
  std::vector<MetricRow> rows;
  double final_value = 0.0;
  std::int64_t final_resets = 0;
  std::vector<std::int64_t> reset_rounds;
};

// Builds the configured policy. A synthetic environment must be supplied for
// the "oracle" diagnostic policy; every other policy ignores it.
std::unique_ptr<Policy> make_policy(const ExperimentConfig& config,
                                    const SyntheticEnv* oracle_env);

// Runs `config.runs` independent seeded runs (seed = base_seed + index),
// in parallel across a worker pool. Synthetic runs track cumulative regret
// against oracle means; replay runs track cumulative reward and stop when
// the log is exhausted. Deterministic for a fixed config.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config);

// records CSV: policy,run,t,metric,value   (metric in {regret,reward,resets})
void write_records_csv(std::ostream& out, const std::string& policy,
                       const std::vector<RunRecord>& records);
// summary CSV: policy,t,metric,mean,std across runs (population std), rows
// emitted for the cadence points every run reached.
void write_summary_csv(std::ostream& out, const std::string& policy,
                       const std::vector<RunRecord>& records);

// Univariate stream generator for standalone detector experiments.
struct StreamSpec {
  enum class Kind { constant, bernoulli, abrupt };
  Kind kind = Kind::bernoulli;
  std::int64_t horizon = 10000;
  double level = 0.5;  // constant value or Bernoulli mean
  int changes = 0;     // abrupt: equispaced changepoint count
  double low = 0.25;   // abrupt: means alternate low/high, starting low
  double high = 0.75;
  bool noiseless = false;  // abrupt: emit the mean itself instead of a draw

  double mean_at(std::int64_t t) const;
  double draw(std::int64_t t, Rng& rng) const;
};

struct AdwinRunStats {
  double total_error = 0.0;     // sum over rounds of |estimate - true mean|
  std::int64_t detections = 0;  // rounds with at least one shrink
};

// Runs the standalone detector over `runs` seeded streams.
std::vector<AdwinRunStats> adwin_error_experiment(const StreamSpec& spec,
                                                  double delta, int runs,
                                                  std::uint64_t base_seed,
                                                  int threads = 0);

// Deterministic float formatting shared by every CSV writer.
std::string format_value(double v);

// Runs fn(0..jobs-1) on a small thread pool; each job owns its slot.
void parallel_for(int jobs, int threads, const std::function<void(int)>& fn);

}  // namespace nsmab
