#include "nsmab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <thread>

#include "nsmab/adwin.hpp"
#include "nsmab/base_bandits.hpp"
#include "nsmab/baselines.hpp"
#include "nsmab/meta_bandits.hpp"

namespace nsmab {

namespace {

constexpr const char* kReplayPrefix = "replay:";

bool is_replay(const std::string& env) {
  return env.rfind(kReplayPrefix, 0) == 0;
}

std::string replay_path(const std::string& env) {
  return env.substr(std::string(kReplayPrefix).size());
}

double param_or(const std::map<std::string, double>& params,
                const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

// Diagnostic policy that plays the true top-L arms of a synthetic
// environment; its regret is identically zero.
class OraclePolicy : public Policy {
 public:
  explicit OraclePolicy(const SyntheticEnv& env, int plays)
      : env_(&env), plays_(plays) {}

  std::vector<int> select(std::int64_t t, Rng&) override {
    std::vector<double> means(static_cast<size_t>(env_->num_arms()));
    for (int i = 0; i < env_->num_arms(); ++i) {
      means[static_cast<size_t>(i)] = env_->mean(i, t);
    }
    return top_l(means, plays_);
  }
  void update(std::int64_t, const RoundOutcome&) override {}
  void reset() override {}

 private:
  const SyntheticEnv* env_;
  int plays_;
};

std::unique_ptr<Policy> make_base(const std::string& name,
                                  const ExperimentConfig& config) {
  if (name == "ts") {
    return std::make_unique<MptsPolicy>(config.num_arms, config.plays);
  }
  if (name == "klucb") {
    return std::make_unique<MpklucbPolicy>(config.num_arms, config.plays);
  }
  if (name == "eucb") {
    return std::make_unique<ElimUcbPolicy>(config.num_arms, config.plays,
                                           config.horizon);
  }
  throw ConfigError("unknown base policy: " + name);
}

struct RunResult {
  RunRecord record;
};

}  // namespace

std::int64_t ExperimentConfig::effective_cadence(
    std::int64_t horizon_rounds) const {
  if (cadence > 0) return cadence;
  return std::max<std::int64_t>(1, horizon_rounds / 1000);
}

void validate_config(const ExperimentConfig& config) {
  if (config.runs < 1) throw ConfigError("runs must be >= 1");
  if (config.num_arms < 1) throw ConfigError("K must be >= 1");
  if (config.plays < 1 || config.plays > config.num_arms) {
    throw ConfigError("L must satisfy 1 <= L <= K");
  }
  if (config.horizon < 1) throw ConfigError("T must be >= 1");
  if (!(config.delta > 0.0 && config.delta < 1.0)) {
    throw ConfigError("delta must be in (0,1)");
  }
  if (config.cadence < 0) throw ConfigError("cadence must be >= 0");
  if (!is_replay(config.env)) {
    parse_env_kind(config.env);  // throws on unknown kinds
  }
  for (const auto& [key, value] : config.params) {
    if (key == "gamma" && !(value > 0.0 && value <= 1.0)) {
      throw ConfigError("gamma must be in (0,1]");
    }
    if ((key == "window" || key == "batch" || key == "check_stride") &&
        value < 1.0) {
      throw ConfigError(key + " must be >= 1");
    }
  }
}

std::unique_ptr<Policy> make_policy(const ExperimentConfig& config,
                                    const SyntheticEnv* oracle_env) {
  const std::string& name = config.policy;
  const auto stride =
      static_cast<std::int64_t>(param_or(config.params, "check_stride", 1.0));
  if (name.rfind("adr-", 0) == 0 || name.rfind("ads-", 0) == 0) {
    const auto mode = name.rfind("adr-", 0) == 0 ? OnChange::reset_all
                                                 : OnChange::keep_suffix;
    auto base = make_base(name.substr(4), config);
    return std::make_unique<AdaptiveWindowBandit>(
        std::move(base), config.num_arms, config.delta, mode, stride);
  }
  if (name == "ts" || name == "klucb" || name == "eucb") {
    return make_base(name, config);
  }
  if (name == "ducb") {
    return std::make_unique<DucbPolicy>(config.num_arms, config.plays,
                                        param_or(config.params, "gamma", 0.9));
  }
  if (name == "swts") {
    return std::make_unique<SwtsPolicy>(
        config.num_arms, config.plays,
        static_cast<std::int64_t>(param_or(config.params, "window", 1000.0)));
  }
  if (name == "rexp3") {
    return std::make_unique<Rexp3Policy>(
        config.num_arms, config.plays,
        static_cast<std::int64_t>(param_or(config.params, "batch", 1000.0)));
  }
  if (name == "oracle") {
    if (!oracle_env) {
      throw ConfigError("oracle policy needs a synthetic environment");
    }
    return std::make_unique<OraclePolicy>(*oracle_env, config.plays);
  }
  throw ConfigError("unknown policy: " + name);
}

void parallel_for(int jobs, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  threads = std::min(threads, jobs);
  if (threads <= 1) {
    for (int j = 0; j < jobs; ++j) fn(j);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int j = next.fetch_add(1);
        if (j >= jobs || failed.load()) return;
        try {
          fn(j);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

RunRecord run_synthetic(const ExperimentConfig& config,
                        const SyntheticEnv& env, int run_index) {
  RunRecord record;
  record.run = run_index;
  record.metric = "regret";
  Rng rng(config.base_seed + static_cast<std::uint64_t>(run_index));
  auto policy = make_policy(config, &env);
  const std::int64_t cadence = config.effective_cadence(config.horizon);

  std::vector<double> means(static_cast<size_t>(config.num_arms));
  double cumulative = 0.0;
  for (std::int64_t t = 1; t <= config.horizon; ++t) {
    const auto selection = policy->select(t, rng);
    RoundOutcome outcome;
    outcome.arms = selection;
    outcome.rewards.reserve(selection.size());
    for (int arm : selection) {
      outcome.rewards.push_back(env.sample(arm, t, rng));
    }
    policy->update(t, outcome);
    for (int i = 0; i < config.num_arms; ++i) {
      means[static_cast<size_t>(i)] = env.mean(i, t);
    }
    cumulative += regret_step(means, selection);
    if (t % cadence == 0 || t == config.horizon) {
      record.rows.push_back(
          {t, cumulative,
           static_cast<std::int64_t>(policy->detection_rounds().size())});
    }
  }
  record.final_value = cumulative;
  const auto resets = policy->detection_rounds();
  record.reset_rounds.assign(resets.begin(), resets.end());
  record.final_resets = static_cast<std::int64_t>(record.reset_rounds.size());
  return record;
}

RunRecord run_replay(const ExperimentConfig& config, const ReplayLog& log,
                     int run_index) {
  RunRecord record;
  record.run = run_index;
  record.metric = "reward";
  Rng rng(config.base_seed + static_cast<std::uint64_t>(run_index));

  ExperimentConfig adjusted = config;
  adjusted.num_arms = log.num_arms();
  adjusted.horizon = std::max<std::int64_t>(1, log.size());
  auto policy = make_policy(adjusted, nullptr);
  const std::int64_t cadence = config.effective_cadence(adjusted.horizon);

  ReplayCursor cursor(log);
  double cumulative = 0.0;
  std::int64_t t = 0;
  for (;;) {
    const auto selection = policy->select(t + 1, rng);
    const auto outcome = cursor.step(selection);
    if (!outcome) break;  // log exhausted; not an error
    ++t;
    for (double r : outcome->rewards) cumulative += r;
    policy->update(t, *outcome);
    if (t % cadence == 0) {
      record.rows.push_back(
          {t, cumulative,
           static_cast<std::int64_t>(policy->detection_rounds().size())});
    }
  }
  if (record.rows.empty() || record.rows.back().t != t) {
    record.rows.push_back(
        {t, cumulative,
         static_cast<std::int64_t>(policy->detection_rounds().size())});
  }
  record.final_value = cumulative;
  const auto resets = policy->detection_rounds();
  record.reset_rounds.assign(resets.begin(), resets.end());
  record.final_resets = static_cast<std::int64_t>(record.reset_rounds.size());
  return record;
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  std::vector<RunRecord> records(static_cast<size_t>(config.runs));
  if (is_replay(config.env)) {
    const ReplayLog log = ReplayLog::load(replay_path(config.env),
                                          config.num_arms);
    parallel_for(config.runs, config.threads, [&](int r) {
      records[static_cast<size_t>(r)] = run_replay(config, log, r);
    });
  } else {
    const SyntheticEnv env(parse_env_kind(config.env), config.num_arms,
                           config.horizon);
    parallel_for(config.runs, config.threads, [&](int r) {
      records[static_cast<size_t>(r)] = run_synthetic(config, env, r);
    });
  }
  return records;
}

std::string format_value(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

void write_records_csv(std::ostream& out, const std::string& policy,
                       const std::vector<RunRecord>& records) {
  out << "policy,run,t,metric,value\n";
  for (const auto& record : records) {
    for (const auto& row : record.rows) {
      out << policy << ',' << record.run << ',' << row.t << ','
          << record.metric << ',' << format_value(row.value) << '\n';
      out << policy << ',' << record.run << ',' << row.t << ",resets,"
          << row.resets << '\n';
    }
  }
}

void write_summary_csv(std::ostream& out, const std::string& policy,
                       const std::vector<RunRecord>& records) {
  out << "policy,t,metric,mean,std\n";
  if (records.empty()) return;
  // Cadence points present in every run (replay runs can end early).
  size_t common = records.front().rows.size();
  for (const auto& record : records) common = std::min(common, record.rows.size());
  const auto runs = static_cast<double>(records.size());
  for (size_t i = 0; i < common; ++i) {
    const std::int64_t t = records.front().rows[i].t;
    bool aligned = true;
    for (const auto& record : records) aligned &= record.rows[i].t == t;
    if (!aligned) break;
    double value_mean = 0.0;
    double reset_mean = 0.0;
    for (const auto& record : records) {
      value_mean += record.rows[i].value;
      reset_mean += static_cast<double>(record.rows[i].resets);
    }
    value_mean /= runs;
    reset_mean /= runs;
    double value_var = 0.0;
    double reset_var = 0.0;
    for (const auto& record : records) {
      const double dv = record.rows[i].value - value_mean;
      const double dr = static_cast<double>(record.rows[i].resets) - reset_mean;
      value_var += dv * dv;
      reset_var += dr * dr;
    }
    value_var /= runs;
    reset_var /= runs;
    out << policy << ',' << t << ',' << records.front().metric << ','
        << format_value(value_mean) << ',' << format_value(std::sqrt(value_var))
        << '\n';
    out << policy << ',' << t << ",resets," << format_value(reset_mean) << ','
        << format_value(std::sqrt(reset_var)) << '\n';
  }
}

double StreamSpec::mean_at(std::int64_t t) const {
  switch (kind) {
    case Kind::constant:
    case Kind::bernoulli:
      return level;
    case Kind::abrupt: {
      int flips = 0;
      for (int j = 1; j <= changes; ++j) {
        const std::int64_t point =
            horizon * static_cast<std::int64_t>(j) / (changes + 1);
        if (t > point) ++flips;
      }
      return flips % 2 == 0 ? low : high;
    }
  }
  return level;
}

double StreamSpec::draw(std::int64_t t, Rng& rng) const {
  if (kind == Kind::constant || (kind == Kind::abrupt && noiseless)) {
    return mean_at(t);
  }
  return rng.next_bernoulli(mean_at(t)) ? 1.0 : 0.0;
}

std::vector<AdwinRunStats> adwin_error_experiment(const StreamSpec& spec,
                                                  double delta, int runs,
                                                  std::uint64_t base_seed,
                                                  int threads) {
  std::vector<AdwinRunStats> stats(static_cast<size_t>(runs));
  parallel_for(runs, threads, [&](int r) {
    Rng rng(base_seed + static_cast<std::uint64_t>(r));
    AdwinDetector detector(delta, 1, spec.horizon);
    AdwinRunStats s;
    for (std::int64_t t = 1; t <= spec.horizon; ++t) {
      const auto report = detector.observe(spec.draw(t, rng));
      if (report.detected) ++s.detections;
      s.total_error += std::fabs(detector.mean_estimate() - spec.mean_at(t));
    }
    stats[static_cast<size_t>(r)] = s;
  });
  return stats;
}

}  // namespace nsmab
