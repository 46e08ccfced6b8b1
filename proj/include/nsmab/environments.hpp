#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsmab/rng.hpp"
#include "nsmab/stats.hpp"

namespace nsmab {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class EnvKind { stationary, gradual, abrupt, abrupt_local };

EnvKind parse_env_kind(const std::string& name);
std::string env_kind_name(EnvKind kind);

// Bernoulli environments with arm means laid out evenly over (0, 1]:
// mu_{i,1} = (K + 1 - i) / K for 1-based arm i.
//   stationary    mu never moves.
//   gradual       linear drift from mu_{i,1} to 1 - mu_{i,1} over the horizon.
//   abrupt        every arm flips to 1 - mu_{i,1} on rounds (T/3, 2T/3].
//   abrupt_local  only the top 10 arms move (to 0.5) on rounds (T/3, 2T/3];
//                 the rest stay put.
class SyntheticEnv {
 public:
  SyntheticEnv(EnvKind kind, int num_arms, std::int64_t horizon);

  double mean(int arm, std::int64_t t) const;  // arm 0-based, t in [1, T]
  double sample(int arm, std::int64_t t, Rng& rng) const;

  EnvKind kind() const { return kind_; }
  int num_arms() const { return num_arms_; }
  std::int64_t horizon() const { return horizon_; }
  // Rounds t with mean(., t) != mean(., t+1); empty for stationary.
  std::vector<std::int64_t> changepoints() const;
  std::int64_t change_on() const { return horizon_ / 3; }
  std::int64_t change_off() const { return 2 * horizon_ / 3; }

 private:
  double initial_mean(int arm) const;

  EnvKind kind_;
  int num_arms_;
  std::int64_t horizon_;
};

// How coordinated the changes are across arms, evaluated on oracle means.
// `excluding_zero` is max-change / min-nonzero-change (>= 1) for abrupt
// kinds, and min-nonzero-drift / max-drift (in (0,1]) for the gradual kind.
// `including_zero` degrades to +inf (abrupt) or 0 (gradual) whenever some
// arm does not move at all while others do.
struct ChangeRatio {
  bool applicable = false;
  double excluding_zero = 0.0;
  double including_zero = 0.0;
};

ChangeRatio global_change_ratio(const SyntheticEnv& env);
ChangeRatio gradual_ratio(const SyntheticEnv& env);

// One logged presentation: at timestamp `time`, arm `arm` (0-based) was
// shown and earned a binary reward.
struct ReplayEvent {
  std::int64_t time = 0;
  int arm = 0;
  double reward = 0.0;
};

// Time-ordered log of presentations, loadable from CSV with header
// `t,arm,reward` (arm ids 1-based in the file).
class ReplayLog {
 public:
  ReplayLog() = default;
  ReplayLog(std::vector<ReplayEvent> events, int num_arms);

  static ReplayLog load(const std::string& path, int expected_arms = 0);
  static ReplayLog parse(std::istream& in, const std::string& origin,
                         int expected_arms = 0);
  void save(const std::string& path) const;

  std::span<const ReplayEvent> events() const { return events_; }
  std::int64_t size() const { return static_cast<std::int64_t>(events_.size()); }
  int num_arms() const { return num_arms_; }

 private:
  std::vector<ReplayEvent> events_;
  int num_arms_ = 0;
};

// Replays a log against a policy's selections. Each step consumes events
// until one presents a selected arm (that arm's reward is revealed and the
// policy round advances) or the log runs out (returns nullopt). Consumed
// non-matching events count as skips.
class ReplayCursor {
 public:
  explicit ReplayCursor(const ReplayLog& log) : log_(&log) {}

  std::optional<RoundOutcome> step(std::span<const int> selection);

  std::int64_t matched() const { return matched_; }
  std::int64_t skipped() const { return skipped_; }
  std::int64_t consumed() const { return matched_ + skipped_; }
  bool exhausted() const {
    return consumed() >= log_->size();
  }

 private:
  const ReplayLog* log_;
  std::int64_t pos_ = 0;
  std::int64_t matched_ = 0;
  std::int64_t skipped_ = 0;
};

// Synthesizes a log the way a uniform-random recommender would: each event
// presents one uniformly chosen arm with a Bernoulli reward from the
// environment's mean at that event's round.
ReplayLog make_uniform_replay_log(const SyntheticEnv& env,
                                  std::int64_t num_events, Rng& rng);

}  // namespace nsmab
