#include "nsmab/environments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace nsmab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kLocalChangeArms = 10;
}  // namespace

EnvKind parse_env_kind(const std::string& name) {
  if (name == "stationary") return EnvKind::stationary;
  if (name == "gradual") return EnvKind::gradual;
  if (name == "abrupt") return EnvKind::abrupt;
  if (name == "abrupt_local" || name == "abrupt-local") {
    return EnvKind::abrupt_local;
  }
  throw std::invalid_argument("unknown environment kind: " + name);
}

std::string env_kind_name(EnvKind kind) {
  switch (kind) {
    case EnvKind::stationary: return "stationary";
    case EnvKind::gradual: return "gradual";
    case EnvKind::abrupt: return "abrupt";
    case EnvKind::abrupt_local: return "abrupt_local";
  }
  return "?";
}

SyntheticEnv::SyntheticEnv(EnvKind kind, int num_arms, std::int64_t horizon)
    : kind_(kind), num_arms_(num_arms), horizon_(horizon) {
  if (num_arms < 1) throw std::invalid_argument("SyntheticEnv: arms >= 1");
  if (horizon < 1) throw std::invalid_argument("SyntheticEnv: horizon >= 1");
}

double SyntheticEnv::initial_mean(int arm) const {
  return static_cast<double>(num_arms_ - arm) / static_cast<double>(num_arms_);
}

double SyntheticEnv::mean(int arm, std::int64_t t) const {
  if (arm < 0 || arm >= num_arms_) {
    throw std::invalid_argument("SyntheticEnv::mean: arm out of range");
  }
  if (t < 1 || t > horizon_) {
    throw std::invalid_argument("SyntheticEnv::mean: round out of range");
  }
  const double mu1 = initial_mean(arm);
  switch (kind_) {
    case EnvKind::stationary:
      return mu1;
    case EnvKind::gradual: {
      const double td = static_cast<double>(t);
      const double horizon = static_cast<double>(horizon_);
      return (horizon - td + 1.0) / horizon * mu1 +
             (td - 1.0) / horizon * (1.0 - mu1);
    }
    case EnvKind::abrupt:
      if (t > change_on() && t <= change_off()) return 1.0 - mu1;
      return mu1;
    case EnvKind::abrupt_local:
      if (arm < std::min(kLocalChangeArms, num_arms_) && t > change_on() &&
          t <= change_off()) {
        return 0.5;
      }
      return mu1;
  }
  return mu1;
}

double SyntheticEnv::sample(int arm, std::int64_t t, Rng& rng) const {
  return rng.next_bernoulli(mean(arm, t)) ? 1.0 : 0.0;
}

std::vector<std::int64_t> SyntheticEnv::changepoints() const {
  if (kind_ != EnvKind::abrupt && kind_ != EnvKind::abrupt_local) return {};
  std::vector<std::int64_t> points;
  if (change_on() >= 1 && change_on() < horizon_) points.push_back(change_on());
  if (change_off() > change_on() && change_off() < horizon_) {
    points.push_back(change_off());
  }
  return points;
}

ChangeRatio global_change_ratio(const SyntheticEnv& env) {
  ChangeRatio out;
  const auto points = env.changepoints();
  if (points.empty()) return out;  // not applicable
  out.applicable = true;
  double worst_excl = 1.0;
  bool any_zero = false;
  for (std::int64_t t : points) {
    double max_change = 0.0;
    double min_nonzero = kInf;
    for (int i = 0; i < env.num_arms(); ++i) {
      const double change = std::fabs(env.mean(i, t + 1) - env.mean(i, t));
      max_change = std::max(max_change, change);
      if (change > 0.0) {
        min_nonzero = std::min(min_nonzero, change);
      } else {
        any_zero = true;
      }
    }
    if (max_change > 0.0 && min_nonzero < kInf) {
      worst_excl = std::max(worst_excl, max_change / min_nonzero);
    }
  }
  out.excluding_zero = worst_excl;
  out.including_zero = any_zero ? kInf : worst_excl;
  return out;
}

ChangeRatio gradual_ratio(const SyntheticEnv& env) {
  ChangeRatio out;
  if (env.kind() != EnvKind::gradual || env.horizon() < 2) return out;
  out.applicable = true;
  // The drift is linear in t, so the end-to-end displacement carries the
  // whole ratio structure.
  double max_drift = 0.0;
  double min_nonzero = kInf;
  bool any_zero = false;
  for (int i = 0; i < env.num_arms(); ++i) {
    const double drift =
        std::fabs(env.mean(i, env.horizon()) - env.mean(i, 1));
    max_drift = std::max(max_drift, drift);
    if (drift > 0.0) {
      min_nonzero = std::min(min_nonzero, drift);
    } else {
      any_zero = true;
    }
  }
  if (max_drift == 0.0) {
    out.excluding_zero = 1.0;
    out.including_zero = 1.0;
    return out;
  }
  out.excluding_zero = min_nonzero / max_drift;
  out.including_zero = any_zero ? 0.0 : out.excluding_zero;
  return out;
}

// -- ReplayLog ----------------------------------------------------------------

ReplayLog::ReplayLog(std::vector<ReplayEvent> events, int num_arms)
    : events_(std::move(events)), num_arms_(num_arms) {
  std::int64_t prev = std::numeric_limits<std::int64_t>::min();
  for (const auto& e : events_) {
    if (e.arm < 0 || e.arm >= num_arms_) {
      throw ParseError("replay log: arm id out of range");
    }
    if (e.reward != 0.0 && e.reward != 1.0) {
      throw ParseError("replay log: reward must be 0 or 1");
    }
    if (e.time < prev) throw ParseError("replay log: events out of order");
    prev = e.time;
  }
}

ReplayLog ReplayLog::load(const std::string& path, int expected_arms) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open replay log: " + path);
  return parse(in, path, expected_arms);
}

ReplayLog ReplayLog::parse(std::istream& in, const std::string& origin,
                           int expected_arms) {
  auto fail = [&](std::int64_t line, const std::string& what) {
    std::ostringstream msg;
    msg << origin << ":" << line << ": " << what;
    throw ParseError(msg.str());
  };

  std::string line;
  std::int64_t line_no = 0;
  if (!std::getline(in, line)) fail(1, "empty log, expected header t,arm,reward");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,arm,reward") fail(line_no, "expected header t,arm,reward");

  std::vector<ReplayEvent> events;
  int max_arm = 0;
  std::int64_t prev_time = std::numeric_limits<std::int64_t>::min();
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::int64_t t = 0;
    long arm = 0;
    int reward = 0;
    char trail = 0;
    if (std::sscanf(line.c_str(), "%ld,%ld,%d%c", &t, &arm, &reward, &trail) != 3) {
      fail(line_no, "malformed row, expected t,arm,reward");
    }
    if (t < 0) fail(line_no, "t must be nonnegative");
    if (t < prev_time) fail(line_no, "events must be time-ordered");
    prev_time = t;
    if (arm < 1) fail(line_no, "arm ids are 1-based");
    if (expected_arms > 0 && arm > expected_arms) {
      fail(line_no, "unknown arm id " + std::to_string(arm));
    }
    if (reward != 0 && reward != 1) fail(line_no, "reward must be 0 or 1");
    max_arm = std::max(max_arm, static_cast<int>(arm));
    events.push_back({t, static_cast<int>(arm) - 1, static_cast<double>(reward)});
  }
  const int vocab = expected_arms > 0 ? expected_arms : max_arm;
  ReplayLog log;
  log.events_ = std::move(events);
  log.num_arms_ = std::max(vocab, 1);
  return log;
}

void ReplayLog::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write replay log: " + path);
  out << "t,arm,reward\n";
  for (const auto& e : events_) {
    out << e.time << ',' << e.arm + 1 << ',' << static_cast<int>(e.reward)
        << '\n';
  }
  if (!out) throw IoError("failed writing replay log: " + path);
}

std::optional<RoundOutcome> ReplayCursor::step(std::span<const int> selection) {
  const auto events = log_->events();
  while (pos_ < log_->size()) {
    const ReplayEvent& e = events[static_cast<size_t>(pos_)];
    ++pos_;
    const bool match =
        std::find(selection.begin(), selection.end(), e.arm) != selection.end();
    if (match) {
      ++matched_;
      RoundOutcome outcome;
      outcome.arms.push_back(e.arm);
      outcome.rewards.push_back(e.reward);
      return outcome;
    }
    ++skipped_;
  }
  return std::nullopt;
}

ReplayLog make_uniform_replay_log(const SyntheticEnv& env,
                                  std::int64_t num_events, Rng& rng) {
  std::vector<ReplayEvent> events;
  events.reserve(static_cast<size_t>(num_events));
  for (std::int64_t e = 0; e < num_events; ++e) {
    const int arm = static_cast<int>(rng.next_u64() %
                                     static_cast<std::uint64_t>(env.num_arms()));
    const std::int64_t round = std::min(e + 1, env.horizon());
    events.push_back({e, arm, env.sample(arm, round, rng)});
  }
  return ReplayLog(std::move(events), env.num_arms());
}

}  // namespace nsmab
