#include "nsmab/base_bandits.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nsmab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_arm_count(int num_arms, int plays) {
  if (num_arms < 1) throw std::invalid_argument("policy: need >= 1 arm");
  if (plays < 1 || plays > num_arms) {
    throw std::invalid_argument("policy: need 1 <= plays <= arms");
  }
}
}  // namespace

// -- MptsPolicy ---------------------------------------------------------------

MptsPolicy::MptsPolicy(int num_arms, int plays)
    : num_arms_(num_arms), plays_(plays), arms_(num_arms) {
  check_arm_count(num_arms, plays);
  scores_.resize(static_cast<size_t>(num_arms));
}

std::vector<int> MptsPolicy::select(std::int64_t, Rng& rng) {
  for (int i = 0; i < num_arms_; ++i) {
    const auto& a = arms_[static_cast<size_t>(i)];
    scores_[static_cast<size_t>(i)] = rng.next_beta(
        a.successes + 1.0, static_cast<double>(a.pulls) - a.successes + 1.0);
  }
  return top_l(scores_, plays_);
}

void MptsPolicy::update(std::int64_t, const RoundOutcome& outcome) {
  for (size_t j = 0; j < outcome.arms.size(); ++j) {
    auto& a = arms_[static_cast<size_t>(outcome.arms[j])];
    a.pulls += 1;
    a.successes += outcome.rewards[j];
  }
}

void MptsPolicy::reset() { arms_.assign(static_cast<size_t>(num_arms_), {}); }

// -- MpklucbPolicy ------------------------------------------------------------

MpklucbPolicy::MpklucbPolicy(int num_arms, int plays)
    : num_arms_(num_arms), plays_(plays), arms_(num_arms) {
  check_arm_count(num_arms, plays);
  scores_.resize(static_cast<size_t>(num_arms));
}

std::vector<int> MpklucbPolicy::select(std::int64_t t, Rng&) {
  for (int i = 0; i < num_arms_; ++i) {
    const auto& a = arms_[static_cast<size_t>(i)];
    const double mu = a.pulls > 0 ? a.mean() : 0.0;
    scores_[static_cast<size_t>(i)] = kl_ucb_index(mu, a.pulls, t);
  }
  return top_l(scores_, plays_);
}

void MpklucbPolicy::update(std::int64_t, const RoundOutcome& outcome) {
  for (size_t j = 0; j < outcome.arms.size(); ++j) {
    auto& a = arms_[static_cast<size_t>(outcome.arms[j])];
    a.pulls += 1;
    a.successes += outcome.rewards[j];
  }
}

void MpklucbPolicy::reset() { arms_.assign(static_cast<size_t>(num_arms_), {}); }

// -- ElimUcbPolicy ------------------------------------------------------------

ElimUcbPolicy::ElimUcbPolicy(int num_arms, int plays, std::int64_t horizon)
    : num_arms_(num_arms),
      plays_(plays),
      horizon_(horizon),
      arms_(num_arms),
      candidate_(static_cast<size_t>(num_arms), 1),
      candidate_count_(num_arms) {
  check_arm_count(num_arms, plays);
  if (horizon < 1) throw std::invalid_argument("ElimUcbPolicy: horizon >= 1");
  log_t4_ = 4.0 * std::log(static_cast<double>(horizon));
  scores_.resize(static_cast<size_t>(num_arms));
}

double ElimUcbPolicy::ucb_index(int i) const {
  const auto& a = arms_[static_cast<size_t>(i)];
  if (a.pulls == 0) return kInf;
  return a.mean() + std::sqrt(log_t4_ / (2.0 * static_cast<double>(a.pulls)));
}

std::vector<int> ElimUcbPolicy::select(std::int64_t t, Rng&) {
  const int k = round_robin_arm(t);
  for (int i = 0; i < num_arms_; ++i) scores_[static_cast<size_t>(i)] = ucb_index(i);
  if (!candidate_[static_cast<size_t>(k)]) return top_l(scores_, plays_);
  std::vector<int> selection{k};
  if (plays_ > 1) {
    scores_[static_cast<size_t>(k)] = -kInf;
    auto rest = top_l(scores_, plays_ - 1);
    selection.insert(selection.end(), rest.begin(), rest.end());
  }
  return selection;
}

void ElimUcbPolicy::update(std::int64_t t, const RoundOutcome& outcome) {
  // The elimination test runs on statistics from rounds before t; this
  // round's rewards are folded in afterwards.
  const int k = round_robin_arm(t);
  if (candidate_count_ >= 2 && candidate_[static_cast<size_t>(k)]) {
    const auto& ak = arms_[static_cast<size_t>(k)];
    double upper_k = kInf;
    if (ak.monitor_pulls > 0) {
      const double bk =
          std::sqrt(log_t4_ / (2.0 * static_cast<double>(ak.monitor_pulls)));
      upper_k = ak.monitor_mean() + bk;
    }
    for (int i = 0; i < num_arms_ && upper_k < kInf; ++i) {
      if (i == k) continue;
      const auto& ai = arms_[static_cast<size_t>(i)];
      if (ai.monitor_pulls == 0) continue;
      const double bi =
          std::sqrt(log_t4_ / (2.0 * static_cast<double>(ai.monitor_pulls)));
      if (ai.monitor_mean() - bi > upper_k) {
        candidate_[static_cast<size_t>(k)] = 0;
        --candidate_count_;
        break;
      }
    }
  }
  account(t, outcome);
}

void ElimUcbPolicy::account(std::int64_t t, const RoundOutcome& outcome) {
  const int k = round_robin_arm(t);
  for (size_t j = 0; j < outcome.arms.size(); ++j) {
    auto& a = arms_[static_cast<size_t>(outcome.arms[j])];
    a.pulls += 1;
    a.successes += outcome.rewards[j];
    if (outcome.arms[j] == k) {
      a.monitor_pulls += 1;
      a.monitor_successes += outcome.rewards[j];
    }
  }
}

void ElimUcbPolicy::reset() {
  arms_.assign(static_cast<size_t>(num_arms_), {});
  candidate_.assign(static_cast<size_t>(num_arms_), 1);
  candidate_count_ = num_arms_;
}

void ElimUcbPolicy::rebuild(const std::vector<RoundOutcome>& history) {
  // Statistics are recomputed against the new round numbering; the candidate
  // pool starts over and no eliminations are replayed.
  reset();
  std::int64_t t = 1;
  for (const auto& outcome : history) account(t++, outcome);
}

}  // namespace nsmab
