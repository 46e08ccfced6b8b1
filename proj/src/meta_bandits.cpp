#include "nsmab/meta_bandits.hpp"

#include <algorithm>
#include <stdexcept>

namespace nsmab {

AdaptiveWindowBandit::AdaptiveWindowBandit(std::unique_ptr<Policy> base,
                                           int num_arms, double delta,
                                           OnChange mode,
                                           std::int64_t check_stride)
    : base_(std::move(base)),
      num_arms_(num_arms),
      mode_(mode),
      thresholds_(delta),
      stride_(check_stride),
      arms_(static_cast<size_t>(num_arms)) {
  if (!base_) throw std::invalid_argument("AdaptiveWindowBandit: null base");
  if (num_arms < 1) throw std::invalid_argument("AdaptiveWindowBandit: arms");
  if (check_stride < 1) {
    throw std::invalid_argument("AdaptiveWindowBandit: check_stride >= 1");
  }
}

std::vector<int> AdaptiveWindowBandit::select(std::int64_t, Rng& rng) {
  const std::int64_t local_t = window_rounds() + 1;
  return base_->select(local_t, rng);
}

void AdaptiveWindowBandit::update(std::int64_t t, const RoundOutcome& outcome) {
  const std::int64_t local_t = window_rounds() + 1;
  base_->update(local_t, outcome);
  history_.emplace_back(t, outcome);
  for (size_t j = 0; j < outcome.arms.size(); ++j) {
    auto& view = arms_[static_cast<size_t>(outcome.arms[j])];
    view.window.append(outcome.rewards[j]);
    view.rounds.push_back(t);
    view.dirty = true;
  }

  // Arms whose sequences are unchanged since their last clean scan cannot
  // newly qualify, so only dirty arms are scanned. Ascending order; the
  // first detection wins the round.
  detected_last_ = false;
  for (int i = 0; i < num_arms_; ++i) {
    auto& view = arms_[static_cast<size_t>(i)];
    if (!view.dirty) continue;
    const auto cut = first_cut(view.window, thresholds_, stride_);
    if (!cut) {
      view.dirty = false;
      continue;
    }
    detected_last_ = true;
    detections_.push_back(t);
    if (mode_ == OnChange::reset_all) {
      apply_reset(t);
    } else {
      apply_shrink(view.rounds[static_cast<size_t>(*cut - 1)]);
    }
    break;
  }
}

void AdaptiveWindowBandit::apply_reset(std::int64_t t) {
  base_->reset();
  for (auto& view : arms_) {
    view.window.clear();
    view.rounds.clear();
    view.dirty = false;
  }
  history_.clear();
  window_start_ = t + 1;
}

void AdaptiveWindowBandit::apply_shrink(std::int64_t breakpoint) {
  // Keep only rounds after the breakpoint, for every arm.
  auto first_kept = std::upper_bound(
      history_.begin(), history_.end(), breakpoint,
      [](std::int64_t b, const auto& entry) { return b < entry.first; });
  history_.erase(history_.begin(), first_kept);
  window_start_ = breakpoint + 1;

  for (auto& view : arms_) {
    view.window.clear();
    view.rounds.clear();
    view.dirty = true;  // a suffix can still hold a qualifying split
  }
  std::vector<RoundOutcome> retained;
  retained.reserve(history_.size());
  for (const auto& [round, outcome] : history_) {
    retained.push_back(outcome);
    for (size_t j = 0; j < outcome.arms.size(); ++j) {
      auto& view = arms_[static_cast<size_t>(outcome.arms[j])];
      view.window.append(outcome.rewards[j]);
      view.rounds.push_back(round);
    }
  }
  base_->rebuild(retained);
}

void AdaptiveWindowBandit::reset() {
  base_->reset();
  for (auto& view : arms_) {
    view.window.clear();
    view.rounds.clear();
    view.dirty = false;
  }
  history_.clear();
  window_start_ = 1;
  detections_.clear();
  detected_last_ = false;
}

}  // namespace nsmab
