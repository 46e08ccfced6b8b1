#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "nsmab/adwin.hpp"
#include "nsmab/policy.hpp"

namespace nsmab {

// What to do with the windowed history when a per-arm detector fires.
enum class OnChange {
  reset_all,    // discard everything and re-initialize the base policy (ADR)
  keep_suffix,  // keep data after the breakpoint, rebuild the base (ADS)
};

// Wraps a base policy with one adaptive-window change detector per arm.
// Each round the base policy runs one step; each observed reward is appended
// to its arm's detector sequence; then the dirty arms are scanned in
// ascending order for a significant prefix/suffix mean gap. The first
// detection wins the round. With reset_all both sides of the split are
// discarded; with keep_suffix every arm keeps only rewards observed after
// the breakpoint round and the base statistics are rebuilt from them.
//
// The split threshold uses per-arm observation counts on each side.
// Detection consumes no randomness, so until the first detection the wrapped
// policy's trajectory is identical to the bare base policy's.
class AdaptiveWindowBandit : public Policy {
 public:
  AdaptiveWindowBandit(std::unique_ptr<Policy> base, int num_arms,
                       double delta, OnChange mode,
                       std::int64_t check_stride = 1);

  std::vector<int> select(std::int64_t t, Rng& rng) override;
  void update(std::int64_t t, const RoundOutcome& outcome) override;
  void reset() override;
  std::span<const std::int64_t> detection_rounds() const override {
    return detections_;
  }

  bool detected_last_round() const { return detected_last_; }
  std::int64_t window_rounds() const {
    return static_cast<std::int64_t>(history_.size());
  }
  std::int64_t window_start() const { return window_start_; }
  std::int64_t arm_observations(int i) const {
    return arms_[static_cast<size_t>(i)].window.size();
  }
  Policy& base() { return *base_; }
  const Policy& base() const { return *base_; }
  double delta() const { return thresholds_.delta(); }

 private:
  struct ArmView {
    Window window;                     // this arm's observed rewards
    std::vector<std::int64_t> rounds;  // global round of each observation
    bool dirty = false;                // sequence changed since last clean scan
  };

  void apply_reset(std::int64_t t);
  void apply_shrink(std::int64_t breakpoint);

  std::unique_ptr<Policy> base_;
  int num_arms_;
  OnChange mode_;
  CutThresholds thresholds_;
  std::int64_t stride_;
  std::vector<ArmView> arms_;
  // Rounds currently inside the window, oldest first.
  std::vector<std::pair<std::int64_t, RoundOutcome>> history_;
  std::int64_t window_start_ = 1;
  std::vector<std::int64_t> detections_;
  bool detected_last_ = false;
};

}  // namespace nsmab
