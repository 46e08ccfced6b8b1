#pragma once

#include <cstdint>
#include <vector>

#include "nsmab/policy.hpp"

namespace nsmab {

// Multiple-play Thompson sampling: per arm theta ~ Beta(S+1, N-S+1), play the
// top-L thetas. Draws are made in ascending arm order.
class MptsPolicy : public Policy {
 public:
  MptsPolicy(int num_arms, int plays);

  std::vector<int> select(std::int64_t t, Rng& rng) override;
  void update(std::int64_t t, const RoundOutcome& outcome) override;
  void reset() override;

  const ArmStats& arm(int i) const { return arms_[static_cast<size_t>(i)]; }
  int num_arms() const { return num_arms_; }

 private:
  int num_arms_;
  int plays_;
  std::vector<ArmStats> arms_;
  std::vector<double> scores_;
};

// Multiple-play KL-UCB: play the top-L KL-UCB indices.
class MpklucbPolicy : public Policy {
 public:
  MpklucbPolicy(int num_arms, int plays);

  std::vector<int> select(std::int64_t t, Rng& rng) override;
  void update(std::int64_t t, const RoundOutcome& outcome) override;
  void reset() override;

  const ArmStats& arm(int i) const { return arms_[static_cast<size_t>(i)]; }

 private:
  int num_arms_;
  int plays_;
  std::vector<ArmStats> arms_;
  std::vector<double> scores_;
};

// Elimination-UCB. A round-robin pointer k cycles through the arms; while k
// is still a candidate best arm it is forced into the selection and the
// remaining L-1 slots go to the best UCB indices, otherwise the whole
// selection is by UCB. Samples taken on an arm's own round-robin turn feed
// separate monitor statistics; a candidate is eliminated once another arm's
// monitor lower bound clears its monitor upper bound. The confidence width
// uses the fixed horizon: B = sqrt(log(T^4) / (2 N)).
class ElimUcbPolicy : public Policy {
 public:
  ElimUcbPolicy(int num_arms, int plays, std::int64_t horizon);

  std::vector<int> select(std::int64_t t, Rng& rng) override;
  void update(std::int64_t t, const RoundOutcome& outcome) override;
  void reset() override;
  void rebuild(const std::vector<RoundOutcome>& history) override;

  int round_robin_arm(std::int64_t t) const {
    return static_cast<int>(t % num_arms_);
  }
  bool is_candidate(int i) const { return candidate_[static_cast<size_t>(i)]; }
  int candidate_count() const { return candidate_count_; }
  const ArmStats& arm(int i) const { return arms_[static_cast<size_t>(i)]; }
  std::int64_t horizon() const { return horizon_; }

 private:
  double ucb_index(int i) const;
  void account(std::int64_t t, const RoundOutcome& outcome);

  int num_arms_;
  int plays_;
  std::int64_t horizon_;
  double log_t4_;
  std::vector<ArmStats> arms_;
  std::vector<char> candidate_;
  int candidate_count_;
  std::vector<double> scores_;
};

}  // namespace nsmab
