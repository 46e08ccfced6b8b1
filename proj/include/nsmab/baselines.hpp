#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "nsmab/policy.hpp"

namespace nsmab {

// Discounted UCB. Counts and reward sums decay by `discount` every round;
// the index is the discounted mean plus 2 sqrt(xi log(n_t) / N_i) where n_t
// sums the discounted counts. Unobserved arms rank first.
class DucbPolicy : public Policy {
 public:
  DucbPolicy(int num_arms, int plays, double discount, double xi = 0.5);

  std::vector<int> select(std::int64_t t, Rng& rng) override;
  void update(std::int64_t t, const RoundOutcome& outcome) override;
  void reset() override;

  double discounted_count(int i) const { return counts_[static_cast<size_t>(i)]; }
  double discounted_sum(int i) const { return sums_[static_cast<size_t>(i)]; }

 private:
  int num_arms_;
  int plays_;
  double discount_;
  double xi_;
  std::vector<double> counts_;
  std::vector<double> sums_;
  std::vector<double> scores_;
};

// Sliding-window Thompson sampling: Beta posteriors over the observations of
// the last `window` rounds only.
class SwtsPolicy : public Policy {
 public:
  SwtsPolicy(int num_arms, int plays, std::int64_t window);

  std::vector<int> select(std::int64_t t, Rng& rng) override;
  void update(std::int64_t t, const RoundOutcome& outcome) override;
  void reset() override;

  std::int64_t windowed_pulls(int i) const {
    return pulls_[static_cast<size_t>(i)];
  }
  double windowed_successes(int i) const {
    return successes_[static_cast<size_t>(i)];
  }

 private:
  int num_arms_;
  int plays_;
  std::int64_t window_;
  std::deque<RoundOutcome> buffer_;  // one entry per round
  std::vector<std::int64_t> pulls_;
  std::vector<double> successes_;
  std::vector<double> scores_;
};

// Restarting Exp3. Exponential weights with mixing rate
//   gamma = min{1, sqrt(K log K / ((e-1) batch))},
// importance-weighted updates, and a full weight reset every `batch` rounds.
// Multiple plays are drawn sequentially without replacement with
// renormalization; updates use the round-start marginal probabilities.
class Rexp3Policy : public Policy {
 public:
  Rexp3Policy(int num_arms, int plays, std::int64_t batch);

  std::vector<int> select(std::int64_t t, Rng& rng) override;
  void update(std::int64_t t, const RoundOutcome& outcome) override;
  void reset() override;

  double exploration_rate() const { return gamma_; }
  // Marginal probabilities computed by the last select().
  std::span<const double> probabilities() const { return probs_; }

 private:
  int num_arms_;
  int plays_;
  std::int64_t batch_;
  double gamma_;
  std::vector<double> weights_;
  std::vector<double> probs_;
  std::int64_t rounds_in_batch_ = 0;
};

}  // namespace nsmab
