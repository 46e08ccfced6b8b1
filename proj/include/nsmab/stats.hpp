#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace nsmab {

// Per-arm counters. `monitor_*` hold the round-robin-only samples used by
// the elimination rule; they never exceed the plain counters.
struct ArmStats {
  std::int64_t pulls = 0;
  double successes = 0.0;
  std::int64_t monitor_pulls = 0;
  double monitor_successes = 0.0;

  double mean() const { return successes / static_cast<double>(pulls); }
  double monitor_mean() const {
    return monitor_successes / static_cast<double>(monitor_pulls);
  }
};

// One round's selected arms and their observed rewards (parallel vectors).
// Synthetic environments reveal all L rewards; replay reveals the matched
// arm only.
struct RoundOutcome {
  std::vector<int> arms;
  std::vector<double> rewards;
};

// Bernoulli KL divergence d(p, q) with the 0 log 0 = 0 convention.
// Returns +inf when q is 0 or 1 and p differs.
double kl_bernoulli(double p, double q);

// Largest q in [0, 1] with n * d(mu_hat, q) <= log(t / n), found by bisection
// to 1e-9. Untried arms (n = 0) rank at 1; a spent budget (log(t/n) <= 0)
// returns mu_hat.
double kl_ucb_index(double mu_hat, std::int64_t n, std::int64_t t);

// Indices of the l largest scores, ties broken toward the smaller index.
// Result is ordered best-first.
std::vector<int> top_l(std::span<const double> scores, int l);

// Shortfall of the selected arms' oracle means against the best same-size
// subset: max_{|I|=L} sum mu_I - sum mu_selected. Never negative.
double regret_step(std::span<const double> oracle_means,
                   std::span<const int> selection);

}  // namespace nsmab
