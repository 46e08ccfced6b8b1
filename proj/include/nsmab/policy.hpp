#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nsmab/rng.hpp"
#include "nsmab/stats.hpp"

namespace nsmab {

// Uniform step contract shared by every arm-selection algorithm:
//   select(t) -> arms, observe rewards, update(t, outcome).
// Rounds are 1-based. select(t) must only see statistics from rounds < t.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::vector<int> select(std::int64_t t, Rng& rng) = 0;
  virtual void update(std::int64_t t, const RoundOutcome& outcome) = 0;
  virtual void reset() = 0;

  // Rebuild statistics as if history[s] had been observed at round s+1.
  // Overridden where update() has side effects beyond accounting.
  virtual void rebuild(const std::vector<RoundOutcome>& history) {
    reset();
    std::int64_t t = 1;
    for (const auto& outcome : history) update(t++, outcome);
  }

  // Global rounds at which the policy reset or shrank its own state.
  // Empty for policies without change detection.
  virtual std::span<const std::int64_t> detection_rounds() const { return {}; }
};

}  // namespace nsmab
