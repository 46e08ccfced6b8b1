#include "nsmab/meta_bandits.hpp"

#include <doctest.h>
#include <memory>
#include <vector>

#include "nsmab/base_bandits.hpp"
#include "nsmab/environments.hpp"
#include "oracles.hpp"

using nsmab::AdaptiveWindowBandit;
using nsmab::MptsPolicy;
using nsmab::OnChange;
using nsmab::Policy;
using nsmab::Rng;
using nsmab::RoundOutcome;

namespace {

RoundOutcome outcome_of(const std::vector<int>& arms,
                        const std::vector<double>& rewards) {
  return RoundOutcome{arms, rewards};
}

std::unique_ptr<AdaptiveWindowBandit> make_adr_ts(int num_arms, int plays,
                                                  double delta,
                                                  OnChange mode) {
  return std::make_unique<AdaptiveWindowBandit>(
      std::make_unique<MptsPolicy>(num_arms, plays), num_arms, delta, mode);
}

// Fixed round-robin selection, so detections cannot influence the arm
// sequence; used for lockstep comparisons against a naive rescanner.
class ScriptedPolicy : public Policy {
 public:
  ScriptedPolicy(int num_arms, int plays) : num_arms_(num_arms), plays_(plays) {}
  std::vector<int> select(std::int64_t, Rng&) override {
    std::vector<int> sel;
    for (int j = 0; j < plays_; ++j) {
      sel.push_back(cursor_);
      cursor_ = (cursor_ + 1) % num_arms_;
    }
    return sel;
  }
  void update(std::int64_t, const RoundOutcome&) override {}
  void reset() override {}

 private:
  int num_arms_;
  int plays_;
  int cursor_ = 0;
};

}  // namespace

TEST_CASE("constant per-arm streams never trigger a reset") {
  for (double delta : {0.5, 0.01, 1e-6}) {
    auto meta = make_adr_ts(3, 1, delta, OnChange::reset_all);
    Rng rng(1);
    const double levels[] = {1.0, 0.0, 1.0};
    for (std::int64_t t = 1; t <= 400; ++t) {
      const auto sel = meta->select(t, rng);
      meta->update(t, outcome_of(sel, {levels[sel[0]]}));
    }
    CHECK(meta->detection_rounds().empty());
  }
}

TEST_CASE("single-arm meta reduces to the standalone detector") {
  // K = L = 1: the arm's observation sequence is the whole stream, so the
  // first reset lands exactly where the standalone scan first cuts.
  auto meta = make_adr_ts(1, 1, 0.01, OnChange::reset_all);
  oracles::NaiveAdwin naive(0.01);
  Rng rng(1);
  std::int64_t naive_detection = -1;
  for (std::int64_t t = 1; t <= 19; ++t) {
    const double x = t <= 10 ? 0.0 : 1.0;
    const auto sel = meta->select(t, rng);
    REQUIRE(sel == std::vector<int>{0});
    meta->update(t, outcome_of(sel, {x}));
    if (naive.step(x).detected && naive_detection < 0) naive_detection = t;
  }
  REQUIRE(meta->detection_rounds().size() == 1);
  CHECK(meta->detection_rounds()[0] == naive_detection);
  CHECK(meta->detection_rounds()[0] == 19);
  // Full reset: nothing retained, unlike the standalone suffix-keeper.
  CHECK(meta->window_rounds() == 0);
  CHECK(meta->arm_observations(0) == 0);
}

TEST_CASE("wrapped and bare policies are identical until the first detection") {
  const int num_arms = 10;
  const std::int64_t horizon = 2000;
  nsmab::SyntheticEnv env(nsmab::EnvKind::abrupt, num_arms, horizon);
  for (int seed = 0; seed < 5; ++seed) {
    auto meta = make_adr_ts(num_arms, 2, 0.01, OnChange::reset_all);
    MptsPolicy bare(num_arms, 2);
    Rng rng_a(static_cast<std::uint64_t>(seed) + 100);
    Rng rng_b(static_cast<std::uint64_t>(seed) + 100);
    std::int64_t first_detection = -1;
    for (std::int64_t t = 1; t <= horizon; ++t) {
      const auto sa = meta->select(t, rng_a);
      const auto sb = bare.select(t, rng_b);
      if (first_detection < 0) {
        REQUIRE(sa == sb);
      }
      std::vector<double> ra;
      std::vector<double> rb;
      for (size_t j = 0; j < sa.size(); ++j) {
        ra.push_back(env.sample(sa[j], t, rng_a));
      }
      for (size_t j = 0; j < sb.size(); ++j) {
        rb.push_back(env.sample(sb[j], t, rng_b));
      }
      meta->update(t, outcome_of(sa, ra));
      bare.update(t, outcome_of(sb, rb));
      if (first_detection < 0 && meta->detected_last_round()) {
        first_detection = t;
      }
    }
    // The abrupt environment should actually produce a detection.
    CHECK(first_detection > 0);
  }
}

TEST_CASE("detector sequences match the base policy's pull counts") {
  const int num_arms = 6;
  auto meta = make_adr_ts(num_arms, 2, 0.001, OnChange::reset_all);
  nsmab::SyntheticEnv env(nsmab::EnvKind::stationary, num_arms, 1000);
  Rng rng(17);
  for (std::int64_t t = 1; t <= 1000; ++t) {
    const auto sel = meta->select(t, rng);
    std::vector<double> rewards;
    for (int arm : sel) rewards.push_back(env.sample(arm, t, rng));
    meta->update(t, outcome_of(sel, rewards));
    const auto& base = dynamic_cast<const MptsPolicy&>(meta->base());
    std::int64_t total = 0;
    for (int i = 0; i < num_arms; ++i) {
      REQUIRE(meta->arm_observations(i) == base.arm(i).pulls);
      total += meta->arm_observations(i);
    }
    REQUIRE(total == 2 * meta->window_rounds());
  }
}

TEST_CASE("a full reset leaves the state indistinguishable from fresh") {
  auto meta = make_adr_ts(2, 1, 0.01, OnChange::reset_all);
  Rng rng(3);
  std::int64_t detection = -1;
  std::int64_t t = 1;
  for (; t <= 200; ++t) {
    const auto sel = meta->select(t, rng);
    // Arm 0 pays 1 until round 60 and 0 afterwards; arm 1 always 0.
    const double reward = sel[0] == 0 ? (t <= 60 ? 1.0 : 0.0) : 0.0;
    meta->update(t, outcome_of(sel, {reward}));
    if (meta->detected_last_round()) {
      detection = t;
      ++t;
      break;
    }
  }
  REQUIRE(detection > 0);
  CHECK(meta->window_rounds() == 0);
  CHECK(meta->window_start() == detection + 1);
  for (int i = 0; i < 2; ++i) CHECK(meta->arm_observations(i) == 0);

  // From here on the wrapped policy must track a freshly built one driven by
  // a generator in the same state.
  auto fresh = make_adr_ts(2, 1, 0.01, OnChange::reset_all);
  Rng rng_fresh = rng;
  for (std::int64_t s = 1; t <= 200; ++t, ++s) {
    const auto sa = meta->select(t, rng);
    const auto sb = fresh->select(s, rng_fresh);
    REQUIRE(sa == sb);
    const double reward = sa[0] == 0 ? 0.3 : 0.6;
    meta->update(t, outcome_of(sa, {reward}));
    fresh->update(s, outcome_of(sb, {reward}));
  }
}

TEST_CASE("suffix mode trims every arm to rounds after the breakpoint") {
  // Arm 0: ten 1s then 0s forces a detection with breakpoint at its last
  // 1-valued observation. Arm 1 is constant and must be trimmed too.
  auto meta = std::make_unique<AdaptiveWindowBandit>(
      std::make_unique<ScriptedPolicy>(2, 1), 2, 0.01, OnChange::keep_suffix);
  Rng rng(1);
  std::vector<std::int64_t> arm0_rounds;
  std::int64_t detection = -1;
  for (std::int64_t t = 1; t <= 60; ++t) {
    const auto sel = meta->select(t, rng);  // alternates 0,1,0,1,...
    const double reward =
        sel[0] == 0 ? (arm0_rounds.size() < 10 ? 1.0 : 0.0) : 0.5;
    if (sel[0] == 0) arm0_rounds.push_back(t);
    meta->update(t, outcome_of(sel, {reward}));
    if (meta->detected_last_round()) {
      detection = t;
      break;
    }
  }
  REQUIRE(detection > 0);
  // Breakpoint is arm 0's 10th observation round (its last 1).
  const std::int64_t breakpoint = arm0_rounds[9];
  CHECK(meta->window_start() == breakpoint + 1);
  // Retained arm-0 observations: its selections after the breakpoint.
  std::int64_t expect0 = 0;
  for (std::int64_t r : arm0_rounds) {
    if (r > breakpoint && r <= detection) ++expect0;
  }
  CHECK(meta->arm_observations(0) == expect0);
  // Arm 1 was selected on even rounds; retained count follows the same rule.
  std::int64_t expect1 = 0;
  for (std::int64_t r = 2; r <= detection; r += 2) {
    if (r > breakpoint) ++expect1;
  }
  CHECK(meta->arm_observations(1) == expect1);
  CHECK(meta->window_rounds() == expect0 + expect1);
}

TEST_CASE("suffix and reset modes agree when nothing is detected") {
  const int num_arms = 5;
  nsmab::SyntheticEnv env(nsmab::EnvKind::stationary, num_arms, 600);
  auto adr = make_adr_ts(num_arms, 1, 1e-9, OnChange::reset_all);
  auto ads = make_adr_ts(num_arms, 1, 1e-9, OnChange::keep_suffix);
  Rng rng_a(9);
  Rng rng_b(9);
  for (std::int64_t t = 1; t <= 600; ++t) {
    const auto sa = adr->select(t, rng_a);
    const auto sb = ads->select(t, rng_b);
    REQUIRE(sa == sb);
    const double ra = env.sample(sa[0], t, rng_a);
    const double rb = env.sample(sb[0], t, rng_b);
    REQUIRE(ra == rb);
    adr->update(t, outcome_of(sa, {ra}));
    ads->update(t, outcome_of(sb, {rb}));
  }
  CHECK(adr->detection_rounds().empty());
  CHECK(ads->detection_rounds().empty());
}

TEST_CASE("dirty-arm scanning matches a full rescan") {
  // Naive twin: rescans every arm's full sequence each round, applying the
  // same first-detection-wins rule. Selections are scripted so both sides
  // see identical data even after detections.
  struct NaiveTwin {
    explicit NaiveTwin(int num_arms, double delta)
        : delta(delta), seqs(num_arms), rounds(num_arms) {}
    double delta;
    std::vector<std::vector<double>> seqs;
    std::vector<std::vector<std::int64_t>> rounds;
    std::vector<std::int64_t> detections;

    void step(std::int64_t t, const RoundOutcome& outcome, bool keep_suffix) {
      for (size_t j = 0; j < outcome.arms.size(); ++j) {
        seqs[static_cast<size_t>(outcome.arms[j])].push_back(
            outcome.rewards[j]);
        rounds[static_cast<size_t>(outcome.arms[j])].push_back(t);
      }
      for (size_t i = 0; i < seqs.size(); ++i) {
        const auto& xs = seqs[i];
        const auto n = static_cast<std::int64_t>(xs.size());
        for (std::int64_t m = 1; m < n; ++m) {
          double s1 = 0.0;
          for (std::int64_t a = 0; a < m; ++a) s1 += xs[static_cast<size_t>(a)];
          double s2 = 0.0;
          for (std::int64_t a = m; a < n; ++a) s2 += xs[static_cast<size_t>(a)];
          const double gap =
              std::fabs(s1 / static_cast<double>(m) -
                        s2 / static_cast<double>(n - m));
          const double threshold = static_cast<double>(
              oracles::epsilon_cut_ref(m, n - m, delta));
          if (gap >= threshold) {
            detections.push_back(t);
            if (keep_suffix) {
              const std::int64_t b = rounds[i][static_cast<size_t>(m - 1)];
              for (size_t a = 0; a < seqs.size(); ++a) {
                std::vector<double> ns;
                std::vector<std::int64_t> nr;
                for (size_t e = 0; e < rounds[a].size(); ++e) {
                  if (rounds[a][e] > b) {
                    ns.push_back(seqs[a][e]);
                    nr.push_back(rounds[a][e]);
                  }
                }
                seqs[a] = std::move(ns);
                rounds[a] = std::move(nr);
              }
            } else {
              for (auto& s : seqs) s.clear();
              for (auto& r : rounds) r.clear();
            }
            return;
          }
        }
      }
    }
  };

  for (const auto mode : {OnChange::reset_all, OnChange::keep_suffix}) {
    const int num_arms = 4;
    auto meta = std::make_unique<AdaptiveWindowBandit>(
        std::make_unique<ScriptedPolicy>(num_arms, 2), num_arms, 0.05, mode);
    NaiveTwin twin(num_arms, 0.05);
    Rng rng(41);
    Rng rewards(42);
    for (std::int64_t t = 1; t <= 400; ++t) {
      const auto sel = meta->select(t, rng);
      std::vector<double> r;
      const double mu = t < 150 ? 0.2 : (t < 280 ? 0.85 : 0.35);
      for (size_t j = 0; j < sel.size(); ++j) {
        r.push_back(rewards.next_bernoulli(mu) ? 1.0 : 0.0);
      }
      const auto outcome = outcome_of(sel, r);
      meta->update(t, outcome);
      twin.step(t, outcome, mode == OnChange::keep_suffix);
      REQUIRE(meta->detection_rounds().size() == twin.detections.size());
      for (int i = 0; i < num_arms; ++i) {
        REQUIRE(meta->arm_observations(i) ==
                static_cast<std::int64_t>(twin.seqs[static_cast<size_t>(i)].size()));
      }
    }
    CHECK(!meta->detection_rounds().empty());
  }
}

TEST_CASE("stationary runs with tiny delta essentially never reset") {
  const int num_arms = 20;
  const std::int64_t horizon = 4000;
  const double delta = 1.0 / (static_cast<double>(horizon) * horizon * horizon);
  nsmab::SyntheticEnv env(nsmab::EnvKind::stationary, num_arms, horizon);
  int runs_with_reset = 0;
  for (int run = 0; run < 10; ++run) {
    auto meta = make_adr_ts(num_arms, 1, delta, OnChange::reset_all);
    Rng rng(static_cast<std::uint64_t>(run) + 500);
    for (std::int64_t t = 1; t <= horizon; ++t) {
      const auto sel = meta->select(t, rng);
      meta->update(t, outcome_of(sel, {env.sample(sel[0], t, rng)}));
    }
    if (!meta->detection_rounds().empty()) ++runs_with_reset;
  }
  CHECK(runs_with_reset == 0);
}
