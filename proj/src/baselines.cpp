#include "nsmab/baselines.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nsmab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kE = 2.718281828459045235360287471353;
}  // namespace

// -- DucbPolicy ---------------------------------------------------------------

DucbPolicy::DucbPolicy(int num_arms, int plays, double discount, double xi)
    : num_arms_(num_arms), plays_(plays), discount_(discount), xi_(xi) {
  if (num_arms < 1 || plays < 1 || plays > num_arms) {
    throw std::invalid_argument("DucbPolicy: need 1 <= plays <= arms");
  }
  if (!(discount > 0.0 && discount <= 1.0)) {
    throw std::invalid_argument("DucbPolicy: discount must be in (0,1]");
  }
  counts_.assign(static_cast<size_t>(num_arms), 0.0);
  sums_.assign(static_cast<size_t>(num_arms), 0.0);
  scores_.resize(static_cast<size_t>(num_arms));
}

std::vector<int> DucbPolicy::select(std::int64_t, Rng&) {
  double total = 0.0;
  for (double c : counts_) total += c;
  const double log_total = total > 0.0 ? std::max(0.0, std::log(total)) : 0.0;
  for (int i = 0; i < num_arms_; ++i) {
    const double n = counts_[static_cast<size_t>(i)];
    if (n <= 0.0) {
      scores_[static_cast<size_t>(i)] = kInf;
    } else {
      scores_[static_cast<size_t>(i)] =
          sums_[static_cast<size_t>(i)] / n +
          2.0 * std::sqrt(xi_ * log_total / n);
    }
  }
  return top_l(scores_, plays_);
}

void DucbPolicy::update(std::int64_t, const RoundOutcome& outcome) {
  for (size_t i = 0; i < counts_.size(); ++i) {
    counts_[i] *= discount_;
    sums_[i] *= discount_;
  }
  for (size_t j = 0; j < outcome.arms.size(); ++j) {
    counts_[static_cast<size_t>(outcome.arms[j])] += 1.0;
    sums_[static_cast<size_t>(outcome.arms[j])] += outcome.rewards[j];
  }
}

void DucbPolicy::reset() {
  counts_.assign(static_cast<size_t>(num_arms_), 0.0);
  sums_.assign(static_cast<size_t>(num_arms_), 0.0);
}

// -- SwtsPolicy ---------------------------------------------------------------

SwtsPolicy::SwtsPolicy(int num_arms, int plays, std::int64_t window)
    : num_arms_(num_arms), plays_(plays), window_(window) {
  if (num_arms < 1 || plays < 1 || plays > num_arms) {
    throw std::invalid_argument("SwtsPolicy: need 1 <= plays <= arms");
  }
  if (window < 1) throw std::invalid_argument("SwtsPolicy: window >= 1");
  pulls_.assign(static_cast<size_t>(num_arms), 0);
  successes_.assign(static_cast<size_t>(num_arms), 0.0);
  scores_.resize(static_cast<size_t>(num_arms));
}

std::vector<int> SwtsPolicy::select(std::int64_t, Rng& rng) {
  for (int i = 0; i < num_arms_; ++i) {
    const auto n = static_cast<double>(pulls_[static_cast<size_t>(i)]);
    const double s = successes_[static_cast<size_t>(i)];
    scores_[static_cast<size_t>(i)] = rng.next_beta(s + 1.0, n - s + 1.0);
  }
  return top_l(scores_, plays_);
}

void SwtsPolicy::update(std::int64_t, const RoundOutcome& outcome) {
  buffer_.push_back(outcome);
  for (size_t j = 0; j < outcome.arms.size(); ++j) {
    pulls_[static_cast<size_t>(outcome.arms[j])] += 1;
    successes_[static_cast<size_t>(outcome.arms[j])] += outcome.rewards[j];
  }
  if (static_cast<std::int64_t>(buffer_.size()) > window_) {
    const RoundOutcome& old = buffer_.front();
    for (size_t j = 0; j < old.arms.size(); ++j) {
      pulls_[static_cast<size_t>(old.arms[j])] -= 1;
      successes_[static_cast<size_t>(old.arms[j])] -= old.rewards[j];
    }
    buffer_.pop_front();
  }
}

void SwtsPolicy::reset() {
  buffer_.clear();
  pulls_.assign(static_cast<size_t>(num_arms_), 0);
  successes_.assign(static_cast<size_t>(num_arms_), 0.0);
}

// -- Rexp3Policy --------------------------------------------------------------

Rexp3Policy::Rexp3Policy(int num_arms, int plays, std::int64_t batch)
    : num_arms_(num_arms), plays_(plays), batch_(batch) {
  if (num_arms < 1 || plays < 1 || plays > num_arms) {
    throw std::invalid_argument("Rexp3Policy: need 1 <= plays <= arms");
  }
  if (batch < 1) throw std::invalid_argument("Rexp3Policy: batch >= 1");
  const double k = static_cast<double>(num_arms);
  gamma_ = std::min(
      1.0, std::sqrt(k * std::log(k) / ((kE - 1.0) * static_cast<double>(batch))));
  if (num_arms == 1) gamma_ = 1.0;  // log K = 0
  weights_.assign(static_cast<size_t>(num_arms), 1.0);
  probs_.assign(static_cast<size_t>(num_arms), 1.0 / k);
}

std::vector<int> Rexp3Policy::select(std::int64_t, Rng& rng) {
  if (rounds_in_batch_ >= batch_) {
    weights_.assign(static_cast<size_t>(num_arms_), 1.0);
    rounds_in_batch_ = 0;
  }
  double wsum = 0.0;
  for (double w : weights_) wsum += w;
  for (int i = 0; i < num_arms_; ++i) {
    probs_[static_cast<size_t>(i)] =
        (1.0 - gamma_) * weights_[static_cast<size_t>(i)] / wsum +
        gamma_ / static_cast<double>(num_arms_);
  }

  std::vector<int> selection;
  selection.reserve(static_cast<size_t>(plays_));
  std::vector<char> taken(static_cast<size_t>(num_arms_), 0);
  double remaining = 1.0;
  for (int pick = 0; pick < plays_; ++pick) {
    const double u = rng.next_double() * remaining;
    double acc = 0.0;
    int chosen = -1;
    for (int i = 0; i < num_arms_; ++i) {
      if (taken[static_cast<size_t>(i)]) continue;
      acc += probs_[static_cast<size_t>(i)];
      if (u < acc) {
        chosen = i;
        break;
      }
    }
    if (chosen < 0) {  // rounding fell off the end; take the last free arm
      for (int i = num_arms_ - 1; i >= 0; --i) {
        if (!taken[static_cast<size_t>(i)]) {
          chosen = i;
          break;
        }
      }
    }
    taken[static_cast<size_t>(chosen)] = 1;
    remaining -= probs_[static_cast<size_t>(chosen)];
    selection.push_back(chosen);
  }
  return selection;
}

void Rexp3Policy::update(std::int64_t, const RoundOutcome& outcome) {
  for (size_t j = 0; j < outcome.arms.size(); ++j) {
    const auto i = static_cast<size_t>(outcome.arms[j]);
    const double xhat = outcome.rewards[j] / probs_[i];
    weights_[i] *= std::exp(gamma_ * xhat / static_cast<double>(num_arms_));
  }
  // Rescale so the weights stay finite over long batches; the ratios, and
  // therefore the probabilities, are unchanged.
  double wmax = 0.0;
  for (double w : weights_) wmax = std::max(wmax, w);
  if (wmax > 1e100) {
    for (double& w : weights_) w /= wmax;
  }
  ++rounds_in_batch_;
}

void Rexp3Policy::reset() {
  weights_.assign(static_cast<size_t>(num_arms_), 1.0);
  probs_.assign(static_cast<size_t>(num_arms_), 1.0 / static_cast<double>(num_arms_));
  rounds_in_batch_ = 0;
}

}  // namespace nsmab
