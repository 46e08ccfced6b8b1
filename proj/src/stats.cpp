#include "nsmab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace nsmab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double kl_bernoulli(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("kl_bernoulli: arguments must be in [0,1]");
  }
  if (p == q) return 0.0;
  if (q == 0.0 || q == 1.0) return kInf;
  double d = 0.0;
  if (p > 0.0) d += p * std::log(p / q);
  if (p < 1.0) d += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return d;
}

double kl_ucb_index(double mu_hat, std::int64_t n, std::int64_t t) {
  if (t < 1) throw std::invalid_argument("kl_ucb_index: t must be >= 1");
  if (n == 0) return 1.0;
  const double budget =
      std::log(static_cast<double>(t)) - std::log(static_cast<double>(n));
  if (budget <= 0.0) return mu_hat;
  if (mu_hat >= 1.0) return 1.0;
  const double nd = static_cast<double>(n);
  double lo = mu_hat;
  double hi = 1.0;
  for (int iter = 0; iter < 64; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (nd * kl_bernoulli(mu_hat, mid) <= budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

std::vector<int> top_l(std::span<const double> scores, int l) {
  const int k = static_cast<int>(scores.size());
  if (l < 1 || l > k) {
    throw std::invalid_argument("top_l: need 1 <= l <= number of scores");
  }
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + l, order.end(),
                    [&](int a, int b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  order.resize(l);
  return order;
}

double regret_step(std::span<const double> oracle_means,
                   std::span<const int> selection) {
  const auto best = top_l(oracle_means, static_cast<int>(selection.size()));
  double best_sum = 0.0;
  for (int i : best) best_sum += oracle_means[i];
  double got = 0.0;
  for (int i : selection) {
    if (i < 0 || i >= static_cast<int>(oracle_means.size())) {
      throw std::invalid_argument("regret_step: arm index out of range");
    }
    got += oracle_means[i];
  }
  return std::max(0.0, best_sum - got);
}

}  // namespace nsmab
