#include "nsmab/adwin.hpp"

#include <cmath>
#include <stdexcept>

namespace nsmab {

double epsilon_cut(std::int64_t n1, std::int64_t n2, double delta) {
  if (n1 < 1 || n2 < 1) {
    throw std::invalid_argument("epsilon_cut: both sides need >= 1 sample");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("epsilon_cut: delta must be in (0,1)");
  }
  const double li = -std::log(delta);
  return std::sqrt(li / (2.0 * static_cast<double>(n1))) +
         std::sqrt(li / (2.0 * static_cast<double>(n2)));
}

CutThresholds::CutThresholds(double delta) : delta_(delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("CutThresholds: delta must be in (0,1)");
  }
  log_inv_delta_ = -std::log(delta);
  side_.assign(1, 0.0);  // entry 0 unused
}

const double* CutThresholds::sides(std::int64_t max_n) const {
  while (static_cast<std::int64_t>(side_.size()) <= max_n) {
    const double n = static_cast<double>(side_.size());
    side_.push_back(std::sqrt(log_inv_delta_ / (2.0 * n)));
  }
  return side_.data();
}

void Window::append(double x) {
  values_.push_back(x);
  prefix_.push_back(prefix_.back() + x);
}

void Window::drop_prefix(std::int64_t count) {
  if (count < 0 || count > size()) {
    throw std::logic_error("Window::drop_prefix: count out of range");
  }
  values_.erase(values_.begin(), values_.begin() + count);
  prefix_.assign(1, 0.0);
  prefix_.reserve(values_.size() + 1);
  for (double v : values_) prefix_.push_back(prefix_.back() + v);
  start_time_ += count;
}

void Window::clear() {
  values_.clear();
  prefix_.assign(1, 0.0);
}

double Window::mean() const {
  if (empty()) throw std::logic_error("Window::mean: empty window");
  return total() / static_cast<double>(size());
}

double Window::prefix_mean(std::int64_t n) const {
  return prefix_[static_cast<size_t>(n)] / static_cast<double>(n);
}

double Window::suffix_mean(std::int64_t n) const {
  const std::int64_t sz = size();
  return (total() - prefix_[static_cast<size_t>(sz - n)]) /
         static_cast<double>(n);
}

std::optional<std::int64_t> first_cut(const Window& w, const CutThresholds& thr,
                                      std::int64_t stride) {
  const std::int64_t n = w.size();
  if (n < 2) return std::nullopt;
  const double* side = thr.sides(n);
  const double* pre = w.prefix_sums();
  const double total = w.total();
  // Compare |s1/m - s2/(n-m)| >= side[m] + side[n-m], scaled by m(n-m) to
  // keep divisions out of the loop.
  for (std::int64_t m = stride; m < n; m += stride) {
    const double n1 = static_cast<double>(m);
    const double n2 = static_cast<double>(n - m);
    const double s1 = pre[m];
    const double s2 = total - s1;
    const double gap = std::fabs(s1 * n2 - s2 * n1);
    const double threshold = (side[m] + side[n - m]) * n1 * n2;
    if (gap >= threshold) return m;
  }
  return std::nullopt;
}

AdwinDetector::AdwinDetector(double delta, std::int64_t check_stride,
                             std::optional<std::int64_t> horizon)
    : thresholds_(delta), stride_(check_stride), horizon_(horizon) {
  if (check_stride < 1) {
    throw std::invalid_argument("AdwinDetector: check_stride must be >= 1");
  }
}

DetectionReport AdwinDetector::observe(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("AdwinDetector::observe: value outside [0,1]");
  }
  if (horizon_ && rounds_seen_ >= *horizon_) {
    throw std::logic_error("AdwinDetector::observe: past configured horizon");
  }
  ++rounds_seen_;
  window_.append(x);

  DetectionReport report;
  while (auto cut = first_cut(window_, thresholds_, stride_)) {
    if (!report.detected) {
      report.detected = true;
      report.breakpoint = window_.start_time() + *cut - 1;
    }
    window_.drop_prefix(*cut);
  }
  report.retained_size = window_.size();
  last_estimate_ = window_.mean();
  return report;
}

std::optional<std::int64_t> AdwinDetector::would_detect() const {
  return first_cut(window_, thresholds_, stride_);
}

double AdwinDetector::mean_estimate() const {
  if (!window_.empty()) return window_.mean();
  if (rounds_seen_ > 0) return last_estimate_;
  throw std::logic_error("AdwinDetector::mean_estimate: no data yet");
}

}  // namespace nsmab
