#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace nsmab {

// Two-sided Hoeffding cut threshold
//   sqrt(log(1/delta) / (2 n1)) + sqrt(log(1/delta) / (2 n2)).
double epsilon_cut(std::int64_t n1, std::int64_t n2, double delta);

// Lazily grown table of the per-side terms sqrt(log(1/delta) / (2 n)),
// shared by every split test at a fixed confidence level.
class CutThresholds {
 public:
  explicit CutThresholds(double delta);

  double delta() const { return delta_; }

  // Pointer to the table with entries valid for 1..max_n (entry 0 unused).
  const double* sides(std::int64_t max_n) const;

 private:
  double delta_;
  double log_inv_delta_;
  mutable std::vector<double> side_;
};

// Contiguous run of values in [0,1] with prefix sums, so the mean of any
// prefix/suffix split is O(1). start_time tracks the global round of the
// oldest retained element.
class Window {
 public:
  void append(double x);
  // Drop the oldest `count` elements. Prefix sums are rebuilt from scratch
  // so rounding error stays bounded by the current length.
  void drop_prefix(std::int64_t count);
  void clear();

  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
  bool empty() const { return values_.empty(); }
  double total() const { return prefix_.back(); }
  double mean() const;
  double prefix_mean(std::int64_t n) const;
  double suffix_mean(std::int64_t n) const;
  double value(std::int64_t i) const { return values_[static_cast<size_t>(i)]; }
  // prefix_sums()[k] = sum of the first k values; k in [0, size()].
  const double* prefix_sums() const { return prefix_.data(); }

  std::int64_t start_time() const { return start_time_; }
  void set_start_time(std::int64_t t) { start_time_ = t; }

 private:
  std::int64_t start_time_ = 1;
  std::vector<double> values_;
  std::vector<double> prefix_{0.0};
};

// First prefix length m (scanned oldest-first, every `stride`-th candidate)
// whose prefix/suffix mean gap reaches the cut threshold; nullopt when no
// split qualifies. stride > 1 subsamples the candidate cut points and is an
// approximation of the exact scan.
std::optional<std::int64_t> first_cut(const Window& w, const CutThresholds& thr,
                                      std::int64_t stride = 1);

struct DetectionReport {
  bool detected = false;
  // Global round of the last element of the dropped prefix at the first
  // qualifying split; the retained window starts right after it.
  std::optional<std::int64_t> breakpoint;
  std::int64_t retained_size = 0;
};

// Adaptive-window mean tracker over a univariate stream. Each new value is
// appended, then the window repeatedly drops its oldest prefix while any
// split shows a significant mean gap.
class AdwinDetector {
 public:
  explicit AdwinDetector(double delta, std::int64_t check_stride = 1,
                         std::optional<std::int64_t> horizon = std::nullopt);

  DetectionReport observe(double x);

  // Scan without mutating; returns the first qualifying prefix length.
  std::optional<std::int64_t> would_detect() const;

  // Mean of the current window; falls back to the last computed estimate if
  // the window is somehow empty, and rejects the query before any data.
  double mean_estimate() const;

  std::int64_t window_size() const { return window_.size(); }
  std::int64_t window_start() const { return window_.start_time(); }
  std::int64_t rounds_seen() const { return rounds_seen_; }
  double delta() const { return thresholds_.delta(); }
  const Window& window() const { return window_; }

 private:
  Window window_;
  CutThresholds thresholds_;
  std::int64_t stride_;
  std::optional<std::int64_t> horizon_;
  std::int64_t rounds_seen_ = 0;
  double last_estimate_ = 0.0;
};

}  // namespace nsmab
