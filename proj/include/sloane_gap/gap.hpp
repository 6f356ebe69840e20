#pragma once

// Percentile-window boundary of the gap in the N(n) cloud, the resulting
// above/below partition (set A), and a bimodality score for comparing clouds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "sloane_gap/errors.hpp"
#include "sloane_gap/format.hpp"
#include "sloane_gap/ingest.hpp"
#include "sloane_gap/stats.hpp"

namespace sloane_gap {

struct GapParams {
  std::uint64_t n_start = 301;
  std::uint64_t n_end = 10000;
  double percentile = 82.0;
  std::uint64_t c_small = 100;  // window half-width for n <= 1000
  std::uint64_t c_large = 350;  // window half-width for n > 1000

  static constexpr std::uint64_t kSmallWindowLimit = 1000;

  std::uint64_t half_width(std::uint64_t n) const noexcept {
    return n <= kSmallWindowLimit ? c_small : c_large;
  }

  void validate() const {
    if (n_start < 1 || n_end < n_start) throw DomainError("gap range needs 1 <= n_start <= n_end");
    if (!(percentile > 0.0 && percentile < 100.0)) throw DomainError("gap percentile must lie in (0, 100)");
    if (c_small < 1 || c_large < 1) throw DomainError("window half-widths must be at least 1");
  }

  // [n - c, n + c] clipped to the study range.
  std::pair<std::uint64_t, std::uint64_t> window(std::uint64_t n) const noexcept {
    const auto c = half_width(n);
    return {n > n_start + c ? n - c : n_start, std::min(n + c, n_end)};
  }

  friend bool operator==(const GapParams&, const GapParams&) = default;
};

inline nlohmann::json to_json(const GapParams& p) {
  return {{"n_start", p.n_start}, {"n_end", p.n_end}, {"percentile", p.percentile},
          {"c_small", p.c_small}, {"c_large", p.c_large}};
}

// Set A and its complement over [n_start, n_end].
class GapPartition {
 public:
  GapPartition(GapParams params, std::vector<double> boundary, std::vector<bool> in_a)
      : params_(params), boundary_(std::move(boundary)), in_a_(std::move(in_a)) {
    size_a_ = static_cast<std::uint64_t>(std::count(in_a_.begin(), in_a_.end(), true));
  }

  const GapParams& params() const noexcept { return params_; }
  std::uint64_t n_start() const noexcept { return params_.n_start; }
  std::uint64_t n_end() const noexcept { return params_.n_end; }
  std::uint64_t range_size() const noexcept { return n_end() - n_start() + 1; }

  double boundary(std::uint64_t n) const { return boundary_.at(n - n_start()); }
  bool in_a(std::uint64_t n) const { return in_a_.at(n - n_start()); }
  std::uint64_t size_a() const noexcept { return size_a_; }
  double fraction_a() const noexcept { return static_cast<double>(size_a_) / static_cast<double>(range_size()); }

  friend bool operator==(const GapPartition&, const GapPartition&) = default;

 private:
  GapParams params_;
  std::vector<double> boundary_;
  std::vector<bool> in_a_;
  std::uint64_t size_a_ = 0;
};

namespace detail {

inline void require_covers(const OccurrenceTable& table, const GapParams& params) {
  params.validate();
  if (table.n_max() < params.n_end) throw RangeError("occurrence table does not cover the study range");
}

inline double boundary_with_scratch(const OccurrenceTable& table, std::uint64_t n, const GapParams& params,
                                    std::vector<std::uint64_t>& scratch) {
  const auto [lo, hi] = params.window(n);
  const auto counts = table.counts();
  scratch.assign(counts.begin() + static_cast<std::ptrdiff_t>(lo - 1), counts.begin() + static_cast<std::ptrdiff_t>(hi));
  return static_cast<double>(percentile_nearest_rank_inplace<std::uint64_t>(scratch, params.percentile));
}

}  // namespace detail

// Nearest-rank percentile of N over the clipped window around n.
inline double boundary_at(const OccurrenceTable& table, std::uint64_t n, const GapParams& params = {}) {
  detail::require_covers(table, params);
  if (n < params.n_start || n > params.n_end) throw RangeError("n lies outside the study range");
  std::vector<std::uint64_t> scratch;
  return detail::boundary_with_scratch(table, n, params, scratch);
}

// n is in A iff N(n) > boundary(n).
inline GapPartition classify(const OccurrenceTable& table, const GapParams& params = {}) {
  detail::require_covers(table, params);
  std::vector<double> boundary;
  std::vector<bool> in_a;
  boundary.reserve(params.n_end - params.n_start + 1);
  in_a.reserve(boundary.capacity());
  std::vector<std::uint64_t> scratch;
  for (std::uint64_t n = params.n_start; n <= params.n_end; ++n) {
    const double b = detail::boundary_with_scratch(table, n, params, scratch);
    boundary.push_back(b);
    in_a.push_back(static_cast<double>(table.count(n)) > b);
  }
  return GapPartition(params, std::move(boundary), std::move(in_a));
}

// Smallest integer strictly above a boundary.
inline std::int64_t limit_for_boundary(double boundary) {
  return static_cast<std::int64_t>(std::floor(boundary)) + 1;
}

// Least N(n) that would put n in A.
inline std::int64_t limit_value(const OccurrenceTable& table, std::uint64_t n, const GapParams& params = {}) {
  return limit_for_boundary(boundary_at(table, n, params));
}

inline constexpr std::size_t kGapScoreMinPoints = 20;

// Widest empty band between consecutive order statistics of y inside its
// nearest-rank p10..p90 range, relative to that range. Zero when p90 == p10.
inline double window_gap_statistic(std::vector<double> y) {
  if (y.empty()) throw EmptyInput("gap statistic of an empty window");
  std::sort(y.begin(), y.end());
  const std::size_t i10 = nearest_rank(10.0, y.size()) - 1;
  const std::size_t i90 = nearest_rank(90.0, y.size()) - 1;
  const double spread = y[i90] - y[i10];
  if (!(spread > 0.0)) return 0.0;
  double widest = 0.0;
  for (std::size_t i = i10 + 1; i <= i90; ++i) widest = std::max(widest, y[i] - y[i - 1]);
  return widest / spread;
}

inline double median(std::vector<double> values) {
  if (values.empty()) throw EmptyInput("median of an empty set");
  std::sort(values.begin(), values.end());
  const auto mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

// Windows centred at n_start, n_start + c, ... (c = half-width at the centre),
// each clipped to the study range. Windows with fewer than 20 nonzero counts
// are skipped; the score is the median of the per-window statistics, or 0
// if no window qualifies.
inline double gap_score(const OccurrenceTable& table, const GapParams& params = {}) {
  detail::require_covers(table, params);
  std::vector<double> per_window;
  std::vector<double> y;
  for (std::uint64_t n = params.n_start; n <= params.n_end; n += params.half_width(n)) {
    const auto [lo, hi] = params.window(n);
    y.clear();
    for (std::uint64_t m = lo; m <= hi; ++m) {
      if (const auto c = table.count(m); c >= 1) y.push_back(std::log(static_cast<double>(c)));
    }
    if (y.size() >= kGapScoreMinPoints) per_window.push_back(window_gap_statistic(y));
  }
  return per_window.empty() ? 0.0 : median(std::move(per_window));
}

inline void write_partition_csv(std::ostream& os, const OccurrenceTable& table, const GapPartition& partition) {
  os << "n,count,boundary,in_A\n";
  for (std::uint64_t n = partition.n_start(); n <= partition.n_end(); ++n) {
    os << n << ',' << table.count(n) << ',' << format_real(partition.boundary(n)) << ','
       << (partition.in_a(n) ? 1 : 0) << '\n';
  }
}

}  // namespace sloane_gap
