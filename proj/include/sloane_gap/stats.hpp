#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "sloane_gap/errors.hpp"

namespace sloane_gap {

// 1-based rank of the nearest-rank p-th percentile among m values:
// ceil(p/100 * m), computed as ceil(p*m/100) so integral p stays exact.
inline std::size_t nearest_rank(double p, std::size_t m) {
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(m) / 100.0));
  return std::clamp<std::size_t>(rank, 1, m);
}

// Nearest-rank percentile. Reorders `scratch` in place; the result is always
// one of its elements.
template <class T>
T percentile_nearest_rank_inplace(std::span<T> scratch, double p) {
  if (scratch.empty()) throw EmptyInput("percentile of an empty set");
  if (!(p > 0.0 && p < 100.0)) throw DomainError("percentile must lie in (0, 100)");
  auto nth = scratch.begin() + static_cast<std::ptrdiff_t>(nearest_rank(p, scratch.size()) - 1);
  std::nth_element(scratch.begin(), nth, scratch.end());
  return *nth;
}

template <class T>
T percentile_nearest_rank(std::span<const T> values, double p) {
  std::vector<T> scratch(values.begin(), values.end());
  return percentile_nearest_rank_inplace<T>(scratch, p);
}

inline double percentile_nearest_rank(const std::vector<double>& values, double p) {
  return percentile_nearest_rank<double>(std::span<const double>(values), p);
}

}  // namespace sloane_gap
