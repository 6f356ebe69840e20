#pragma once

// Number classes (primes, squares, numbers with many prime factors) and
// their cross-tabulation against the gap partition.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sloane_gap/errors.hpp"
#include "sloane_gap/format.hpp"
#include "sloane_gap/gap.hpp"
#include "sloane_gap/ingest.hpp"
#include "sloane_gap/stats.hpp"

namespace sloane_gap {

// Smallest-prime-factor sieve over [0, n_end].
class Sieve {
 public:
  explicit Sieve(std::uint32_t n_end) : spf_(static_cast<std::size_t>(n_end) + 1, 0) {
    if (n_end < 2) throw DomainError("sieve needs n_end >= 2");
    spf_[1] = 1;
    for (std::uint64_t i = 2; i <= n_end; ++i) {
      if (spf_[i] != 0) continue;
      spf_[i] = static_cast<std::uint32_t>(i);
      for (std::uint64_t j = i * i; j <= n_end; j += i) {
        if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
      }
    }
  }

  std::uint32_t n_end() const noexcept { return static_cast<std::uint32_t>(spf_.size() - 1); }
  bool is_prime(std::uint32_t n) const { return n >= 2 && spf_.at(n) == n; }
  std::uint32_t smallest_factor(std::uint32_t n) const { return spf_.at(n); }
  std::span<const std::uint32_t> smallest_factors() const noexcept { return spf_; }

 private:
  std::vector<std::uint32_t> spf_;
};

inline Sieve sieve(std::uint32_t n_end) { return Sieve(n_end); }

// Number of prime factors of n counted with multiplicity; omega(1) = 0.
inline int omega(std::uint32_t n, std::span<const std::uint32_t> spf) {
  if (n < 1 || n >= spf.size()) throw RangeError("omega argument outside the sieve");
  int count = 0;
  while (n > 1) {
    n /= spf[n];
    ++count;
  }
  return count;
}

// Exact integer square root; the float estimate is only a starting point.
inline std::uint64_t isqrt(std::uint64_t n) {
  using wide = unsigned __int128;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (static_cast<wide>(r) * r > n) --r;
  while (static_cast<wide>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline bool is_square(std::uint64_t n) {
  const auto r = isqrt(n);
  return r * r == n;
}

struct ManyFactorsParams {
  std::uint64_t window = 100;
  double percentile = 95.0;
};

// flag[i] marks the i-th number of the range when its omega reaches the
// nearest-rank percentile of omega over [n - window, n + window] clipped to
// the range.
inline std::vector<bool> many_factors_flags(std::span<const int> omega_over_range,
                                            const ManyFactorsParams& params = {}) {
  if (!(params.percentile > 0.0 && params.percentile < 100.0)) throw DomainError("percentile must lie in (0, 100)");
  const std::size_t size = omega_over_range.size();
  std::vector<bool> flags(size, false);
  std::vector<int> scratch;
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t lo = i > params.window ? i - params.window : 0;
    const std::size_t hi = std::min<std::size_t>(i + params.window, size - 1);
    scratch.assign(omega_over_range.begin() + static_cast<std::ptrdiff_t>(lo),
                   omega_over_range.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    flags[i] = omega_over_range[i] >= percentile_nearest_rank_inplace<int>(scratch, params.percentile);
  }
  return flags;
}

struct ClassFlags {
  std::uint64_t n_start = 0;
  std::uint64_t n_end = 0;
  std::vector<bool> is_prime;
  std::vector<bool> is_square;
  std::vector<bool> many_factors;
  std::vector<int> omega;

  std::size_t index(std::uint64_t n) const { return static_cast<std::size_t>(n - n_start); }
};

inline ClassFlags build_class_flags(std::uint64_t n_start, std::uint64_t n_end, const ManyFactorsParams& params = {}) {
  if (n_start < 1 || n_end < n_start) throw DomainError("class range needs 1 <= n_start <= n_end");
  if (n_end > std::numeric_limits<std::uint32_t>::max()) throw DomainError("class range too large for the sieve");
  const Sieve s(static_cast<std::uint32_t>(std::max<std::uint64_t>(n_end, 2)));
  ClassFlags flags{n_start, n_end, {}, {}, {}, {}};
  for (std::uint64_t n = n_start; n <= n_end; ++n) {
    const auto n32 = static_cast<std::uint32_t>(n);
    flags.is_prime.push_back(s.is_prime(n32));
    flags.is_square.push_back(is_square(n));
    flags.omega.push_back(omega(n32, s.smallest_factors()));
  }
  flags.many_factors = many_factors_flags(flags.omega, params);
  return flags;
}

enum class NumberClass { primes, squares, many_factors };

inline constexpr NumberClass kClassOrder[] = {NumberClass::primes, NumberClass::squares, NumberClass::many_factors};

inline const char* class_name(NumberClass c) {
  switch (c) {
    case NumberClass::primes: return "primes";
    case NumberClass::squares: return "squares";
    case NumberClass::many_factors: return "many_factors";
  }
  return "?";
}

inline bool in_class(const ClassFlags& flags, NumberClass c, std::uint64_t n) {
  const auto i = flags.index(n);
  switch (c) {
    case NumberClass::primes: return flags.is_prime[i];
    case NumberClass::squares: return flags.is_square[i];
    case NumberClass::many_factors: return flags.many_factors[i];
  }
  return false;
}

struct ClassRow {
  std::string name;
  std::uint64_t count_in_a = 0;     // class members in A
  std::uint64_t disjoint_in_a = 0;  // members in A not claimed by an earlier class
  double percent_of_a = 0.0;
  double cumulative_percent_of_a = 0.0;  // over disjoint counts
  std::uint64_t count_in_class = 0;
  double percent_of_class_in_a = 0.0;
  double membership_ratio = 0.0;  // P(A | class) / P(A | not class)
};

struct ClassCrossTab {
  std::uint64_t size_a = 0;
  std::uint64_t range_size = 0;
  std::vector<ClassRow> rows;  // primes, squares, many_factors
  ClassRow unexplained;        // members of no class
};

namespace detail {

inline double percent(std::uint64_t part, std::uint64_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

inline double membership_ratio(std::uint64_t in_a, std::uint64_t members, std::uint64_t size_a, std::uint64_t range) {
  if (members == 0 || in_a == 0) return 0.0;
  const double inside = static_cast<double>(in_a) / static_cast<double>(members);
  const std::uint64_t others = range - members;
  const double outside = others == 0 ? 0.0 : static_cast<double>(size_a - in_a) / static_cast<double>(others);
  return outside == 0.0 ? std::numeric_limits<double>::infinity() : inside / outside;
}

inline void check_same_range(const GapPartition& partition, const ClassFlags& flags) {
  if (partition.n_start() != flags.n_start || partition.n_end() != flags.n_end) {
    throw RangeMismatch("partition and class flags cover different ranges");
  }
}

}  // namespace detail

inline ClassCrossTab cross_tab(const GapPartition& partition, const ClassFlags& flags) {
  detail::check_same_range(partition, flags);
  ClassCrossTab tab;
  tab.size_a = partition.size_a();
  tab.range_size = partition.range_size();

  std::vector<bool> claimed(tab.range_size, false);
  std::uint64_t cumulative = 0;
  for (NumberClass c : kClassOrder) {
    ClassRow row;
    row.name = class_name(c);
    for (std::uint64_t n = flags.n_start; n <= flags.n_end; ++n) {
      if (!in_class(flags, c, n)) continue;
      ++row.count_in_class;
      const bool a = partition.in_a(n);
      if (a) ++row.count_in_a;
      if (!claimed[flags.index(n)]) {
        claimed[flags.index(n)] = true;
        if (a) ++row.disjoint_in_a;
      }
    }
    cumulative += row.disjoint_in_a;
    row.percent_of_a = detail::percent(row.count_in_a, tab.size_a);
    row.cumulative_percent_of_a = detail::percent(cumulative, tab.size_a);
    row.percent_of_class_in_a = detail::percent(row.count_in_a, row.count_in_class);
    row.membership_ratio = detail::membership_ratio(row.count_in_a, row.count_in_class, tab.size_a, tab.range_size);
    tab.rows.push_back(std::move(row));
  }

  ClassRow& rest = tab.unexplained;
  rest.name = "unexplained";
  for (std::uint64_t n = flags.n_start; n <= flags.n_end; ++n) {
    if (claimed[flags.index(n)]) continue;
    ++rest.count_in_class;
    if (partition.in_a(n)) ++rest.count_in_a;
  }
  rest.disjoint_in_a = rest.count_in_a;
  rest.percent_of_a = detail::percent(rest.count_in_a, tab.size_a);
  rest.cumulative_percent_of_a = detail::percent(cumulative + rest.count_in_a, tab.size_a);
  rest.percent_of_class_in_a = detail::percent(rest.count_in_a, rest.count_in_class);
  rest.membership_ratio = detail::membership_ratio(rest.count_in_a, rest.count_in_class, tab.size_a, tab.range_size);
  return tab;
}

struct OmegaShare {
  std::uint64_t count = 0;
  std::uint64_t in_a = 0;
  double proportion_in_a = 0.0;
};

inline std::map<int, OmegaShare> proportion_in_a_by_omega(const GapPartition& partition, const ClassFlags& flags) {
  detail::check_same_range(partition, flags);
  std::map<int, OmegaShare> shares;
  for (std::uint64_t n = flags.n_start; n <= flags.n_end; ++n) {
    auto& s = shares[flags.omega[flags.index(n)]];
    ++s.count;
    if (partition.in_a(n)) ++s.in_a;
  }
  for (auto& [omega_value, s] : shares) {
    s.proportion_in_a = static_cast<double>(s.in_a) / static_cast<double>(s.count);
  }
  return shares;
}

struct BelowGapEntry {
  std::uint64_t n = 0;
  std::uint64_t count = 0;
  std::int64_t limit = 0;  // least N(n) that would have put n in A
};

// Class members left outside A, with the count each would have needed.
inline std::vector<BelowGapEntry> members_below_gap(const OccurrenceTable& table, const GapPartition& partition,
                                                    const ClassFlags& flags, NumberClass c) {
  detail::check_same_range(partition, flags);
  std::vector<BelowGapEntry> out;
  for (std::uint64_t n = flags.n_start; n <= flags.n_end; ++n) {
    if (in_class(flags, c, n) && !partition.in_a(n)) {
      out.push_back({n, table.count(n), limit_for_boundary(partition.boundary(n))});
    }
  }
  return out;
}

inline void write_table1_csv(std::ostream& os, std::span<const BelowGapEntry> rows) {
  os << "n,count,limit\n";
  for (const auto& r : rows) os << r.n << ',' << r.count << ',' << r.limit << '\n';
}

inline void write_table2_csv(std::ostream& os, const ClassCrossTab& tab) {
  os << "class,in_A,pct_of_A,cum_pct,pct_class_in_A,ratio\n";
  auto emit = [&os](const ClassRow& r) {
    os << r.name << ',' << r.count_in_a << ',' << format_fixed(r.percent_of_a) << ','
       << format_fixed(r.cumulative_percent_of_a) << ',' << format_fixed(r.percent_of_class_in_a) << ','
       << format_fixed(r.membership_ratio) << '\n';
  };
  for (const auto& r : tab.rows) emit(r);
  emit(tab.unexplained);
}

inline void write_figure3_csv(std::ostream& os, const std::map<int, OmegaShare>& shares) {
  os << "omega,proportion_in_A,count\n";
  for (const auto& [omega_value, s] : shares) {
    os << omega_value << ',' << format_fixed(s.proportion_in_a) << ',' << s.count << '\n';
  }
}

}  // namespace sloane_gap
