#pragma once

// Reading OEIS "stripped" snapshots and building the occurrence function
// N(n): the number of times n appears among all listed sequence terms.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <ranges>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "sloane_gap/errors.hpp"

namespace sloane_gap {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::size_t kMaxTermDigits = 40;
inline constexpr std::uint64_t kDefaultNMax = 10000;

// One sequence term. Terms of at most kMaxTermDigits digits hold their exact
// value; longer ones are kept as digit text only and can never fall inside a
// counting range.
class Term {
 public:
  Term() = default;
  explicit Term(BigInt value) : value_(std::move(value)) {}
  explicit Term(std::int64_t value) : value_(value) {}

  static Term oversized(bool negative, std::string digits) {
    Term t;
    t.negative_ = negative;
    t.digits_ = std::move(digits);
    return t;
  }

  bool is_oversized() const noexcept { return !digits_.empty(); }
  bool is_negative() const noexcept { return is_oversized() ? negative_ : value_ < 0; }

  // Exact value; zero for oversized terms (check is_oversized first).
  const BigInt& value() const noexcept { return value_; }

  // n if the term equals some n in [1, n_max], otherwise 0.
  std::uint64_t index_in(std::uint64_t n_max) const noexcept {
    if (is_oversized() || value_ < 1 || value_ > n_max) return 0;
    return static_cast<std::uint64_t>(value_);
  }

  std::string to_string() const {
    if (is_oversized()) return (negative_ ? "-" : "") + digits_;
    return value_.str();
  }

  friend bool operator==(const Term& a, const Term& b) {
    return a.negative_ == b.negative_ && a.digits_ == b.digits_ && a.value_ == b.value_;
  }

 private:
  BigInt value_{0};
  std::string digits_;
  bool negative_ = false;
};

struct SequenceRecord {
  std::uint64_t id = 0;  // A-number without the "A"
  std::vector<Term> terms;

  friend bool operator==(const SequenceRecord&, const SequenceRecord&) = default;
};

namespace detail {

inline bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

inline Term parse_term(std::string_view token) {
  bool negative = false;
  std::string_view digits = token;
  if (!digits.empty() && digits.front() == '-') {
    negative = true;
    digits.remove_prefix(1);
  }
  if (!all_digits(digits)) {
    throw MalformedLine("non-integer term '" + std::string(token) + "'");
  }
  auto first = digits.find_first_not_of('0');
  digits = first == std::string_view::npos ? std::string_view("0") : digits.substr(first);

  if (digits.size() > kMaxTermDigits) return Term::oversized(negative, std::string(digits));
  if (digits.size() <= 18) {
    std::int64_t v = 0;
    std::from_chars(digits.data(), digits.data() + digits.size(), v);
    return Term(negative ? -v : v);
  }
  BigInt v{std::string(digits)};
  if (negative) v = -v;
  return Term(std::move(v));
}

}  // namespace detail

// Parses one line of a stripped file. Comment ('#') and blank lines yield
// std::nullopt; anything else must be "A<digits> ,t1,t2,...,".
inline std::optional<SequenceRecord> parse_line(std::string_view text) {
  while (!text.empty() && (text.back() == '\r' || text.back() == '\n')) text.remove_suffix(1);
  if (text.find_first_not_of(" \t") == std::string_view::npos) return std::nullopt;
  if (text.front() == '#') return std::nullopt;

  auto space = text.find(' ');
  if (text.front() != 'A' || space == std::string_view::npos) {
    throw MalformedLine("expected identifier 'A<digits>' followed by a space");
  }
  std::string_view id_text = text.substr(1, space - 1);
  if (!detail::all_digits(id_text) || id_text.size() > 18) {
    throw MalformedLine("bad identifier '" + std::string(text.substr(0, space)) + "'");
  }
  SequenceRecord record;
  std::from_chars(id_text.data(), id_text.data() + id_text.size(), record.id);
  if (record.id == 0) throw MalformedLine("identifier must be positive");

  std::string_view body = text.substr(space + 1);
  if (body.empty() || body.front() != ',') throw MalformedLine("term list must start with ','");
  body.remove_prefix(1);
  if (!body.empty() && body.back() == ',') body.remove_suffix(1);
  if (body.empty()) throw MalformedLine("empty term list");

  while (true) {
    const auto comma = body.find(',');
    record.terms.push_back(detail::parse_term(body.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return record;
}

// Inverse of parse_line for valid records: "A000045 ,0,1,1,2,".
inline std::string format_record(const SequenceRecord& record) {
  std::string id = std::to_string(record.id);
  std::string line = "A" + std::string(id.size() < 6 ? 6 - id.size() : 0, '0') + id + " ,";
  for (const auto& t : record.terms) {
    line += t.to_string();
    line += ',';
  }
  return line;
}

// N(n) for n in [1, n_max] plus snapshot metadata. Immutable once built.
class OccurrenceTable {
 public:
  OccurrenceTable() = default;

  // counts[i] is N(i + 1); total_terms_seen defaults to the sum of counts.
  explicit OccurrenceTable(std::vector<std::uint64_t> counts, std::string snapshot_label = {},
                           std::optional<std::uint64_t> total_terms_seen = std::nullopt)
      : counts_(std::move(counts)), snapshot_label_(std::move(snapshot_label)) {
    auto sum = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
    total_terms_seen_ = total_terms_seen.value_or(sum);
    if (total_terms_seen_ < sum) throw DomainError("total_terms_seen is smaller than the sum of counts");
  }

  std::uint64_t n_max() const noexcept { return counts_.size(); }
  std::uint64_t count(std::uint64_t n) const { return counts_.at(n - 1); }
  // N(1)..N(n_max).
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  std::uint64_t total_terms_seen() const noexcept { return total_terms_seen_; }
  std::uint64_t in_range_total() const noexcept {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
  }
  const std::string& snapshot_label() const noexcept { return snapshot_label_; }

  friend bool operator==(const OccurrenceTable&, const OccurrenceTable&) = default;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_terms_seen_ = 0;
  std::string snapshot_label_;
};

// Incremental builder. Partial counters over disjoint input chunks merge
// by element-wise addition.
class OccurrenceCounter {
 public:
  explicit OccurrenceCounter(std::uint64_t n_max = kDefaultNMax) : counts_(n_max, 0) {
    if (n_max == 0) throw DomainError("n_max must be at least 1");
  }

  void add(const SequenceRecord& record) {
    for (const auto& term : record.terms) {
      if (auto n = term.index_in(counts_.size()); n != 0) ++counts_[n - 1];
    }
    total_terms_seen_ += record.terms.size();
  }

  void merge(const OccurrenceCounter& other) {
    if (other.counts_.size() != counts_.size()) throw RangeMismatch("cannot merge counters with different n_max");
    std::transform(counts_.begin(), counts_.end(), other.counts_.begin(), counts_.begin(), std::plus<>{});
    total_terms_seen_ += other.total_terms_seen_;
  }

  OccurrenceTable finish(std::string snapshot_label = {}) const {
    return OccurrenceTable(counts_, std::move(snapshot_label), total_terms_seen_);
  }

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_terms_seen_ = 0;
};

template <std::ranges::input_range Records>
  requires std::convertible_to<std::ranges::range_reference_t<Records>, const SequenceRecord&>
OccurrenceTable build_counts(Records&& records, std::uint64_t n_max = kDefaultNMax,
                             std::string snapshot_label = {}) {
  OccurrenceCounter counter(n_max);
  for (const SequenceRecord& r : records) counter.add(r);
  return counter.finish(std::move(snapshot_label));
}

struct IngestOptions {
  std::uint64_t n_max = kDefaultNMax;
  bool strict = false;
  std::string snapshot_label;
};

struct SkippedLine {
  std::size_t line_number;
  std::string reason;
};

struct IngestResult {
  OccurrenceTable table;
  std::size_t sequences_parsed = 0;
  std::size_t skipped_lines = 0;
  std::vector<SkippedLine> skipped;  // first few diagnostics only
};

// Streams a stripped file into an occurrence table. Lenient mode skips and
// counts malformed lines; strict mode throws MalformedLine with the line number.
inline IngestResult read_stripped(std::istream& in, const IngestOptions& options = {}) {
  constexpr std::size_t kMaxDiagnostics = 20;
  OccurrenceCounter counter(options.n_max);
  IngestResult result;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    try {
      if (auto record = parse_line(line)) {
        counter.add(*record);
        ++result.sequences_parsed;
      }
    } catch (const MalformedLine& e) {
      if (options.strict) throw MalformedLine(e.reason(), line_number);
      ++result.skipped_lines;
      if (result.skipped.size() < kMaxDiagnostics) result.skipped.push_back({line_number, e.reason()});
    }
  }
  if (in.bad()) throw IoError("read error after line " + std::to_string(line_number));
  result.table = counter.finish(options.snapshot_label);
  return result;
}

// Ascending n <= limit with N(n) = 0.
inline std::vector<std::uint64_t> absent_numbers(const OccurrenceTable& table, std::uint64_t limit) {
  if (limit > table.n_max()) throw RangeError("limit exceeds the table's n_max");
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    if (table.count(n) == 0) out.push_back(n);
  }
  return out;
}

// Ascending n in [2, n_max] with N(n) > N(n - 1).
inline std::vector<std::uint64_t> interesting_numbers(const OccurrenceTable& table) {
  if (table.n_max() < 2) throw DomainError("interesting numbers need n_max >= 2");
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; n <= table.n_max(); ++n) {
    if (table.count(n) > table.count(n - 1)) out.push_back(n);
  }
  return out;
}

inline void write_counts_csv(std::ostream& os, const OccurrenceTable& table) {
  os << "n,count\n";
  for (std::uint64_t n = 1; n <= table.n_max(); ++n) os << n << ',' << table.count(n) << '\n';
}

inline nlohmann::json counts_to_json(const OccurrenceTable& table) {
  return {{"snapshot_label", table.snapshot_label()},
          {"n_max", table.n_max()},
          {"total_terms_seen", table.total_terms_seen()},
          {"counts", std::vector<std::uint64_t>(table.counts().begin(), table.counts().end())}};
}

inline OccurrenceTable counts_from_json(const nlohmann::json& j) {
  try {
    auto counts = j.at("counts").get<std::vector<std::uint64_t>>();
    if (counts.size() != j.at("n_max").get<std::uint64_t>()) throw DomainError("counts length does not match n_max");
    std::optional<std::uint64_t> total;
    if (j.contains("total_terms_seen")) total = j["total_terms_seen"].get<std::uint64_t>();
    return OccurrenceTable(std::move(counts), j.value("snapshot_label", std::string{}), total);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad occurrence table JSON: ") + e.what());
  }
}

}  // namespace sloane_gap
