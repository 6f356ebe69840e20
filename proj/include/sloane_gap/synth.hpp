#pragma once

// Random arithmetic functions f_i(n) = phi(g(f_{i-1}(n)), k), the synthetic
// occurrence cloud they generate, and its comparison with a real cloud.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "sloane_gap/analysis.hpp"
#include "sloane_gap/errors.hpp"
#include "sloane_gap/gap.hpp"
#include "sloane_gap/ingest.hpp"

namespace sloane_gap {

enum class BinaryOp : std::uint8_t { add, multiply, subtract };
enum class UnaryOp : std::uint8_t { identity, square };

inline constexpr int kMaxDepth = 5;
inline constexpr int kConstantMin = 1;
inline constexpr int kConstantMax = 9;
inline constexpr double kSquareProbability = 0.2;
// constants x binary ops x unary ops
inline constexpr int kChoicesPerLevel = 9 * 3 * 2;

struct ExprLevel {
  int constant = 1;
  BinaryOp op = BinaryOp::add;
  UnaryOp unary = UnaryOp::identity;

  friend bool operator==(const ExprLevel&, const ExprLevel&) = default;
};

// levels[0] is applied to n first.
class ExprNode {
 public:
  ExprNode() = default;
  explicit ExprNode(std::vector<ExprLevel> levels) : levels_(std::move(levels)) { validate(); }

  int depth() const noexcept { return static_cast<int>(levels_.size()); }
  const std::vector<ExprLevel>& levels() const noexcept { return levels_; }

  std::string to_string() const {
    std::string x = "n";
    for (const auto& level : levels_) {
      if (level.unary == UnaryOp::square) x = "(" + x + ")^2";
      const char* op = level.op == BinaryOp::add ? "+" : level.op == BinaryOp::multiply ? "*" : "-";
      x = "(" + x + op + std::to_string(level.constant) + ")";
    }
    return x;
  }

  friend bool operator==(const ExprNode&, const ExprNode&) = default;

 private:
  void validate() const {
    if (levels_.empty() || levels_.size() > static_cast<std::size_t>(kMaxDepth)) {
      throw DomainError("expression depth must lie in 1..5");
    }
    for (const auto& level : levels_) {
      if (level.constant < kConstantMin || level.constant > kConstantMax) {
        throw DomainError("expression constants must lie in 1..9");
      }
      if (static_cast<int>(level.op) > 2 || static_cast<int>(level.unary) > 1) {
        throw DomainError("unknown operator in expression");
      }
    }
  }

  std::vector<ExprLevel> levels_;
};

// P(depth = i) proportional to the number of definable depth-i functions,
// 54^i.
inline std::vector<double> depth_weights(int max_depth = kMaxDepth) {
  if (max_depth < 1) throw DomainError("max_depth must be at least 1");
  std::vector<double> w;
  double term = 1.0;
  for (int i = 1; i <= max_depth; ++i) {
    term *= kChoicesPerLevel;
    w.push_back(term);
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= total;
  return w;
}

// SplitMix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of the i-th sampled function; independent of how work is scheduled.
inline constexpr std::uint64_t function_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(seed ^ mix64(index));
}

using Engine = std::mt19937_64;

// Portable draws (the std distributions are implementation-defined).
inline std::uint64_t uniform_below(Engine& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

inline double uniform_unit(Engine& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline int draw_depth(Engine& rng, const std::vector<double>& weights) {
  const double u = uniform_unit(rng);
  double cumulative = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cumulative += weights[i];
    if (u < cumulative) return static_cast<int>(i) + 1;
  }
  return static_cast<int>(weights.size());
}

inline ExprNode sample_function(Engine& rng, const std::vector<double>& weights) {
  const int depth = draw_depth(rng, weights);
  std::vector<ExprLevel> levels(static_cast<std::size_t>(depth));
  for (auto& level : levels) {
    level.constant = kConstantMin + static_cast<int>(uniform_below(rng, kConstantMax - kConstantMin + 1));
    level.op = static_cast<BinaryOp>(uniform_below(rng, 3));
    level.unary = uniform_unit(rng) < kSquareProbability ? UnaryOp::square : UnaryOp::identity;
  }
  return ExprNode(std::move(levels));
}

inline ExprNode sample_function(Engine& rng, int max_depth = kMaxDepth) {
  return sample_function(rng, depth_weights(max_depth));
}

inline BigInt apply_level(const ExprLevel& level, BigInt x) {
  if (level.unary == UnaryOp::square) x *= x;
  switch (level.op) {
    case BinaryOp::add: return x + level.constant;
    case BinaryOp::multiply: return x * level.constant;
    case BinaryOp::subtract: return x - level.constant;
  }
  return x;
}

// Exact value of the composed function at n.
inline BigInt eval(const ExprNode& expr, std::uint64_t n) {
  BigInt x = n;
  for (const auto& level : expr.levels()) x = apply_level(level, std::move(x));
  return x;
}

// int64 evaluation; std::nullopt on overflow.
inline std::optional<std::int64_t> eval_checked(const ExprNode& expr, std::int64_t n) {
  std::int64_t x = n;
  for (const auto& level : expr.levels()) {
    if (level.unary == UnaryOp::square && __builtin_mul_overflow(x, x, &x)) return std::nullopt;
    bool overflow = false;
    switch (level.op) {
      case BinaryOp::add: overflow = __builtin_add_overflow(x, level.constant, &x); break;
      case BinaryOp::multiply: overflow = __builtin_mul_overflow(x, level.constant, &x); break;
      case BinaryOp::subtract: overflow = __builtin_sub_overflow(x, level.constant, &x); break;
    }
    if (overflow) return std::nullopt;
  }
  return x;
}

inline constexpr std::uint64_t kDefaultFunctions = 400000;
inline constexpr std::uint64_t kDefaultTermsPerFunction = 20;

struct SimulationResult {
  std::vector<std::uint64_t> counts;  // counts[v - 1] = occurrences of value v in [1, v_max]
  std::uint64_t v_max = 0;
  std::uint64_t num_functions = 0;
  std::uint64_t terms_per_function = 0;
  std::uint64_t total_values = 0;
  std::uint64_t counted = 0;
  std::uint64_t discarded = 0;
  std::uint64_t seed = 0;

  std::uint64_t count(std::uint64_t value) const { return counts.at(value - 1); }

  OccurrenceTable to_table(std::string label = "synthetic") const {
    return OccurrenceTable(counts, std::move(label), total_values);
  }

  friend bool operator==(const SimulationResult&, const SimulationResult&) = default;
};

struct SimulationOptions {
  std::uint64_t num_functions = kDefaultFunctions;
  std::uint64_t terms_per_function = kDefaultTermsPerFunction;
  std::uint64_t v_max = kDefaultNMax;
  int max_depth = kMaxDepth;
};

// Samples functions i = 0..num_functions-1 from per-function seeds, evaluates
// each at n = 1..terms_per_function and counts the values that land in
// [1, v_max].
inline SimulationResult simulate(std::uint64_t seed, const SimulationOptions& options = {}) {
  if (options.num_functions < 1) throw DomainError("num_functions must be at least 1");
  if (options.v_max < 1) throw DomainError("v_max must be at least 1");
  SimulationResult result;
  result.counts.assign(options.v_max, 0);
  result.v_max = options.v_max;
  result.num_functions = options.num_functions;
  result.terms_per_function = options.terms_per_function;
  result.seed = seed;

  const auto weights = depth_weights(options.max_depth);
  const auto v_max = static_cast<std::int64_t>(options.v_max);
  for (std::uint64_t i = 0; i < options.num_functions; ++i) {
    Engine rng(function_seed(seed, i));
    const ExprNode expr = sample_function(rng, weights);
    for (std::uint64_t n = 1; n <= options.terms_per_function; ++n) {
      std::int64_t value = 0;
      if (auto fast = eval_checked(expr, static_cast<std::int64_t>(n))) {
        value = *fast;
      } else {
        const BigInt exact = eval(expr, n);
        value = exact >= 1 && exact <= v_max ? static_cast<std::int64_t>(exact) : 0;
      }
      if (value >= 1 && value <= v_max) {
        ++result.counts[static_cast<std::size_t>(value - 1)];
        ++result.counted;
      } else {
        ++result.discarded;
      }
    }
  }
  result.total_values = result.counted + result.discarded;
  return result;
}

inline void write_synthetic_csv(std::ostream& os, const SimulationResult& result) {
  os << "value,count\n";
  for (std::uint64_t v = 1; v <= result.v_max; ++v) os << v << ',' << result.count(v) << '\n';
}

struct GapComparison {
  double gap_score_real = 0.0;
  double gap_score_synth = 0.0;
  double ratio = 1.0;  // real / synthetic
  PowerLawFit fit_real;
  PowerLawFit fit_synth;
};

// gap_score of both clouds and their ratio. Equal scores (including two
// zeros) give ratio 1; a zero synthetic score under a positive real one
// gives +inf.
inline GapComparison compare_gap(const OccurrenceTable& real, const OccurrenceTable& synthetic,
                                 const GapParams& params = {}) {
  GapComparison cmp;
  cmp.gap_score_real = gap_score(real, params);
  cmp.gap_score_synth = gap_score(synthetic, params);
  if (cmp.gap_score_real == cmp.gap_score_synth) {
    cmp.ratio = 1.0;
  } else if (cmp.gap_score_synth == 0.0) {
    cmp.ratio = std::numeric_limits<double>::infinity();
  } else {
    cmp.ratio = cmp.gap_score_real / cmp.gap_score_synth;
  }
  cmp.fit_real = fit_power_law(real);
  cmp.fit_synth = fit_power_law(synthetic);
  return cmp;
}

inline GapComparison compare_gap(const OccurrenceTable& real, const SimulationResult& synthetic,
                                 const GapParams& params = {}) {
  return compare_gap(real, synthetic.to_table(), params);
}

inline nlohmann::json to_json(const GapComparison& cmp) {
  nlohmann::json ratio = std::isfinite(cmp.ratio) ? nlohmann::json(cmp.ratio) : nlohmann::json(nullptr);
  return {{"gap_score_real", cmp.gap_score_real},
          {"gap_score_synth", cmp.gap_score_synth},
          {"ratio", ratio},
          {"fit_real", to_json(cmp.fit_real)},
          {"fit_synth", to_json(cmp.fit_synth)}};
}

}  // namespace sloane_gap
