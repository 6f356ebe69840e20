#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "sloane_gap/synth.hpp"
#include "support/oracles.hpp"

using namespace sloane_gap;

namespace {

ExprNode expr(std::initializer_list<ExprLevel> levels) { return ExprNode(std::vector<ExprLevel>(levels)); }

// Standard error of a Bernoulli frequency estimate.
double standard_error(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

}  // namespace

TEST(DepthWeights, Values) {
  EXPECT_EQ(depth_weights(1), std::vector<double>{1.0});
  const auto w2 = depth_weights(2);
  EXPECT_NEAR(w2[0], 1.0 / 55.0, 1e-15);
  EXPECT_NEAR(w2[1], 54.0 / 55.0, 1e-15);
  // 54^5 / (54 + ... + 54^5) = 8503056 / 8663491
  EXPECT_NEAR(depth_weights(5)[4], 8503056.0 / 8663491.0, 1e-15);
  EXPECT_NEAR(depth_weights(5)[4], 0.98148, 1e-5);
  EXPECT_THROW(depth_weights(0), DomainError);
}

TEST(ExprNode, Validation) {
  EXPECT_THROW(ExprNode(std::vector<ExprLevel>{}), DomainError);
  EXPECT_THROW(expr({{0, BinaryOp::add, UnaryOp::identity}}), DomainError);
  EXPECT_THROW(expr({{10, BinaryOp::add, UnaryOp::identity}}), DomainError);
  EXPECT_THROW(ExprNode(std::vector<ExprLevel>(6)), DomainError);
  EXPECT_EQ(expr({{3, BinaryOp::add, UnaryOp::identity}, {9, BinaryOp::subtract, UnaryOp::square}}).to_string(),
            "(((n+3))^2-9)");
}

TEST(Eval, HandValues) {
  EXPECT_EQ(eval(expr({{3, BinaryOp::add, UnaryOp::identity}}), 2), 5);
  EXPECT_EQ(eval(expr({{2, BinaryOp::multiply, UnaryOp::square}}), 3), 18);
  EXPECT_EQ(eval(expr({{1, BinaryOp::add, UnaryOp::identity}, {9, BinaryOp::subtract, UnaryOp::square}}), 4), 16);
  EXPECT_EQ(eval(expr({{5, BinaryOp::subtract, UnaryOp::identity}}), 1), -4);
}

TEST(Eval, DeepSquaresStayExact) {
  std::vector<ExprLevel> levels(5, {9, BinaryOp::multiply, UnaryOp::square});
  const ExprNode e(levels);
  EXPECT_EQ(eval(e, 20).str(), oracle::gmp_eval(e, 20).get_str());
  EXPECT_FALSE(eval_checked(e, 20).has_value());
}

TEST(Sample, SeededDeterminism) {
  Engine a(function_seed(1729, 5)), b(function_seed(1729, 5));
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_function(a), sample_function(b));
  EXPECT_NE(function_seed(1729, 0), function_seed(1729, 1));
  EXPECT_NE(function_seed(1729, 0), function_seed(1730, 0));
}

TEST(SampleProperty, EmpiricalFrequencies) {
  const auto weights = depth_weights();
  const double samples = 1e6;
  Engine rng(function_seed(2011, 0));
  std::array<double, 6> depth{};
  double square_first = 0;
  std::array<double, 3> ops{};
  std::array<double, 10> constants{};
  for (int i = 0; i < static_cast<int>(samples); ++i) {
    const auto e = sample_function(rng, weights);
    ++depth[static_cast<std::size_t>(e.depth())];
    const auto& first = e.levels().front();
    square_first += first.unary == UnaryOp::square;
    ++ops[static_cast<std::size_t>(first.op)];
    ++constants[static_cast<std::size_t>(first.constant)];
  }
  EXPECT_NEAR(depth[5] / samples, 0.9815, 0.001);
  EXPECT_NEAR(square_first / samples, 0.2, 0.002);
  for (int d = 1; d <= 5; ++d) {
    const double p = weights[static_cast<std::size_t>(d - 1)];
    EXPECT_NEAR(depth[static_cast<std::size_t>(d)] / samples, p, 3 * standard_error(p, samples)) << "depth " << d;
  }
  for (double c : ops) EXPECT_NEAR(c / samples, 1.0 / 3.0, 3 * standard_error(1.0 / 3.0, samples));
  for (int k = 1; k <= 9; ++k) {
    EXPECT_NEAR(constants[static_cast<std::size_t>(k)] / samples, 1.0 / 9.0, 3 * standard_error(1.0 / 9.0, samples));
  }
  EXPECT_NEAR(square_first / samples, 0.2, 3 * standard_error(0.2, samples));
}

TEST(EvalProperty, MatchesGmpOnRandomExpressions) {
  Engine rng(function_seed(99, 0));
  std::mt19937_64 pick(99);
  std::uniform_int_distribution<std::uint64_t> n_dist(1, 1000);
  for (int i = 0; i < 1000; ++i) {
    const auto e = sample_function(rng);
    for (std::uint64_t n : {std::uint64_t{1}, std::uint64_t{20}, n_dist(pick)}) {
      const auto exact = eval(e, n);
      ASSERT_EQ(exact.str(), oracle::gmp_eval(e, n).get_str()) << e.to_string() << " at " << n;
      if (auto fast = eval_checked(e, static_cast<std::int64_t>(n))) {
        ASSERT_EQ(BigInt(*fast), exact);
      }
    }
  }
}

TEST(EvalProperty, DepthOneBound) {
  Engine rng(function_seed(7, 7));
  const std::vector<double> only_depth_one{1.0};
  for (int i = 0; i < 2000; ++i) {
    const auto e = sample_function(rng, only_depth_one);
    ASSERT_EQ(e.depth(), 1);
    for (std::uint64_t n = 1; n <= 20; ++n) {
      const BigInt n2 = BigInt(n) * n;
      EXPECT_LE(abs(eval(e, n)), std::max(n2, BigInt(81)) + n2 * 9);
    }
  }
}

TEST(Simulate, SingleFunctionMatchesHandEvaluation) {
  const std::uint64_t seed = 1729;
  const auto sim = simulate(seed, {.num_functions = 1, .terms_per_function = 20, .v_max = 10000});
  Engine rng(function_seed(seed, 0));
  const auto e = sample_function(rng);
  std::vector<std::uint64_t> expected(10000, 0);
  std::uint64_t kept = 0;
  for (std::uint64_t n = 1; n <= 20; ++n) {
    const auto v = oracle::gmp_eval(e, n);
    if (v >= 1 && v <= 10000) {
      ++expected[v.get_ui() - 1];
      ++kept;
    }
  }
  EXPECT_EQ(sim.counts, expected);
  EXPECT_EQ(sim.counted, kept);
  EXPECT_EQ(sim.total_values, 20u);
}

TEST(Simulate, DeterministicAndConserving) {
  const SimulationOptions opts{.num_functions = 20000, .terms_per_function = 20, .v_max = 10000};
  const auto a = simulate(42, opts);
  const auto b = simulate(42, opts);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.total_values, 20000u * 20u);
  EXPECT_EQ(a.counted + a.discarded, a.total_values);
  EXPECT_EQ(std::accumulate(a.counts.begin(), a.counts.end(), std::uint64_t{0}), a.counted);
  EXPECT_NE(simulate(43, opts), a);
}

TEST(Simulate, Errors) { EXPECT_THROW(simulate(1, {.num_functions = 0}), DomainError); }

TEST(Simulate, CsvFormat) {
  const auto sim = simulate(3, {.num_functions = 10, .terms_per_function = 20, .v_max = 3});
  std::ostringstream os;
  write_synthetic_csv(os, sim);
  std::ostringstream expected;
  expected << "value,count\n1," << sim.count(1) << "\n2," << sim.count(2) << "\n3," << sim.count(3) << '\n';
  EXPECT_EQ(os.str(), expected.str());
}

TEST(CompareGap, SameTableGivesRatioOne) {
  const auto sim = simulate(5, {.num_functions = 50000});
  const auto table = sim.to_table();
  const auto cmp = compare_gap(table, sim);
  EXPECT_EQ(cmp.ratio, 1.0);
  EXPECT_EQ(cmp.gap_score_real, cmp.gap_score_synth);
  EXPECT_EQ(cmp.fit_real.slope, cmp.fit_synth.slope);
  const auto j = to_json(cmp);
  EXPECT_TRUE(j.contains("fit_real"));
  EXPECT_EQ(j["ratio"], 1.0);
}

TEST(CompareGap, ZeroSyntheticScore) {
  OccurrenceTable flat(std::vector<std::uint64_t>(10000, 4));
  std::vector<std::uint64_t> bimodal(10000);
  for (std::size_t i = 0; i < bimodal.size(); ++i) bimodal[i] = 1000 + (i % 5 == 0 ? 20000 : 0) + (i * 7919) % 97;
  const auto cmp = compare_gap(OccurrenceTable(bimodal), flat);
  EXPECT_GT(cmp.gap_score_real, 0.0);
  EXPECT_EQ(cmp.gap_score_synth, 0.0);
  EXPECT_TRUE(std::isinf(cmp.ratio));
  EXPECT_TRUE(to_json(cmp)["ratio"].is_null());
}
