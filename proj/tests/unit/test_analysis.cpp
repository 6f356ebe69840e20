#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sloane_gap/analysis.hpp"

using namespace sloane_gap;

namespace {

OccurrenceTable generated_law_table() {
  std::vector<std::uint64_t> counts(10000);
  for (std::uint64_t n = 1; n <= counts.size(); ++n) {
    counts[n - 1] = static_cast<std::uint64_t>(std::llround(2.57e8 / std::pow(static_cast<double>(n), 1.33)));
  }
  return OccurrenceTable(std::move(counts));
}

}  // namespace

TEST(FitPowerLaw, RecoversGeneratingLaw) {
  auto fit = fit_power_law(generated_law_table(), 1, 10000);
  EXPECT_NEAR(fit.slope, -1.33, 0.02);
  EXPECT_GE(fit.r2, 0.999);
  EXPECT_NEAR(fit.k / 2.57e8, 1.0, 0.01);
  EXPECT_EQ(fit.n_used, 10000u);
  EXPECT_NEAR(fit.k, std::exp(fit.intercept), 1e-9 * fit.k);
}

TEST(FitPowerLaw, ConstantCountsGiveZeroSlopeAndR2) {
  auto fit = fit_power_law(OccurrenceTable(std::vector<std::uint64_t>(50, 7)));
  EXPECT_NEAR(fit.slope, 0.0, 1e-12);
  EXPECT_EQ(fit.r2, 0.0);
}

TEST(FitPowerLaw, ZeroCountsExcluded) {
  auto fit = fit_power_law(OccurrenceTable({100, 25, 0, 0, 4, 0, 0, 0, 0, 1}));
  EXPECT_EQ(fit.n_used, 4u);
  EXPECT_NEAR(fit.slope, -2.0, 1e-12);
  EXPECT_NEAR(fit.k, 100.0, 1e-9);
  EXPECT_NEAR(fit.r2, 1.0, 1e-12);
}

TEST(FitPowerLaw, Errors) {
  EXPECT_THROW(fit_power_law(OccurrenceTable({1, 0, 1, 0})), InsufficientData);
  EXPECT_THROW(fit_power_law(OccurrenceTable({1, 1, 1}), 2, 4), RangeError);
  EXPECT_THROW(fit_power_law(OccurrenceTable({1, 1, 1}), 0, 3), RangeError);
  std::vector<double> x{2, 2, 2}, y{1, 2, 3};
  EXPECT_THROW(fit_line(x, y), DegenerateX);
}

TEST(FitLineProperty, ExactLinesAreRecovered) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = coef(rng), b = coef(rng);
    if (std::abs(a) < 1e-3) continue;
    std::vector<double> x, y;
    for (int i = 1; i <= 40; ++i) {
      x.push_back(std::log(i));
      y.push_back(a * x.back() + b);
    }
    auto fit = fit_line(x, y);
    EXPECT_NEAR(fit.slope, a, 1e-9 * std::abs(a));
    EXPECT_NEAR(fit.intercept, b, 1e-9 * std::max(1.0, std::abs(b)));
    EXPECT_NEAR(fit.r2, 1.0, 1e-12);
  }
}

TEST(FitPowerLawProperty, ScaleCovariance) {
  std::mt19937_64 rng(5);
  std::lognormal_distribution<double> noise(0.0, 0.5);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::uint64_t> base(500), scaled(500);
    const std::uint64_t m = 1 + trial % 7;
    for (std::size_t i = 0; i < base.size(); ++i) {
      base[i] = 1 + static_cast<std::uint64_t>(1e5 / std::pow(i + 1.0, 1.1) * noise(rng));
      scaled[i] = base[i] * m;
    }
    auto f0 = fit_power_law(OccurrenceTable(base));
    auto f1 = fit_power_law(OccurrenceTable(scaled));
    EXPECT_NEAR(f1.slope, f0.slope, 1e-9);
    EXPECT_NEAR(f1.intercept, f0.intercept + std::log(static_cast<double>(m)), 1e-9);
    EXPECT_NEAR(f1.r2, f0.r2, 1e-9);
    EXPECT_GE(f0.r2, 0.0);
    EXPECT_LE(f0.r2, 1.0);
  }
}

TEST(Predict, Formula) {
  EXPECT_DOUBLE_EQ(predict({-1.33, std::log(2.57e8), 0.81, 2.57e8, 0}, 1), 2.57e8);
  EXPECT_NEAR(predict({-1.0, std::log(100.0), 1.0, 100.0, 0}, 10), 10.0, 1e-12);
  // 2.57e8 * 1000^-1.33 evaluated at 40 digits with mpmath.
  const double reference = 26298.62990161538116583327199287086016267;
  const double got = predict({-1.33, std::log(2.57e8), 0.81, 2.57e8, 0}, 1000);
  EXPECT_GE(got, reference / 1.001);
  EXPECT_LE(got, reference * 1.001);
  EXPECT_NEAR(got, reference, 1e-8 * reference);
}

TEST(Predict, DecreasingForNegativeSlope) {
  PowerLawFit fit{-0.4, 3.0, 0.5, std::exp(3.0), 0};
  for (std::uint64_t n = 1; n < 5000; ++n) EXPECT_GT(predict(fit, n), predict(fit, n + 1));
}

TEST(TheoryEnvelope, Formulas) {
  auto pts = theory_envelope(1024, 1024, 1.0);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_DOUBLE_EQ(pts[0].upper, 1.0 / 1024);
  EXPECT_DOUBLE_EQ(pts[0].lower, 1.0 / 102400);
  EXPECT_DOUBLE_EQ(theory_envelope(16, 16, 1.0, 0.0)[0].k_upper_bound, 8.0);
  EXPECT_DOUBLE_EQ(theory_envelope(16, 16, 1.0, 2.5)[0].k_upper_bound, 10.5);
}

TEST(TheoryEnvelope, DomainErrors) {
  EXPECT_THROW(theory_envelope(2, 10, 1.0), DomainError);
  EXPECT_THROW(theory_envelope(3, 10, 0.0), DomainError);
}

TEST(TheoryEnvelope, OrderingAndMonotoneUpper) {
  auto pts = theory_envelope(3, 20000, 2.57e8);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_LE(pts[i].lower, pts[i].upper);
    if (i > 0) {
      EXPECT_LT(pts[i].upper, pts[i - 1].upper);
    }
  }
}
