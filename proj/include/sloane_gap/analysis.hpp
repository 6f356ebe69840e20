#pragma once

// Log-log power-law regression of N(n) and the algorithmic-probability
// envelope curves drawn against it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "sloane_gap/errors.hpp"
#include "sloane_gap/ingest.hpp"

namespace sloane_gap {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares y = slope*x + intercept. r2 is 0 when y has no
// variance.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw RangeMismatch("x and y differ in length");
  if (x.size() < 3) throw InsufficientData("regression needs at least 3 points");
  const double m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DegenerateX("all x values are equal");

  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy > 0.0) {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (fit.slope * x[i] + fit.intercept);
      ss_res += r * r;
    }
    fit.r2 = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

struct PowerLawFit {
  double slope = 0.0;      // exponent of ln n
  double intercept = 0.0;  // ln-scale
  double r2 = 0.0;
  double k = 1.0;  // e^intercept
  std::uint64_t n_used = 0;
};

// ln N(n) = slope * ln n + intercept over every n in [n_lo, n_hi] with N(n) >= 1.
inline PowerLawFit fit_power_law(const OccurrenceTable& table, std::uint64_t n_lo, std::uint64_t n_hi) {
  if (n_lo < 1 || n_hi < n_lo || n_hi > table.n_max()) {
    throw RangeError("fit range must lie within [1, n_max]");
  }
  std::vector<double> x, y;
  for (std::uint64_t n = n_lo; n <= n_hi; ++n) {
    if (const auto c = table.count(n); c >= 1) {
      x.push_back(std::log(static_cast<double>(n)));
      y.push_back(std::log(static_cast<double>(c)));
    }
  }
  if (x.size() < 3) throw InsufficientData("fewer than 3 points with a nonzero count");
  const LineFit line = fit_line(x, y);
  return {line.slope, line.intercept, line.r2, std::exp(line.intercept), x.size()};
}

inline PowerLawFit fit_power_law(const OccurrenceTable& table) { return fit_power_law(table, 1, table.n_max()); }

// k / n^(-slope).
inline double predict(const PowerLawFit& fit, std::uint64_t n) {
  if (n < 1) throw DomainError("predict needs n >= 1");
  return fit.k * std::pow(static_cast<double>(n), fit.slope);
}

inline nlohmann::json to_json(const PowerLawFit& fit) {
  return {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r2}, {"k", fit.k}, {"n_used", fit.n_used}};
}

struct EnvelopePoint {
  std::uint64_t n = 0;
  double upper = 0.0;          // h / n
  double lower = 0.0;          // h / (n (log2 n)^2)
  double k_upper_bound = 0.0;  // log2 n + 2 log2 log2 n + c'
};

inline std::vector<EnvelopePoint> theory_envelope(std::uint64_t n_lo, std::uint64_t n_hi, double h,
                                                  double c_prime = 0.0) {
  if (n_lo < 3) throw DomainError("envelope needs n >= 3 so that log2 log2 n is positive");
  if (!(h > 0.0)) throw DomainError("envelope scale h must be positive");
  std::vector<EnvelopePoint> points;
  points.reserve(n_hi >= n_lo ? n_hi - n_lo + 1 : 0);
  for (std::uint64_t n = n_lo; n <= n_hi; ++n) {
    const double nd = static_cast<double>(n);
    const double lg = std::log2(nd);
    points.push_back({n, h / nd, h / (nd * lg * lg), lg + 2.0 * std::log2(lg) + c_prime});
  }
  return points;
}

}  // namespace sloane_gap
