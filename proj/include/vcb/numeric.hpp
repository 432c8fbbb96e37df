#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace vcb {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Max-shifted log(sum(exp(values))). Returns -inf for an empty range or when
// every entry is -inf. Summation order is the order of `values`.
inline double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return kNegInf;
  const double peak = *std::max_element(values.begin(), values.end());
  if (peak == kNegInf) return kNegInf;
  if (!std::isfinite(peak)) return peak;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - peak);
  return peak + std::log(acc);
}

inline double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(-std::abs(a - b)));
}

// log(cosh(z)) without overflow.
inline double log_cosh(double z) {
  const double a = std::abs(z);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

// log(e^a + e^-a).
inline double log_two_cosh(double a) { return log_cosh(a) + std::log(2.0); }

// Entropy in nats of a binary variable with P(+1) = p, using 0 log 0 = 0.
inline double binary_entropy(double p) {
  auto term = [](double q) { return q > 0.0 ? -q * std::log(q) : 0.0; };
  return term(p) + term(1.0 - p);
}

}  // namespace vcb
