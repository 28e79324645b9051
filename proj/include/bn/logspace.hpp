#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace bn {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double log_of(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

// log(exp(a) + exp(b)), max-shifted.
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

inline double log_sum(std::span<const double> v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - m);
  return m + std::log(acc);
}

inline double log_max(std::span<const double> v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  return m;
}

inline std::vector<double> to_linear(std::span<const double> logv) {
  std::vector<double> out(logv.size());
  for (size_t i = 0; i < logv.size(); ++i) out[i] = std::exp(logv[i]);
  return out;
}

}  // namespace bn
