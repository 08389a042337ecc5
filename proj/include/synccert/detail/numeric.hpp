#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>

namespace synccert::detail {

inline constexpr double pi = std::numbers::pi;
inline constexpr double half_pi = std::numbers::pi / 2.0;

// Relative slack applied on the passing side of every strict inequality.
inline constexpr double strict_slack = 1e-12;

/// lhs < rhs, with the comparison biased against passing by a relative 1e-12.
inline bool strictly_less(double lhs, double rhs) {
  if (std::isnan(lhs) || std::isnan(rhs)) return false;
  if (std::isinf(rhs)) return rhs > 0 && !std::isinf(lhs);
  double margin = strict_slack * std::max(std::abs(lhs), std::abs(rhs));
  return lhs + margin < rhs;
}

inline bool strictly_greater(double lhs, double rhs) { return strictly_less(rhs, lhs); }

/// Neumaier-compensated accumulator. Summation order is the caller's, so
/// results are reproducible for a fixed visit order.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

inline double dot(std::span<const double> x, std::span<const double> y) {
  CompensatedSum s;
  for (std::size_t i = 0; i < x.size(); ++i) s.add(x[i] * y[i]);
  return s.value();
}

inline double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw. Unlike
/// std::uniform_real_distribution this is identical on every standard library.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Wrap an angle into [-pi, pi).
inline double wrap_angle(double theta) {
  double w = std::fmod(theta + pi, 2.0 * pi);
  if (w < 0) w += 2.0 * pi;
  w -= pi;
  if (w >= pi) w -= 2.0 * pi;
  return w;
}

}  // namespace synccert::detail
