#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace dagcast {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

std::string to_string(const Rational& q);

// Best continued-fraction approximation with den <= max_den; used to print
// LP optima recovered from floating point (0.5 -> 1/2).
Rational approximate_rational(double x, std::int64_t max_den = 10000);

// Least-squares slope of ys against xs.
double least_squares_slope(std::span<const double> xs, std::span<const double> ys);

// printf("%.6g") formatting shared by the CSV writers.
std::string format_g6(double x);

}  // namespace dagcast
