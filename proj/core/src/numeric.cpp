#include "dagcast/numeric.hpp"

#include <cmath>
#include <cstdio>

namespace dagcast {

std::string to_string(const Rational& q) {
  if (q.den == 1) return std::to_string(q.num);
  return std::to_string(q.num) + "/" + std::to_string(q.den);
}

Rational approximate_rational(double x, std::int64_t max_den) {
  const bool negative = x < 0;
  double rest = std::abs(x);
  // Convergents h/k of the continued fraction of |x|.
  std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(rest));
  std::int64_t k_prev = 0, k = 1;
  double frac = rest - std::floor(rest);
  for (int iter = 0; iter < 64 && frac > 1e-12; ++iter) {
    const double inv = 1.0 / frac;
    const auto a = static_cast<std::int64_t>(std::floor(inv));
    const std::int64_t k_next = a * k + k_prev;
    if (k_next > max_den) break;
    const std::int64_t h_next = a * h + h_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    frac = inv - std::floor(inv);
    if (std::abs(static_cast<double>(h) / static_cast<double>(k) - std::abs(x)) < 1e-12) break;
  }
  return Rational{negative ? -h : h, k};
}

double least_squares_slope(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = std::min(xs.size(), ys.size());
  if (n < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx == 0 ? 0.0 : sxy / sxx;
}

std::string format_g6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace dagcast
