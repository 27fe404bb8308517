#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace toalab {

/// Uniform spatial grid on [x_min, x_max) with a power-of-two point count.
/// The induced momentum grid has spacing dk = 2*pi/(n*dx) and spans
/// [-pi/dx, pi/dx).
struct Grid1D {
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t n = 0;
  double dx = 0.0;

  double x(std::size_t j) const { return x_min + static_cast<double>(j) * dx; }

  double dk() const {
    return 2.0 * std::numbers::pi / (static_cast<double>(n) * dx);
  }

  /// Momentum value for index m in ascending order, k_m = (m - n/2)*dk.
  double k(std::size_t m) const {
    return (static_cast<double>(m) - static_cast<double>(n) / 2.0) * dk();
  }

  double k_max() const { return std::numbers::pi / dx; }

  std::vector<double> x_values() const {
    std::vector<double> xs(n);
    for (std::size_t j = 0; j < n; ++j) xs[j] = x(j);
    return xs;
  }

  std::vector<double> k_values() const {
    std::vector<double> ks(n);
    for (std::size_t m = 0; m < n; ++m) ks[m] = k(m);
    return ks;
  }

  /// Index of the grid point nearest to x0 (clamped to the grid).
  std::size_t nearest_index(double x0) const {
    double j = std::round((x0 - x_min) / dx);
    if (j < 0.0) return 0;
    if (j >= static_cast<double>(n)) return n - 1;
    return static_cast<std::size_t>(j);
  }

  bool operator==(const Grid1D &) const = default;
};

inline bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

inline Grid1D make_grid(double x_min, double x_max, std::size_t n) {
  if (!(x_min < x_max))
    throw std::invalid_argument("make_grid: x_min must be less than x_max");
  if (!is_power_of_two(n))
    throw std::invalid_argument("make_grid: n must be a power of two (>= 2)");
  Grid1D g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.n = n;
  g.dx = (x_max - x_min) / static_cast<double>(n);
  return g;
}

} // namespace toalab
