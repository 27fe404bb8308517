#pragma once

#include <stdexcept>
#include <vector>

namespace toalab {

/// Arrival-time density and cumulative probability on a time grid.
struct ArrivalDistribution {
  std::vector<double> times;
  std::vector<double> density;
  std::vector<double> cumulative;
  double total = 0.0;
};

/// Cumulative trapezoidal integral of f over the (uniform or not) grid t.
inline std::vector<double> cumulative_trapezoid(const std::vector<double> &t,
                                                const std::vector<double> &f) {
  if (t.size() != f.size())
    throw std::invalid_argument("cumulative_trapezoid: size mismatch");
  std::vector<double> c(t.size(), 0.0);
  for (std::size_t j = 1; j < t.size(); ++j)
    c[j] = c[j - 1] + 0.5 * (f[j] + f[j - 1]) * (t[j] - t[j - 1]);
  return c;
}

inline double trapezoid(const std::vector<double> &t,
                        const std::vector<double> &f) {
  auto c = cumulative_trapezoid(t, f);
  return c.empty() ? 0.0 : c.back();
}

inline ArrivalDistribution make_distribution(std::vector<double> times,
                                             std::vector<double> density) {
  ArrivalDistribution d;
  d.times = std::move(times);
  d.density = std::move(density);
  d.cumulative = cumulative_trapezoid(d.times, d.density);
  d.total = d.cumulative.empty() ? 0.0 : d.cumulative.back();
  return d;
}

/// Rescales the density so it integrates to one on its grid.
inline ArrivalDistribution normalized(const ArrivalDistribution &dist) {
  if (!(dist.total > 0.0))
    throw std::domain_error("normalized: distribution has zero total");
  ArrivalDistribution out;
  out.times = dist.times;
  out.density.resize(dist.density.size());
  out.cumulative.resize(dist.cumulative.size());
  const double inv = 1.0 / dist.total;
  for (std::size_t j = 0; j < dist.density.size(); ++j) {
    out.density[j] = dist.density[j] * inv;
    out.cumulative[j] = dist.cumulative[j] * inv;
  }
  out.total = 1.0;
  return out;
}

/// Uniform time grid with n points covering [t0, t1].
inline std::vector<double> uniform_times(double t0, double t1, std::size_t n) {
  if (n < 2 || !(t1 > t0))
    throw std::invalid_argument("uniform_times: need n >= 2 and t1 > t0");
  std::vector<double> t(n);
  const double dt = (t1 - t0) / static_cast<double>(n - 1);
  for (std::size_t j = 0; j < n; ++j) t[j] = t0 + static_cast<double>(j) * dt;
  return t;
}

} // namespace toalab
