#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "toalab/arrival.hpp"
#include "toalab/wavefunction.hpp"

namespace toalab {

struct KijowskiAmplitudes {
  std::vector<double> times;
  std::vector<cdouble> plus;  // arrivals at x=0 from the left (k > 0)
  std::vector<cdouble> minus; // arrivals at x=0 from the right (k < 0)
};

/// Arrival amplitudes at x = 0,
///   psi+(tau) = (2*pi)^(-1/2) * integral_{k>0} sqrt(k)  psi~(k) exp(-i k^2 tau / 2) dk,
///   psi-(tau) = (2*pi)^(-1/2) * integral_{k<0} sqrt(-k) psi~(k) exp(+i k^2 tau / 2) dk,
/// by trapezoidal quadrature over the momentum half-grids. The k = 0
/// endpoint contributes zero (the integrand vanishes as sqrt(k)).
inline KijowskiAmplitudes kijowski_amplitudes(const SpectralWaveFunction &sw,
                                              std::vector<double> tau_grid) {
  const Grid1D &g = sw.grid;
  const std::size_t n = g.n;
  const std::size_t zero = n / 2; // index of k = 0 on the ascending grid
  const double dk = g.dk();
  const double scale = 1.0 / std::sqrt(2.0 * std::numbers::pi);

  // Precompute sqrt|k| psi~(k) dk once; nodes whose amplitude is below the
  // relative machine floor cannot move the sum and are skipped.
  double amp_max = 0.0;
  for (const auto &a : sw.amplitudes) amp_max = std::max(amp_max, std::abs(a));
  const double floor = amp_max * 1e-18;
  struct Node {
    double k;
    cdouble value; // weight * sqrt|k| * psi~(k)
  };
  std::vector<Node> plus_nodes, minus_nodes;
  for (std::size_t m = 0; m < n; ++m) {
    if (std::abs(sw.amplitudes[m]) <= floor) continue;
    double weight = dk;
    if (m == 0 || m + 1 == n) weight *= 0.5; // outer trapezoid endpoints;
    // k = 0 closes both half-line trapezoids with a vanishing integrand, so
    // the nodes adjacent to it keep full weight.
    const double k = g.k(m);
    const cdouble v = weight * std::sqrt(std::abs(k)) * sw.amplitudes[m];
    if (m > zero)
      plus_nodes.push_back({k, v});
    else if (m < zero)
      minus_nodes.push_back({k, v});
  }

  KijowskiAmplitudes out;
  out.times = std::move(tau_grid);
  out.plus.resize(out.times.size());
  out.minus.resize(out.times.size());
  for (std::size_t it = 0; it < out.times.size(); ++it) {
    const double tau = out.times[it];
    cdouble plus{0.0, 0.0}, minus{0.0, 0.0};
    for (const auto &nd : plus_nodes)
      plus += nd.value * std::exp(cdouble(0.0, -nd.k * nd.k * tau / 2.0));
    for (const auto &nd : minus_nodes)
      minus += nd.value * std::exp(cdouble(0.0, nd.k * nd.k * tau / 2.0));
    out.plus[it] = scale * plus;
    out.minus[it] = scale * minus;
  }
  return out;
}

/// p(tau) = |psi+(tau)|^2 + |psi-(tau)|^2, with cumulative probability by
/// trapezoidal integration.
inline ArrivalDistribution kijowski_density(const KijowskiAmplitudes &amp) {
  std::vector<double> p(amp.times.size());
  for (std::size_t j = 0; j < p.size(); ++j)
    p[j] = std::norm(amp.plus[j]) + std::norm(amp.minus[j]);
  return make_distribution(amp.times, std::move(p));
}

inline ArrivalDistribution kijowski_distribution(const SpectralWaveFunction &sw,
                                                 std::vector<double> tau_grid) {
  return kijowski_density(kijowski_amplitudes(sw, std::move(tau_grid)));
}

} // namespace toalab
