#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "toalab/fft.hpp"
#include "toalab/grid.hpp"

namespace toalab {

/// Complex amplitudes sampled on a uniform spatial grid.
struct WaveFunction {
  Grid1D grid;
  std::vector<cdouble> amplitudes;
};

/// Complex amplitudes on the conjugate momentum grid, in ascending k order.
/// Normalized to the continuum 1/sqrt(2*pi) Fourier convention, so that
/// sum |psi~(k_m)|^2 dk equals the position-space norm squared.
struct SpectralWaveFunction {
  Grid1D grid; // the originating spatial grid; momentum values via grid.k(m)
  std::vector<cdouble> amplitudes;
};

/// Parameters of the Gaussian packet exp(-alpha (x-x0)^2 + i k0 x + i phi0),
/// normalized with the (2 alpha / pi)^(1/4) prefactor.
struct GaussianPacketSpec {
  double center = -4.0;
  double alpha = 1.0;
  double mean_momentum = 4.0;
  double phase = 16.0;
};

/// The packet instance used throughout the worked example: a unit-width
/// Gaussian starting at x = -4 moving right with velocity 4.
inline GaussianPacketSpec paper_packet() { return {-4.0, 1.0, 4.0, 16.0}; }

inline double norm_squared(const WaveFunction &wf) {
  double s = 0.0;
  for (const auto &a : wf.amplitudes) s += std::norm(a);
  return s * wf.grid.dx;
}

inline double norm(const WaveFunction &wf) { return std::sqrt(norm_squared(wf)); }

inline double norm_squared(const SpectralWaveFunction &sw) {
  double s = 0.0;
  for (const auto &a : sw.amplitudes) s += std::norm(a);
  return s * sw.grid.dk();
}

inline std::vector<double> density(const WaveFunction &wf) {
  std::vector<double> d(wf.amplitudes.size());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = std::norm(wf.amplitudes[j]);
  return d;
}

inline double expectation_position(const WaveFunction &wf) {
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < wf.amplitudes.size(); ++j) {
    double w = std::norm(wf.amplitudes[j]);
    num += wf.grid.x(j) * w;
    den += w;
  }
  if (den == 0.0) throw std::domain_error("expectation_position: zero state");
  return num / den;
}

inline double expectation_momentum(const SpectralWaveFunction &sw) {
  double num = 0.0, den = 0.0;
  for (std::size_t m = 0; m < sw.amplitudes.size(); ++m) {
    double w = std::norm(sw.amplitudes[m]);
    num += sw.grid.k(m) * w;
    den += w;
  }
  if (den == 0.0) throw std::domain_error("expectation_momentum: zero state");
  return num / den;
}

inline WaveFunction gaussian_packet(const GaussianPacketSpec &spec,
                                    const Grid1D &grid) {
  if (!(spec.alpha > 0.0))
    throw std::invalid_argument("gaussian_packet: alpha must be positive");
  const double boundary =
      std::max(std::exp(-spec.alpha * std::pow(grid.x_min - spec.center, 2)),
               std::exp(-spec.alpha * std::pow(grid.x_max - spec.center, 2)));
  if (boundary > 1e-12)
    throw std::domain_error(
        "gaussian_packet: packet leaks off the grid boundary");
  const double prefactor =
      std::pow(2.0 * spec.alpha / std::numbers::pi, 0.25);
  WaveFunction wf;
  wf.grid = grid;
  wf.amplitudes.resize(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double x = grid.x(j);
    const double d = x - spec.center;
    wf.amplitudes[j] =
        prefactor * std::exp(cdouble(-spec.alpha * d * d,
                                     spec.mean_momentum * x + spec.phase));
  }
  return wf;
}

/// Unitary transform to the momentum representation in the continuum
/// 1/sqrt(2*pi) convention. The offset phase exp(-i k x_min) makes the DFT
/// agree with the continuum transform for band-limited states.
inline SpectralWaveFunction to_momentum(const WaveFunction &wf) {
  const Grid1D &g = wf.grid;
  std::vector<cdouble> a(wf.amplitudes);
  // Multiplying by (-1)^j shifts the DFT output to ascending k order.
  for (std::size_t j = 1; j < a.size(); j += 2) a[j] = -a[j];
  fft_forward(a);
  const double scale = g.dx / std::sqrt(2.0 * std::numbers::pi);
  for (std::size_t m = 0; m < a.size(); ++m) {
    const double k = g.k(m);
    a[m] *= scale * std::exp(cdouble(0.0, -k * g.x_min));
  }
  return {g, std::move(a)};
}

inline WaveFunction to_position(const SpectralWaveFunction &sw) {
  const Grid1D &g = sw.grid;
  std::vector<cdouble> a(sw.amplitudes);
  for (std::size_t m = 0; m < a.size(); ++m) {
    const double k = g.k(m);
    a[m] *= std::exp(cdouble(0.0, k * g.x_min));
  }
  fft_backward(a);
  const double scale = g.dk() / std::sqrt(2.0 * std::numbers::pi);
  for (std::size_t j = 0; j < a.size(); ++j) {
    a[j] *= scale;
    if (j % 2 == 1) a[j] = -a[j];
  }
  return {g, std::move(a)};
}

} // namespace toalab
