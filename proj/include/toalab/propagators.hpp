#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "toalab/wavefunction.hpp"

namespace toalab {

/// Point detector: sensitivity kappa coupled through a regularized Dirac
/// delta at position a. Grid-point regularization approximates delta(x) by
/// the indicator of one cell divided by dx; the Gaussian alternative smears
/// it over a normalized profile of width sigma.
struct DetectorSpec {
  double position = 0.0;
  double kappa = 8.0;
  enum class Regularization { GridPoint, Gaussian } regularization =
      Regularization::GridPoint;
  double sigma = 0.1; // only used for the Gaussian profile
};

/// Per-step record of a damped evolution run.
struct EvolutionRecord {
  std::vector<double> times;
  std::vector<double> norms_squared;
  std::vector<double> detector_densities; // |psi_t(a)|^2 at the detector site
  WaveFunction final_state;
  double dt = 0.0;
};

/// Closed-form free evolution of the worked example's packet
/// (x0 = -4, alpha = 1, k0 = 4, phi0 = 16).
inline WaveFunction analytic_gaussian(double t, const Grid1D &grid) {
  if (t < 0.0) throw std::invalid_argument("analytic_gaussian: t must be >= 0");
  const double prefactor = std::pow(2.0 / std::numbers::pi, 0.25);
  const cdouble denom(2.0 * t, -1.0);
  const cdouble root = std::sqrt(cdouble(1.0, 2.0 * t));
  WaveFunction wf;
  wf.grid = grid;
  wf.amplitudes.resize(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double u = grid.x(j) + 4.0;
    const cdouble num(-8.0 * t + 4.0 * u, u * u);
    wf.amplitudes[j] = prefactor * std::exp(num / denom) / root;
  }
  return wf;
}

namespace detail {

inline void check_step_size(const Grid1D &, double dt) {
  // The kinetic factor is applied exactly in momentum space, so there is no
  // stability limit on dt; only positivity is required.
  if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
}

/// Kinetic factors exp(-i k^2 dt / 2) in FFTW (natural) frequency order.
inline std::vector<cdouble> kinetic_phases(const Grid1D &grid, double dt) {
  std::vector<cdouble> ph(grid.n);
  const double dk = grid.dk();
  for (std::size_t m = 0; m < grid.n; ++m) {
    const double k = (m <= grid.n / 2) ? static_cast<double>(m) * dk
                                       : (static_cast<double>(m) -
                                          static_cast<double>(grid.n)) *
                                             dk;
    ph[m] = std::exp(cdouble(0.0, -k * k * dt / 2.0));
  }
  return ph;
}

inline void kinetic_step(std::vector<cdouble> &a,
                         const std::vector<cdouble> &phases) {
  fft_forward(a);
  for (std::size_t m = 0; m < a.size(); ++m) a[m] *= phases[m];
  fft_backward(a);
  const double inv_n = 1.0 / static_cast<double>(a.size());
  for (auto &v : a) v *= inv_n;
}

/// Local damping weights exp(-kappa * dt * g(x_j - a) / 2) where g is the
/// regularized delta profile; empty when kappa = 0.
inline std::vector<std::pair<std::size_t, double>>
damping_factors(const Grid1D &grid, const DetectorSpec &det, double dt) {
  std::vector<std::pair<std::size_t, double>> f;
  if (det.kappa == 0.0) return f;
  if (det.kappa < 0.0)
    throw std::invalid_argument("damped_evolve: kappa must be non-negative");
  if (det.regularization == DetectorSpec::Regularization::GridPoint) {
    const std::size_t idx = grid.nearest_index(det.position);
    f.emplace_back(idx, std::exp(-det.kappa * dt / (2.0 * grid.dx)));
  } else {
    if (!(det.sigma > 0.0))
      throw std::invalid_argument("damped_evolve: sigma must be positive");
    const double norm_c = 1.0 / (det.sigma * std::sqrt(2.0 * std::numbers::pi));
    for (std::size_t j = 0; j < grid.n; ++j) {
      const double d = grid.x(j) - det.position;
      const double g = norm_c * std::exp(-d * d / (2.0 * det.sigma * det.sigma));
      const double w = std::exp(-det.kappa * dt * g / 2.0);
      if (w < 1.0 - 1e-16) f.emplace_back(j, w);
    }
  }
  return f;
}

} // namespace detail

/// Strang-split spectral step for H = -1/2 d^2/dx^2 + V(x): half potential
/// phase, full kinetic phase in momentum space, half potential phase.
inline WaveFunction split_step_evolve(const WaveFunction &wf,
                                      const std::optional<std::vector<double>> &potential,
                                      double dt, std::size_t steps) {
  if (steps == 0) return wf;
  detail::check_step_size(wf.grid, dt);
  if (potential && potential->size() != wf.grid.n)
    throw std::invalid_argument("split_step_evolve: potential size mismatch");
  const auto phases = detail::kinetic_phases(wf.grid, dt);
  std::vector<cdouble> half_pot;
  if (potential) {
    half_pot.resize(wf.grid.n);
    for (std::size_t j = 0; j < wf.grid.n; ++j)
      half_pot[j] = std::exp(cdouble(0.0, -(*potential)[j] * dt / 2.0));
  }
  WaveFunction out = wf;
  auto &a = out.amplitudes;
  for (std::size_t s = 0; s < steps; ++s) {
    if (potential)
      for (std::size_t j = 0; j < a.size(); ++j) a[j] *= half_pot[j];
    detail::kinetic_step(a, phases);
    if (potential)
      for (std::size_t j = 0; j < a.size(); ++j) a[j] *= half_pot[j];
  }
  return out;
}

/// Damped (non-self-adjoint) evolution under H - (i/2) F^dag F with the
/// regularized point detector: per step, the kinetic spectral phase followed
/// by an exact local damping factor. Records norm^2 and the detector-site
/// density at every step.
inline EvolutionRecord damped_evolve(const WaveFunction &wf,
                                     const DetectorSpec &det, double dt,
                                     std::size_t steps) {
  detail::check_step_size(wf.grid, dt);
  const auto phases = detail::kinetic_phases(wf.grid, dt);
  const auto damping = detail::damping_factors(wf.grid, det, dt);
  const std::size_t site = wf.grid.nearest_index(det.position);

  EvolutionRecord rec;
  rec.dt = dt;
  rec.times.reserve(steps + 1);
  rec.norms_squared.reserve(steps + 1);
  rec.detector_densities.reserve(steps + 1);

  // Sampling |psi(a)|^2 right after the damping factor biases the density by
  // exp(-kappa dt/dx); the unbiased sample is taken before damping, weighted
  // so that kappa * density * dt equals the norm actually lost in the step.
  std::vector<std::pair<std::size_t, double>> weights;
  for (const auto &[j, w] : damping)
    weights.emplace_back(j, (1.0 - w * w) * wf.grid.dx / (det.kappa * dt));

  WaveFunction state = wf;
  auto &a = state.amplitudes;
  auto density = [&]() {
    if (weights.empty()) return std::norm(a[site]);
    double d = 0.0;
    for (const auto &[j, c] : weights) d += c * std::norm(a[j]);
    return d;
  };
  auto record = [&](std::size_t s, double d) {
    rec.times.push_back(static_cast<double>(s) * dt);
    rec.norms_squared.push_back(norm_squared(state));
    rec.detector_densities.push_back(d);
  };
  record(0, density());
  for (std::size_t s = 1; s <= steps; ++s) {
    detail::kinetic_step(a, phases);
    const double d = density();
    for (const auto &[j, w] : damping) a[j] *= w;
    record(s, d);
  }
  rec.final_state = std::move(state);
  return rec;
}

} // namespace toalab
