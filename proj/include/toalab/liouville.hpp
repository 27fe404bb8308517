#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "toalab/propagators.hpp"
#include "toalab/wavefunction.hpp"

namespace toalab {

using MatrixXcd = Eigen::MatrixXcd;
using VectorXcd = Eigen::VectorXcd;

/// Hamiltonian plus one detector channel; F need not be Hermitian. An
/// optional time-dependent coefficient scales F as f(t)*F at the integrator
/// stage times.
struct LindbladModel {
  MatrixXcd hamiltonian;
  MatrixXcd detector;
  std::function<double(double)> detector_coefficient; // optional, default 1

  double coefficient(double t) const {
    return detector_coefficient ? detector_coefficient(t) : 1.0;
  }
};

/// rho = psi psi^dag / |psi|^2: the projector onto a state.
inline MatrixXcd pure_state(const VectorXcd &psi) {
  const double n2 = psi.squaredNorm();
  if (n2 == 0.0) throw std::invalid_argument("pure_state: zero vector");
  return (psi * psi.adjoint()) / n2;
}

/// Dissipative Liouville right-hand side
///   d rho / dt = -i [H, rho] + F^dag rho F - 1/2 {F^dag F, rho},
/// reducing to the reversible -i [H, rho] when F = 0.
inline MatrixXcd liouville_rhs(const MatrixXcd &rho, const LindbladModel &model,
                               double t = 0.0) {
  const auto n = rho.rows();
  if (rho.cols() != n || model.hamiltonian.rows() != n ||
      model.hamiltonian.cols() != n)
    throw std::invalid_argument("liouville_rhs: dimension mismatch");
  const cdouble minus_i(0.0, -1.0);
  MatrixXcd rhs =
      minus_i * (model.hamiltonian * rho - rho * model.hamiltonian);
  if (model.detector.size() > 0) {
    if (model.detector.rows() != n || model.detector.cols() != n)
      throw std::invalid_argument("liouville_rhs: detector dimension mismatch");
    const double c = model.coefficient(t);
    const MatrixXcd f = c * model.detector;
    const MatrixXcd ff = f.adjoint() * f;
    rhs += f.adjoint() * rho * f - 0.5 * (ff * rho + rho * ff);
  }
  return rhs;
}

/// Classical 4th-order one-step integration of the dissipative Liouville
/// equation. Positivity is monitored by the test suite, not enforced.
inline std::vector<MatrixXcd> integrate(const MatrixXcd &rho0,
                                        const LindbladModel &model, double dt,
                                        std::size_t steps) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  std::vector<MatrixXcd> traj;
  traj.reserve(steps + 1);
  traj.push_back(rho0);
  MatrixXcd rho = rho0;
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) * dt;
    const MatrixXcd k1 = liouville_rhs(rho, model, t);
    const MatrixXcd k2 = liouville_rhs(rho + 0.5 * dt * k1, model, t + 0.5 * dt);
    const MatrixXcd k3 = liouville_rhs(rho + 0.5 * dt * k2, model, t + 0.5 * dt);
    const MatrixXcd k4 = liouville_rhs(rho + dt * k3, model, t + dt);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    traj.push_back(rho);
  }
  return traj;
}

/// Applies the kernel operator (rho psi)(x) = sum_j rho(x_i, x_j) psi(x_j) dx.
inline WaveFunction kernel_apply(const MatrixXcd &kernel,
                                 const WaveFunction &psi) {
  if (kernel.rows() != static_cast<Eigen::Index>(psi.grid.n) ||
      kernel.cols() != kernel.rows())
    throw std::invalid_argument("kernel_apply: kernel/grid mismatch");
  WaveFunction out;
  out.grid = psi.grid;
  out.amplitudes.resize(psi.grid.n);
  Eigen::Map<const VectorXcd> v(psi.amplitudes.data(),
                                static_cast<Eigen::Index>(psi.amplitudes.size()));
  VectorXcd w = kernel * v * psi.grid.dx;
  for (std::size_t j = 0; j < psi.grid.n; ++j)
    out.amplitudes[j] = w[static_cast<Eigen::Index>(j)];
  return out;
}

/// Dense kinetic Hamiltonian -1/2 d^2/dx^2 built column by column from the
/// spectral derivative, so it shares the propagators' dispersion exactly.
inline MatrixXcd spectral_hamiltonian(const Grid1D &grid) {
  const std::size_t n = grid.n;
  const double dk = grid.dk();
  MatrixXcd h(n, n);
  std::vector<cdouble> col(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::fill(col.begin(), col.end(), cdouble(0.0, 0.0));
    col[c] = cdouble(1.0, 0.0);
    fft_forward(col);
    for (std::size_t m = 0; m < n; ++m) {
      const double k = (m <= n / 2)
                           ? static_cast<double>(m) * dk
                           : (static_cast<double>(m) - static_cast<double>(n)) * dk;
      col[m] *= k * k / 2.0;
    }
    fft_backward(col);
    for (std::size_t r = 0; r < n; ++r)
      h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          col[r] / static_cast<double>(n);
  }
  return h;
}

struct CrosscheckReport {
  std::vector<double> times;
  std::vector<double> kernel_trace;     // trace of the evolved kernel
  std::vector<double> damped_norm;      // |psi_t|^2 from damped_evolve
  double max_difference = 0.0;
};

/// Evolves the pure-state kernel of the packet under the detection-removed
/// channel d rho/dt = -i[H,rho] - 1/2 {F^dag F, rho} and checks that the
/// kernel trace reproduces the damped-evolution norm loss. The commutator
/// costs one matrix product per stage because rho stays Hermitian:
/// [H, rho] = C - C^dag with C = H rho.
inline CrosscheckReport eeqt_crosscheck(const WaveFunction &packet,
                                        const DetectorSpec &det, double dt,
                                        std::size_t steps,
                                        double reference_dt = 1e-3) {
  const std::size_t n = packet.grid.n;
  if (n > 256)
    throw std::invalid_argument("eeqt_crosscheck: grid too large (n > 256)");
  if (det.regularization != DetectorSpec::Regularization::GridPoint)
    throw std::invalid_argument("eeqt_crosscheck: grid-point detector only");

  const MatrixXcd h = spectral_hamiltonian(packet.grid);
  Eigen::VectorXd damping = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  const auto site = static_cast<Eigen::Index>(packet.grid.nearest_index(det.position));
  damping[site] = det.kappa / packet.grid.dx; // F^dag F for the grid-point delta

  Eigen::Map<const VectorXcd> psi0(packet.amplitudes.data(),
                                   static_cast<Eigen::Index>(n));
  MatrixXcd rho = pure_state(psi0);
  // pure_state normalizes in the l2 sense; rescale so trace integrates to the
  // packet's L2 norm with the dx volume weight.
  rho *= norm_squared(packet) / (rho.trace().real() * packet.grid.dx);

  const cdouble minus_i(0.0, -1.0);
  auto rhs = [&](const MatrixXcd &r) -> MatrixXcd {
    MatrixXcd c = h * r;
    MatrixXcd out = minus_i * (c - c.adjoint());
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j)
        out(i, j) -= 0.5 * (damping[i] + damping[j]) * r(i, j);
    return out;
  };

  CrosscheckReport rep;
  rep.times.reserve(steps + 1);
  rep.kernel_trace.reserve(steps + 1);
  const double dx = packet.grid.dx;
  rep.times.push_back(0.0);
  rep.kernel_trace.push_back(rho.trace().real() * dx);
  for (std::size_t s = 0; s < steps; ++s) {
    const MatrixXcd k1 = rhs(rho);
    const MatrixXcd k2 = rhs(rho + 0.5 * dt * k1);
    const MatrixXcd k3 = rhs(rho + 0.5 * dt * k2);
    const MatrixXcd k4 = rhs(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rep.times.push_back(static_cast<double>(s + 1) * dt);
    rep.kernel_trace.push_back(rho.trace().real() * dx);
  }

  // Reference norms from the wave-function-level damped evolution at its own
  // (finer) step, sampled at the kernel trajectory times.
  const auto ref_steps =
      static_cast<std::size_t>(std::llround(rep.times.back() / reference_dt));
  auto rec = damped_evolve(packet, det, reference_dt, ref_steps);
  rep.damped_norm.resize(rep.times.size());
  for (std::size_t j = 0; j < rep.times.size(); ++j) {
    const auto idx = static_cast<std::size_t>(
        std::llround(rep.times[j] / reference_dt));
    rep.damped_norm[j] = rec.norms_squared[std::min(idx, rec.norms_squared.size() - 1)];
    rep.max_difference = std::max(
        rep.max_difference, std::abs(rep.kernel_trace[j] - rep.damped_norm[j]));
  }
  return rep;
}

} // namespace toalab
