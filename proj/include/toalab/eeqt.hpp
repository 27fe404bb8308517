#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "toalab/arrival.hpp"
#include "toalab/kijowski.hpp"
#include "toalab/propagators.hpp"

namespace toalab {

/// Detection data distilled from a damped evolution run. The density is
/// kappa |psi_t(a)|^2; the cumulative detection probability is computed two
/// ways (trapezoid of the density, and the norm loss 1 - |psi_t|^2) which
/// must agree to integrator accuracy.
struct EeqtDetection {
  ArrivalDistribution dist;
  std::vector<double> norm_loss;  // 1 - |psi_t|^2 per recorded time
  double p_infinity = 0.0;        // norm loss at the horizon
  double tail_estimate = 0.0;     // norm still short of the detector at the horizon
  double consistency_sup = 0.0;   // sup |cumulative - norm_loss|
};

inline EeqtDetection detection_distribution(const EvolutionRecord &rec,
                                            const DetectorSpec &det) {
  if (rec.times.size() != rec.detector_densities.size() ||
      rec.times.size() != rec.norms_squared.size() || rec.times.empty())
    throw std::invalid_argument("detection_distribution: malformed record");
  EeqtDetection out;
  std::vector<double> p(rec.times.size());
  for (std::size_t j = 0; j < p.size(); ++j)
    p[j] = det.kappa * rec.detector_densities[j];
  out.dist = make_distribution(rec.times, std::move(p));
  out.norm_loss.resize(rec.norms_squared.size());
  for (std::size_t j = 0; j < out.norm_loss.size(); ++j)
    out.norm_loss[j] = 1.0 - rec.norms_squared[j];
  out.p_infinity = out.norm_loss.back();
  for (std::size_t j = 0; j < out.norm_loss.size(); ++j)
    out.consistency_sup = std::max(
        out.consistency_sup, std::abs(out.dist.cumulative[j] - out.norm_loss[j]));

  // Surviving norm that has not yet reached the detector and is still moving
  // toward it: the k>0 content of the final state restricted to x < a.
  // Reflected (left-moving) norm is excluded -- it never arrives.
  const Grid1D &g = rec.final_state.grid;
  const std::size_t site = g.nearest_index(det.position);
  WaveFunction left = rec.final_state;
  for (std::size_t j = site; j < g.n; ++j)
    left.amplitudes[j] = cdouble(0.0, 0.0);
  auto left_k = to_momentum(left);
  double tail = 0.0;
  for (std::size_t m = 0; m < g.n; ++m)
    if (left_k.grid.k(m) > 0.0) tail += std::norm(left_k.amplitudes[m]);
  out.tail_estimate = tail * left_k.grid.dk();
  return out;
}

/// Splitting the evolution is only accurate while (a) the per-step damping
/// exponent kappa*dt/(2dx) stays small and (b) no grid mode k' aliases the
/// packet momenta through the discrete kinetic phase (k'^2 = k^2 + 4 pi m/dt
/// with |k'| <= k_max), which the point source at the detector would excite.
/// Returns how many substeps a nominal step must be divided into so that the
/// exponent stays below 0.1 and dt < 4 pi / k_max^2.
inline std::size_t damping_substeps(double kappa, double dt, const Grid1D &grid) {
  const double exponent = kappa * dt / (2.0 * grid.dx);
  const double alias = dt * grid.k_max() * grid.k_max() / (4.0 * std::numbers::pi);
  const double m = std::max(std::ceil(exponent / 0.1), std::ceil(alias / 0.9));
  return std::max<std::size_t>(1, static_cast<std::size_t>(m));
}

struct KappaSweepResult {
  std::vector<double> kappas;
  std::vector<double> p_infinity;
  std::vector<double> tail_estimates;
  double best_kappa = 0.0;
  double best_p_infinity = 0.0;
};

/// P(infinity) as a function of the detector sensitivity (Fig. 6 shape:
/// rise, single optimum near twice the packet velocity, then fall).
inline KappaSweepResult kappa_sweep(const WaveFunction &packet,
                                    DetectorSpec det,
                                    const std::vector<double> &kappas,
                                    double dt, std::size_t steps) {
  if (kappas.empty()) throw std::invalid_argument("kappa_sweep: empty kappa list");
  KappaSweepResult out;
  out.kappas = kappas;
  for (double kappa : kappas) {
    if (kappa < 0.0)
      throw std::invalid_argument("kappa_sweep: kappa must be non-negative");
    det.kappa = kappa;
    const std::size_t m = damping_substeps(kappa, dt, packet.grid);
    auto rec = damped_evolve(packet, det, dt / static_cast<double>(m), steps * m);
    auto detn = detection_distribution(rec, det);
    out.p_infinity.push_back(detn.p_infinity);
    out.tail_estimates.push_back(detn.tail_estimate);
  }
  const auto best = std::max_element(out.p_infinity.begin(), out.p_infinity.end());
  out.best_kappa = out.kappas[static_cast<std::size_t>(best - out.p_infinity.begin())];
  out.best_p_infinity = *best;
  return out;
}

/// Kijowski and EEQT arrival densities, each normalized on a common time
/// grid, with their pointwise discrepancy. No verdict is attached: whether
/// the two agree beyond numerics is an open question.
struct ComparisonReport {
  std::vector<double> times;
  std::vector<double> eeqt_density;     // normalized
  std::vector<double> kijowski_density; // normalized
  double sup_difference = 0.0;
  double l1_difference = 0.0;
  double eeqt_total_raw = 0.0; // P(infinity) before normalization
};

inline double interpolate(const std::vector<double> &t,
                          const std::vector<double> &f, double tq) {
  if (tq <= t.front()) return f.front();
  if (tq >= t.back()) return f.back();
  const auto it = std::upper_bound(t.begin(), t.end(), tq);
  const std::size_t j = static_cast<std::size_t>(it - t.begin());
  const double w = (tq - t[j - 1]) / (t[j] - t[j - 1]);
  return (1.0 - w) * f[j - 1] + w * f[j];
}

inline ComparisonReport compare_with_kijowski(const WaveFunction &packet,
                                              double kappa, double dt,
                                              double horizon,
                                              std::size_t n_tau = 600) {
  if (!(kappa > 0.0))
    throw std::invalid_argument("compare_with_kijowski: kappa must be positive");
  DetectorSpec det;
  det.kappa = kappa;
  const std::size_t m = damping_substeps(kappa, dt, packet.grid);
  const auto steps =
      static_cast<std::size_t>(std::llround(horizon / dt)) * m;
  auto rec = damped_evolve(packet, det, dt / static_cast<double>(m), steps);
  auto eeqt = detection_distribution(rec, det);
  if (!(eeqt.dist.total > 0.0))
    throw std::domain_error("compare_with_kijowski: zero-total EEQT distribution");

  ComparisonReport rep;
  rep.times = uniform_times(0.0, horizon, n_tau);
  rep.eeqt_total_raw = eeqt.p_infinity;
  std::vector<double> eeqt_resampled(n_tau);
  for (std::size_t j = 0; j < n_tau; ++j)
    eeqt_resampled[j] =
        interpolate(eeqt.dist.times, eeqt.dist.density, rep.times[j]);
  auto eeqt_norm = normalized(make_distribution(rep.times, std::move(eeqt_resampled)));
  auto kij_norm = normalized(
      kijowski_distribution(to_momentum(packet), rep.times));

  rep.eeqt_density = eeqt_norm.density;
  rep.kijowski_density = kij_norm.density;
  std::vector<double> absdiff(n_tau);
  for (std::size_t j = 0; j < n_tau; ++j) {
    absdiff[j] = std::abs(rep.eeqt_density[j] - rep.kijowski_density[j]);
    rep.sup_difference = std::max(rep.sup_difference, absdiff[j]);
  }
  rep.l1_difference = trapezoid(rep.times, absdiff);
  return rep;
}

} // namespace toalab
