#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace toalab::galnewt {

using Vec3 = std::array<double, 3>;

inline Vec3 cross(const Vec3 &a, const Vec3 &b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

/// Uniform grid over a box in adapted coordinates (x^0, x^1, x^2, x^3).
struct Grid4 {
  std::array<double, 4> lo{0.0, 0.0, 0.0, 0.0};
  std::array<double, 4> hi{1.0, 1.0, 1.0, 1.0};
  std::array<std::size_t, 4> n{17, 17, 17, 17};

  double h(int axis) const {
    return (hi[axis] - lo[axis]) / static_cast<double>(n[axis] - 1);
  }
  std::size_t size() const { return n[0] * n[1] * n[2] * n[3]; }
  std::size_t index(std::size_t i0, std::size_t i1, std::size_t i2,
                    std::size_t i3) const {
    return ((i0 * n[1] + i1) * n[2] + i2) * n[3] + i3;
  }
  std::array<std::size_t, 4> unravel(std::size_t p) const {
    std::array<std::size_t, 4> i;
    i[3] = p % n[3];
    p /= n[3];
    i[2] = p % n[2];
    p /= n[2];
    i[1] = p % n[1];
    i[0] = p / n[1];
    return i;
  }
  std::array<double, 4> coords(std::size_t p) const {
    const auto i = unravel(p);
    return {lo[0] + static_cast<double>(i[0]) * h(0),
            lo[1] + static_cast<double>(i[1]) * h(1),
            lo[2] + static_cast<double>(i[2]) * h(2),
            lo[3] + static_cast<double>(i[3]) * h(3)};
  }
  std::size_t stride(int axis) const {
    switch (axis) {
      case 0: return n[1] * n[2] * n[3];
      case 1: return n[2] * n[3];
      case 2: return n[3];
      default: return 1;
    }
  }
};

using Field = std::vector<double>; // one scalar sample per grid point

/// Packed index for a symmetric 3x3 object, i, j in {0,1,2} (spatial).
inline std::size_t sym3(int i, int j) {
  static constexpr int table[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
  return static_cast<std::size_t>(table[i][j]);
}

/// Packed index and sign for an antisymmetric 4x4 object; components stored
/// as (01, 02, 03, 12, 13, 23).
inline std::pair<int, double> antisym4(int mu, int nu) {
  if (mu == nu) return {-1, 0.0};
  double sign = 1.0;
  if (mu > nu) {
    std::swap(mu, nu);
    sign = -1.0;
  }
  static constexpr int table[4][4] = {{-1, 0, 1, 2},
                                      {-1, -1, 3, 4},
                                      {-1, -1, -1, 5},
                                      {-1, -1, -1, -1}};
  return {table[mu][nu], sign};
}

/// Sampled fields of a Galilei-Newton space-time model in adapted
/// coordinates: the fiber metric g_ij (symmetric positive definite) and the
/// antisymmetric connection freedom Phi_mu_nu, plus an optional potential
/// A_mu with Phi = dA.
struct SpacetimeModel {
  Grid4 grid;
  std::array<Field, 6> g;      // sym3-packed g_ij
  std::array<Field, 6> phi;    // antisym4-packed Phi_mu_nu
  std::array<Field, 4> potential; // A_mu; empty fields when absent

  bool has_potential() const { return !potential[0].empty(); }

  double g_at(std::size_t p, int i, int j) const { return g[sym3(i, j)][p]; }
  double phi_at(std::size_t p, int mu, int nu) const {
    const auto [c, s] = antisym4(mu, nu);
    return c < 0 ? 0.0 : s * phi[static_cast<std::size_t>(c)][p];
  }
};

/// Samples a model from analytic component functions of (t, x, y, z).
using ScalarFn = std::function<double(const std::array<double, 4> &)>;

inline SpacetimeModel sample_model(
    const Grid4 &grid,
    const std::function<double(int, int, const std::array<double, 4> &)> &g_fn,
    const std::function<double(int, int, const std::array<double, 4> &)> &phi_fn) {
  SpacetimeModel m;
  m.grid = grid;
  const std::size_t np = grid.size();
  for (auto &f : m.g) f.assign(np, 0.0);
  for (auto &f : m.phi) f.assign(np, 0.0);
  for (std::size_t p = 0; p < np; ++p) {
    const auto x = grid.coords(p);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) m.g[sym3(i, j)][p] = g_fn(i, j, x);
    int c = 0;
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = mu + 1; nu < 4; ++nu) m.phi[static_cast<std::size_t>(c++)][p] = phi_fn(mu, nu, x);
  }
  return m;
}

namespace detail {

/// Second-order centered derivative along an axis, first-order one-sided at
/// the boundary faces.
inline double diff2(const Field &f, const Grid4 &g, std::size_t p, int axis) {
  const auto i = g.unravel(p);
  const std::size_t s = g.stride(axis);
  const double h = g.h(axis);
  const std::size_t m = g.n[axis];
  const std::size_t a = i[axis];
  if (a == 0) return (f[p + s] - f[p]) / h;
  if (a == m - 1) return (f[p] - f[p - s]) / h;
  return (f[p + s] - f[p - s]) / (2.0 * h);
}

/// Fourth-order centered derivative where the stencil fits, degrading to the
/// second-order scheme nearer the boundary. Used as the reference derivative
/// in residual checks so the reported residual reflects the construction's
/// own truncation error.
inline double diff4(const Field &f, const Grid4 &g, std::size_t p, int axis) {
  const auto i = g.unravel(p);
  const std::size_t s = g.stride(axis);
  const double h = g.h(axis);
  const std::size_t m = g.n[axis];
  const std::size_t a = i[axis];
  if (a >= 2 && a + 2 < m)
    return (-f[p + 2 * s] + 8.0 * f[p + s] - 8.0 * f[p - s] + f[p - 2 * s]) /
           (12.0 * h);
  return diff2(f, g, p, axis);
}

/// True when the point is at least two cells from every boundary face.
inline bool interior(const Grid4 &g, std::size_t p) {
  const auto i = g.unravel(p);
  for (int axis = 0; axis < 4; ++axis)
    if (i[axis] < 2 || i[axis] + 2 >= g.n[axis]) return false;
  return true;
}

inline std::array<std::array<double, 3>, 3> invert3(
    const std::array<std::array<double, 3>, 3> &a) {
  const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                     a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                     a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  if (!(std::abs(det) > 0.0))
    throw std::domain_error("invert3: singular fiber metric");
  const double inv = 1.0 / det;
  std::array<std::array<double, 3>, 3> r;
  r[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) * inv;
  r[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) * inv;
  r[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) * inv;
  r[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) * inv;
  r[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) * inv;
  r[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) * inv;
  r[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) * inv;
  r[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) * inv;
  r[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) * inv;
  return r;
}

} // namespace detail

/// Packed index for a symmetric 4x4 pair (mu, nu), 10 entries.
inline std::size_t sym4(int mu, int nu) {
  if (mu > nu) std::swap(mu, nu);
  static constexpr int table[4][4] = {{0, 1, 2, 3},
                                      {-1, 4, 5, 6},
                                      {-1, -1, 7, 8},
                                      {-1, -1, -1, 9}};
  return static_cast<std::size_t>(table[mu][nu]);
}

/// Lowered coefficients Gamma_{mu nu, k} = g_kj Gamma^j_{mu nu} of the
/// metric- and time-compatible torsion-free connection. The time row
/// Gamma^0_{mu nu} vanishes identically and is not stored.
struct ConnectionCoefficients {
  Grid4 grid;
  // lower[sym4(mu,nu)*3 + k] is the field Gamma_{mu nu, k}
  std::array<Field, 30> lower;

  double at(std::size_t p, int mu, int nu, int k) const {
    return lower[sym4(mu, nu) * 3 + static_cast<std::size_t>(k)][p];
  }
};

/// Builds the connection from the model:
///   Gamma_{ij,k} = 1/2 (d_i g_jk + d_j g_ik - d_k g_ij)   (Levi-Civita part)
///   Gamma_{i0,j} = 1/2 (d_0 g_ij + Phi_ij)
///   Gamma_{00,j} = Phi_{0j}
/// Spatial indices in Gamma refer to axes 1..3; derivatives are centered
/// second-order differences (one-sided at the boundary).
inline ConnectionCoefficients build_connection(const SpacetimeModel &m) {
  const Grid4 &grid = m.grid;
  const std::size_t np = grid.size();
  ConnectionCoefficients c;
  c.grid = grid;
  for (auto &f : c.lower) f.assign(np, 0.0);
  for (std::size_t p = 0; p < np; ++p) {
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          const double v =
              0.5 * (detail::diff2(m.g[sym3(j, k)], grid, p, i + 1) +
                     detail::diff2(m.g[sym3(i, k)], grid, p, j + 1) -
                     detail::diff2(m.g[sym3(i, j)], grid, p, k + 1));
          c.lower[sym4(i + 1, j + 1) * 3 + static_cast<std::size_t>(k)][p] = v;
        }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double v = 0.5 * (detail::diff2(m.g[sym3(i, j)], grid, p, 0) +
                                m.phi_at(p, i + 1, j + 1));
        c.lower[sym4(0, i + 1) * 3 + static_cast<std::size_t>(j)][p] = v;
      }
    for (int j = 0; j < 3; ++j)
      c.lower[sym4(0, 0) * 3 + static_cast<std::size_t>(j)][p] =
          m.phi_at(p, 0, j + 1);
  }
  return c;
}

/// Raised coefficient Gamma^lambda_{mu nu} at one point (lambda = 0 gives 0).
inline double connection_upper(const ConnectionCoefficients &c,
                               const SpacetimeModel &m, std::size_t p,
                               int lambda, int mu, int nu) {
  if (lambda == 0) return 0.0;
  std::array<std::array<double, 3>, 3> gm;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gm[i][j] = m.g_at(p, i, j);
  const auto ginv = detail::invert3(gm);
  double v = 0.0;
  for (int k = 0; k < 3; ++k) v += ginv[lambda - 1][k] * c.at(p, mu, nu, k);
  return v;
}

struct ResidualReport {
  double max_interior = 0.0;
  double mean_interior = 0.0;
  double max_boundary = 0.0;
};

/// Residual of the metric-compatibility equations
///   d_mu g_ij - Gamma_{mu i, j} - Gamma_{mu j, i} = 0,
/// with the derivative taken by a higher-order reference stencil, so the
/// residual measures the truncation error of the second-order construction.
/// The Gamma^0 = 0 (time-form) condition holds by construction.
inline ResidualReport verify_compatibility(const ConnectionCoefficients &c,
                                           const SpacetimeModel &m) {
  const Grid4 &grid = m.grid;
  ResidualReport rep;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const bool in = detail::interior(grid, p);
    for (int mu = 0; mu < 4; ++mu)
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
          const double r =
              std::abs(detail::diff4(m.g[sym3(i, j)], grid, p, mu) -
                       c.at(p, mu, i + 1, j) - c.at(p, mu, j + 1, i));
          if (in) {
            rep.max_interior = std::max(rep.max_interior, r);
            sum += r;
            ++count;
          } else {
            rep.max_boundary = std::max(rep.max_boundary, r);
          }
        }
  }
  rep.mean_interior = count ? sum / static_cast<double>(count) : 0.0;
  return rep;
}

/// Gravitoelectromagnetic fields E_i = Phi_{0i}, B_i = 1/2 eps_{ijk} Phi_{jk}.
/// (The antisymmetric pair Phi_{jk} is contracted with the Levi-Civita
/// symbol; with spatial components (12,13,23) this reads B = (Phi_23,
/// -Phi_13, Phi_12).)
struct EBFields {
  std::array<Field, 3> electric;
  std::array<Field, 3> magnetic;
};

inline EBFields extract_EB(const SpacetimeModel &m) {
  const std::size_t np = m.grid.size();
  EBFields f;
  for (auto &v : f.electric) v.resize(np);
  for (auto &v : f.magnetic) v.resize(np);
  for (std::size_t p = 0; p < np; ++p) {
    for (int i = 0; i < 3; ++i) f.electric[static_cast<std::size_t>(i)][p] = m.phi_at(p, 0, i + 1);
    f.magnetic[0][p] = m.phi_at(p, 2, 3);
    f.magnetic[1][p] = -m.phi_at(p, 1, 3);
    f.magnetic[2][p] = m.phi_at(p, 1, 2);
  }
  return f;
}

/// Inverse of extract_EB: fills Phi_{0i} = E_i and the spatial block from B.
inline void assemble_phi(SpacetimeModel &m, const EBFields &f) {
  const std::size_t np = m.grid.size();
  for (auto &v : m.phi) v.assign(np, 0.0);
  for (std::size_t p = 0; p < np; ++p) {
    m.phi[antisym4(0, 1).first][p] = f.electric[0][p];
    m.phi[antisym4(0, 2).first][p] = f.electric[1][p];
    m.phi[antisym4(0, 3).first][p] = f.electric[2][p];
    m.phi[antisym4(2, 3).first][p] = f.magnetic[0][p];
    m.phi[antisym4(1, 3).first][p] = -f.magnetic[1][p];
    m.phi[antisym4(1, 2).first][p] = f.magnetic[2][p];
  }
}

/// Special Galilei boost of the fields on flat fibers:
/// E' = E + v x B, B' = B.
inline std::pair<Vec3, Vec3> boost_transform(const Vec3 &e, const Vec3 &b,
                                             const Vec3 &v) {
  const Vec3 vxb = cross(v, b);
  return {{e[0] + vxb[0], e[1] + vxb[1], e[2] + vxb[2]}, b};
}

inline EBFields boost_transform(const EBFields &f, const Vec3 &v) {
  EBFields out = f;
  const std::size_t np = f.electric[0].size();
  for (std::size_t p = 0; p < np; ++p) {
    const Vec3 e{f.electric[0][p], f.electric[1][p], f.electric[2][p]};
    const Vec3 b{f.magnetic[0][p], f.magnetic[1][p], f.magnetic[2][p]};
    const auto [ep, bp] = boost_transform(e, b, v);
    for (int i = 0; i < 3; ++i) {
      out.electric[static_cast<std::size_t>(i)][p] = ep[static_cast<std::size_t>(i)];
      out.magnetic[static_cast<std::size_t>(i)][p] = bp[static_cast<std::size_t>(i)];
    }
  }
  return out;
}

/// Max residual of the closedness condition d_[mu Phi_nu sigma] = 0 over all
/// index triples, evaluated by centered differences.
inline ResidualReport check_closedness(const SpacetimeModel &m) {
  const Grid4 &grid = m.grid;
  ResidualReport rep;
  double sum = 0.0;
  std::size_t count = 0;
  static constexpr int triples[4][3] = {
      {0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const bool in = detail::interior(grid, p);
    for (const auto &t : triples) {
      const int mu = t[0], nu = t[1], sg = t[2];
      auto dphi = [&](int d, int a, int b) {
        const auto [comp, sign] = antisym4(a, b);
        if (comp < 0) return 0.0;
        return sign * detail::diff2(m.phi[static_cast<std::size_t>(comp)], grid, p, d);
      };
      const double r =
          std::abs(dphi(mu, nu, sg) + dphi(nu, sg, mu) + dphi(sg, mu, nu));
      if (in) {
        rep.max_interior = std::max(rep.max_interior, r);
        sum += r;
        ++count;
      } else {
        rep.max_boundary = std::max(rep.max_boundary, r);
      }
    }
  }
  rep.mean_interior = count ? sum / static_cast<double>(count) : 0.0;
  return rep;
}

/// Phi_mu_nu = d_mu A_nu - d_nu A_mu from a sampled potential, centered
/// differences; antisymmetry is exact by construction.
inline std::array<Field, 6> potential_to_field(const std::array<Field, 4> &a,
                                               const Grid4 &grid) {
  std::array<Field, 6> phi;
  const std::size_t np = grid.size();
  for (auto &f : phi) f.assign(np, 0.0);
  for (std::size_t p = 0; p < np; ++p) {
    int c = 0;
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = mu + 1; nu < 4; ++nu) {
        phi[static_cast<std::size_t>(c++)][p] =
            detail::diff2(a[static_cast<std::size_t>(nu)], grid, p, mu) -
            detail::diff2(a[static_cast<std::size_t>(mu)], grid, p, nu);
      }
  }
  return phi;
}

/// Connection-form coefficients of the quantization bundle at one point,
///   a_0 = -1/2 g_ij y^i y^j + A_0,   a_i = g_ij y^j + A_i,
/// for a fiber velocity y.
struct QuantizationForm {
  double a0 = 0.0;
  Vec3 ai{0.0, 0.0, 0.0};
};

inline QuantizationForm quantization_form(const SpacetimeModel &m,
                                          std::size_t p, const Vec3 &y) {
  QuantizationForm q;
  double gyy = 0.0;
  for (int i = 0; i < 3; ++i) {
    double gy = 0.0;
    for (int j = 0; j < 3; ++j) gy += m.g_at(p, i, j) * y[static_cast<std::size_t>(j)];
    q.ai[static_cast<std::size_t>(i)] = gy;
    gyy += gy * y[static_cast<std::size_t>(i)];
  }
  q.a0 = -0.5 * gyy;
  if (m.has_potential()) {
    q.a0 += m.potential[0][p];
    for (int i = 0; i < 3; ++i)
      q.ai[static_cast<std::size_t>(i)] += m.potential[static_cast<std::size_t>(i + 1)][p];
  }
  return q;
}

} // namespace toalab::galnewt
