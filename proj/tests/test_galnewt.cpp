#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "toalab/galnewt.hpp"

using namespace toalab::galnewt;

namespace {

Grid4 cube(std::size_t n) {
  Grid4 g;
  g.n = {n, n, n, n};
  return g;
}

SpacetimeModel flat_static(std::size_t n = 9) {
  return sample_model(
      cube(n),
      [](int i, int j, const std::array<double, 4> &) {
        return i == j ? 1.0 : 0.0;
      },
      [](int, int, const std::array<double, 4> &) { return 0.0; });
}

// Smooth analytic family used for convergence studies.
double smooth_g(int i, int j, const std::array<double, 4> &x) {
  const double base = (i == j) ? 1.0 : 0.0;
  return base + 0.05 * std::sin(x[0] + x[1] + 0.5 * x[2]) *
                    std::cos(0.3 * x[3] + static_cast<double>(i + j));
}

double smooth_phi(int mu, int nu, const std::array<double, 4> &x) {
  return 0.1 * std::sin(x[static_cast<std::size_t>(mu)] + 2.0 * x[static_cast<std::size_t>(nu)]);
}

} // namespace

TEST_CASE("flat static model has vanishing connection and residuals") {
  auto m = flat_static();
  auto c = build_connection(m);
  for (const auto &f : c.lower)
    for (double v : f) CHECK(v == 0.0);
  auto rep = verify_compatibility(c, m);
  CHECK(rep.max_interior == 0.0);
  CHECK(rep.max_boundary == 0.0);
}

TEST_CASE("constant electric component populates only Gamma^x_00") {
  const double e_field = 5.0;
  auto m = sample_model(
      cube(7),
      [](int i, int j, const std::array<double, 4> &) {
        return i == j ? 1.0 : 0.0;
      },
      [e_field](int mu, int nu, const std::array<double, 4> &) {
        return (mu == 0 && nu == 1) ? e_field : 0.0;
      });
  auto c = build_connection(m);
  const std::size_t p = m.grid.index(3, 3, 3, 3);
  CHECK(connection_upper(c, m, p, 1, 0, 0) == doctest::Approx(e_field));
  CHECK(connection_upper(c, m, p, 2, 0, 0) == doctest::Approx(0.0));
  CHECK(connection_upper(c, m, p, 3, 0, 0) == doctest::Approx(0.0));
  // beyond Gamma_{00,j} and the Phi part of Gamma_{i0,j}, everything vanishes
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        CHECK(c.at(p, i + 1, j + 1, k) == doctest::Approx(0.0));
}

TEST_CASE("time-conformal metric: Gamma_{i0,j} = a(t) a'(t) delta_ij") {
  auto a_of_t = [](double t) { return 1.0 + 0.2 * t; };
  auto m = sample_model(
      cube(17),
      [&](int i, int j, const std::array<double, 4> &x) {
        const double a = a_of_t(x[0]);
        return i == j ? a * a : 0.0;
      },
      [](int, int, const std::array<double, 4> &) { return 0.0; });
  auto c = build_connection(m);
  const std::size_t p = m.grid.index(8, 8, 8, 8);
  const double t = m.grid.coords(p)[0];
  const double expected = a_of_t(t) * 0.2;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(c.at(p, 0, i + 1, j) ==
            doctest::Approx(i == j ? expected : 0.0).epsilon(1e-10));
}

TEST_CASE("compatibility residual converges at second order") {
  // The coarsest grids are pre-asymptotic (slope ~1.5 at n=7); from n=13 on
  // the measured slope sits inside 2 +- 0.3.
  double prev_h = 0.0, prev_r = 0.0;
  for (std::size_t n : {13u, 17u, 25u}) {
    auto m = sample_model(cube(n), smooth_g, smooth_phi);
    auto c = build_connection(m);
    auto rep = verify_compatibility(c, m);
    const double h = m.grid.h(0);
    if (prev_h > 0.0) {
      const double slope = std::log(prev_r / rep.max_interior) / std::log(prev_h / h);
      CHECK(slope == doctest::Approx(2.0).epsilon(0.15)); // 2 +- 0.3
    }
    prev_h = h;
    prev_r = rep.max_interior;
  }
}

TEST_CASE("residual check detects a corrupted connection") {
  auto m = sample_model(cube(9), smooth_g, smooth_phi);
  auto c = build_connection(m);
  auto clean = verify_compatibility(c, m);
  const std::size_t p = m.grid.index(4, 4, 4, 4);
  c.lower[sym4(1, 2) * 3 + 1][p] += 1e-3;
  auto corrupted = verify_compatibility(c, m);
  CHECK(corrupted.max_interior >= clean.max_interior + 1e-4);
}

TEST_CASE("E and B extraction and reassembly") {
  auto m = sample_model(
      cube(5),
      [](int i, int j, const std::array<double, 4> &) {
        return i == j ? 1.0 : 0.0;
      },
      [](int mu, int nu, const std::array<double, 4> &) {
        if (mu == 0 && nu == 1) return 5.0;
        return 0.0;
      });
  auto f = extract_EB(m);
  CHECK(f.electric[0][0] == 5.0);
  CHECK(f.electric[1][0] == 0.0);
  CHECK(f.magnetic[0][0] == 0.0);
  CHECK(f.magnetic[2][0] == 0.0);

  // purely magnetic: Phi_{xy} = b gives B = (0, 0, b)
  auto mb = sample_model(
      cube(5),
      [](int i, int j, const std::array<double, 4> &) {
        return i == j ? 1.0 : 0.0;
      },
      [](int mu, int nu, const std::array<double, 4> &) {
        if (mu == 1 && nu == 2) return 2.5;
        return 0.0;
      });
  auto fb = extract_EB(mb);
  CHECK(fb.magnetic[2][0] == 2.5);
  CHECK(fb.magnetic[0][0] == 0.0);
  CHECK(fb.electric[0][0] == 0.0);

  // round trip through assemble_phi on random smooth fields
  auto mr = sample_model(cube(5), smooth_g, smooth_phi);
  auto fr = extract_EB(mr);
  SpacetimeModel rebuilt = mr;
  assemble_phi(rebuilt, fr);
  for (std::size_t comp = 0; comp < 6; ++comp)
    for (std::size_t p = 0; p < mr.grid.size(); ++p)
      CHECK(rebuilt.phi[comp][p] == doctest::Approx(mr.phi[comp][p]).epsilon(1e-14));
}

TEST_CASE("special Galilei boost of the field pair") {
  const Vec3 e{1.0, 2.0, 3.0};
  SUBCASE("no magnetic field leaves E unchanged") {
    auto [ep, bp] = boost_transform(e, {0.0, 0.0, 0.0}, {7.0, -2.0, 1.0});
    CHECK(ep == e);
    CHECK(bp == Vec3{0.0, 0.0, 0.0});
  }
  SUBCASE("hand cross product") {
    auto [ep, bp] = boost_transform({0.0, 0.0, 0.0}, {0.0, 0.0, 1.0},
                                    {1.0, 0.0, 0.0});
    CHECK(ep == Vec3{0.0, -1.0, 0.0});
    CHECK(bp == Vec3{0.0, 0.0, 1.0});
  }
  SUBCASE("composition is additive in the boost velocity") {
    const Vec3 b{0.4, -1.1, 0.7};
    const Vec3 v{1.0, 2.0, -0.5}, w{-0.3, 0.9, 2.0};
    auto [e1, b1] = boost_transform(e, b, v);
    auto [e2, b2] = boost_transform(e1, b1, w);
    auto [e3, b3] = boost_transform(e, b, {v[0] + w[0], v[1] + w[1], v[2] + w[2]});
    for (int i = 0; i < 3; ++i) {
      CHECK(e2[static_cast<std::size_t>(i)] ==
            doctest::Approx(e3[static_cast<std::size_t>(i)]).epsilon(1e-14));
      CHECK(b2[static_cast<std::size_t>(i)] == b3[static_cast<std::size_t>(i)]);
    }
  }
}

TEST_CASE("closedness residual") {
  SUBCASE("constant Phi is exactly closed") {
    auto m = sample_model(
        cube(7),
        [](int i, int j, const std::array<double, 4> &) {
          return i == j ? 1.0 : 0.0;
        },
        [](int mu, int nu, const std::array<double, 4> &) {
          return static_cast<double>(mu) - static_cast<double>(nu);
        });
    auto rep = check_closedness(m);
    CHECK(rep.max_interior == 0.0);
    CHECK(rep.max_boundary == 0.0);
  }
  SUBCASE("Phi_xy = t violates closedness with unit residual") {
    auto m = sample_model(
        cube(7),
        [](int i, int j, const std::array<double, 4> &) {
          return i == j ? 1.0 : 0.0;
        },
        [](int mu, int nu, const std::array<double, 4> &x) {
          return (mu == 1 && nu == 2) ? x[0] : 0.0;
        });
    auto rep = check_closedness(m);
    CHECK(rep.max_interior == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("discrete exterior derivative of a potential is closed") {
    Grid4 g = cube(9);
    std::array<Field, 4> a;
    for (auto &f : a) f.resize(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) {
      const auto x = g.coords(p);
      a[0][p] = std::sin(x[1] + 0.5 * x[3]);
      a[1][p] = std::cos(x[0]) * x[2];
      a[2][p] = x[0] * x[1];
      a[3][p] = std::sin(0.7 * x[2]);
    }
    SpacetimeModel m = flat_static(9);
    m.phi = potential_to_field(a, g);
    auto rep = check_closedness(m);
    // centered differences commute, so d(dA) vanishes identically inside
    CHECK(rep.max_interior < 1e-13);
  }
  SUBCASE("analytically sampled dA is closed at second order") {
    double prev_h = 0.0, prev_r = 0.0;
    for (std::size_t n : {7u, 13u, 25u}) {
      // Phi = dA for A = (sin(x+0.5 w), cos(t) z, t x, sin(0.7 z)) sampled
      // from the exact derivative formulas; coordinates (t,x,z,w).
      auto m = sample_model(
          cube(n),
          [](int i, int j, const std::array<double, 4> &) {
            return i == j ? 1.0 : 0.0;
          },
          [](int mu, int nu, const std::array<double, 4> &x) -> double {
            auto grad = [&](int a, int b) -> double {
              // d_a A_b analytically
              if (b == 0) {
                if (a == 1) return std::cos(x[1] + 0.5 * x[3]);
                if (a == 3) return 0.5 * std::cos(x[1] + 0.5 * x[3]);
                return 0.0;
              }
              if (b == 1) {
                if (a == 0) return -std::sin(x[0]) * x[2];
                if (a == 2) return std::cos(x[0]);
                return 0.0;
              }
              if (b == 2) {
                if (a == 0) return x[1];
                if (a == 1) return x[0];
                return 0.0;
              }
              if (a == 2) return 0.7 * std::cos(0.7 * x[2]);
              return 0.0;
            };
            return grad(mu, nu) - grad(nu, mu);
          });
      auto rep = check_closedness(m);
      const double h = m.grid.h(0);
      if (prev_h > 0.0) {
        const double slope = std::log(prev_r / rep.max_interior) / std::log(prev_h / h);
        CHECK(slope == doctest::Approx(2.0).epsilon(0.15));
      }
      prev_h = h;
      prev_r = rep.max_interior;
    }
  }
}

TEST_CASE("potential to field") {
  Grid4 g = cube(9);
  std::array<Field, 4> a;
  SUBCASE("constant potential gives zero field") {
    for (auto &f : a) f.assign(g.size(), 3.7);
    auto phi = potential_to_field(a, g);
    for (const auto &f : phi)
      for (double v : f) CHECK(v == 0.0);
  }
  SUBCASE("linear scalar potential gives a constant electric field") {
    // A_0 = -x gives E_x = Phi_{0x} = d_0 A_x - d_x A_0 = 1.
    for (auto &f : a) f.assign(g.size(), 0.0);
    for (std::size_t p = 0; p < g.size(); ++p) a[0][p] = -g.coords(p)[1];
    SpacetimeModel m = flat_static(9);
    m.phi = potential_to_field(a, g);
    auto f = extract_EB(m);
    for (std::size_t p = 0; p < g.size(); ++p) {
      CHECK(f.electric[0][p] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(f.electric[1][p] == doctest::Approx(0.0));
    }
  }
  SUBCASE("gauge shifts leave the field unchanged to truncation order") {
    for (auto &f : a) f.assign(g.size(), 0.0);
    for (std::size_t p = 0; p < g.size(); ++p) {
      const auto x = g.coords(p);
      a[0][p] = std::sin(x[1]);
      a[1][p] = x[0] * x[2];
      a[2][p] = std::cos(x[3]);
      a[3][p] = 0.0;
    }
    auto phi = potential_to_field(a, g);
    // lambda = sin(t + x z): add the analytic gradient to A
    auto shifted = a;
    for (std::size_t p = 0; p < g.size(); ++p) {
      const auto x = g.coords(p);
      const double c = std::cos(x[0] + x[1] * x[2]);
      shifted[0][p] += c;
      shifted[1][p] += c * x[2];
      shifted[2][p] += c * x[1];
    }
    auto phi2 = potential_to_field(shifted, g);
    const double h = g.h(0);
    for (std::size_t comp = 0; comp < 6; ++comp)
      for (std::size_t p = 0; p < g.size(); ++p)
        if (detail::interior(g, p))
          CHECK(std::abs(phi2[comp][p] - phi[comp][p]) < 5.0 * h * h);
  }
}

TEST_CASE("quantization connection form") {
  auto m = flat_static(5);
  const std::size_t p = m.grid.index(2, 2, 2, 2);
  SUBCASE("rest velocity with no potential") {
    auto q = quantization_form(m, p, {0.0, 0.0, 0.0});
    CHECK(q.a0 == 0.0);
    CHECK(q.ai == Vec3{0.0, 0.0, 0.0});
  }
  SUBCASE("flat metric at the packet velocity") {
    auto q = quantization_form(m, p, {4.0, 0.0, 0.0});
    CHECK(q.a0 == doctest::Approx(-8.0));
    CHECK(q.ai[0] == doctest::Approx(4.0));
    CHECK(q.ai[1] == 0.0);
  }
  SUBCASE("algebraic identity a.y + 2(a0 - A0) = A.y on random inputs") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    auto mg = sample_model(cube(5), smooth_g, smooth_phi);
    for (auto &f : mg.potential) {
      f.resize(mg.grid.size());
      for (auto &v : f) v = uni(rng);
    }
    for (int trial = 0; trial < 20; ++trial) {
      const Vec3 y{2.0 * uni(rng), 2.0 * uni(rng), 2.0 * uni(rng)};
      const std::size_t pt =
          static_cast<std::size_t>((uni(rng) * 0.5 + 0.5) *
                                   static_cast<double>(mg.grid.size() - 1));
      auto q = quantization_form(mg, pt, y);
      const double a0_pot = mg.potential[0][pt];
      double ay = 0.0, pot_y = 0.0;
      for (int i = 0; i < 3; ++i) {
        ay += q.ai[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
        pot_y += mg.potential[static_cast<std::size_t>(i + 1)][pt] *
                 y[static_cast<std::size_t>(i)];
      }
      CHECK(ay + 2.0 * (q.a0 - a0_pot) == doctest::Approx(pot_y).epsilon(1e-12));
    }
  }
}
