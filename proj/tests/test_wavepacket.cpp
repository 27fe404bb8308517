#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "toalab/wavefunction.hpp"

using namespace toalab;

namespace {

Grid1D default_grid() { return make_grid(-20.0, 20.0, 4096); }

// Independent quadrature oracle on the closed-form density, away from the
// sampled amplitudes.
double position_mean_oracle(const GaussianPacketSpec &spec) {
  const double a = spec.center - 12.0, b = spec.center + 12.0;
  const std::size_t n = 200000;
  const double h = (b - a) / static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double x = a + static_cast<double>(j) * h;
    const double w = (j == 0 || j == n) ? 0.5 : 1.0;
    const double d = std::sqrt(2.0 * spec.alpha / std::numbers::pi) *
                     std::exp(-2.0 * spec.alpha * (x - spec.center) * (x - spec.center));
    num += w * x * d;
    den += w * d;
  }
  return num / den;
}

} // namespace

TEST_CASE("make_grid spacing and momentum grid") {
  auto g = make_grid(-20.0, 20.0, 4096);
  CHECK(g.dx == doctest::Approx(40.0 / 4096.0).epsilon(1e-14));
  CHECK(g.dk() == doctest::Approx(2.0 * std::numbers::pi / 40.0).epsilon(1e-14));
  CHECK(g.k(0) == doctest::Approx(-g.k_max()).epsilon(1e-14));
  CHECK(g.k(g.n / 2) == doctest::Approx(0.0));
}

TEST_CASE("make_grid rejects bad input") {
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1.0, 1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(2.0, 1.0, 4), std::invalid_argument);
}

TEST_CASE("gaussian packet samples the closed form") {
  auto g = default_grid();
  auto wf = gaussian_packet(paper_packet(), g);
  CHECK(norm_squared(wf) == doctest::Approx(1.0).epsilon(1e-10));
  const std::size_t j = g.nearest_index(-4.0);
  const double xj = g.x(j);
  CHECK(std::norm(wf.amplitudes[j]) ==
        doctest::Approx(std::sqrt(2.0 / std::numbers::pi) *
                        std::exp(-2.0 * (xj + 4.0) * (xj + 4.0)))
            .epsilon(1e-12));
  CHECK(expectation_position(wf) == doctest::Approx(-4.0).epsilon(1e-8));
  CHECK(expectation_position(wf) ==
        doctest::Approx(position_mean_oracle(paper_packet())).epsilon(1e-7));
  CHECK(expectation_momentum(to_momentum(wf)) == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("gaussian packet rejects leaking configurations") {
  auto tiny = make_grid(-5.0, 5.0, 64);
  CHECK_THROWS_AS(gaussian_packet(paper_packet(), tiny), std::domain_error);
  CHECK_THROWS_AS(gaussian_packet({0.0, -1.0, 0.0, 0.0}, default_grid()),
                  std::invalid_argument);
}

TEST_CASE("momentum representation matches the analytic transform") {
  auto wf = gaussian_packet(paper_packet(), default_grid());
  auto sw = to_momentum(wf);
  // |psi~(k)|^2 = (2*pi)^(-1/2) exp(-(k-4)^2/2) for the unit-width packet.
  for (std::size_t m = 0; m < sw.grid.n; ++m) {
    const double k = sw.grid.k(m);
    if (std::abs(k) > 12.0) continue;
    const double expected = std::exp(-(k - 4.0) * (k - 4.0) / 2.0) /
                            std::sqrt(2.0 * std::numbers::pi);
    CHECK(std::norm(sw.amplitudes[m]) == doctest::Approx(expected).epsilon(1e-9));
  }
  CHECK(norm_squared(sw) == doctest::Approx(norm_squared(wf)).epsilon(1e-10));
}

TEST_CASE("shift theorem") {
  auto g = default_grid();
  auto wf = gaussian_packet(paper_packet(), g);
  const double shift = 2.0;
  // Sample psi(x - shift) directly; its transform must be psi~ e^{-ik shift}.
  WaveFunction shifted;
  shifted.grid = g;
  shifted.amplitudes.resize(g.n);
  const double pref = std::pow(2.0 / std::numbers::pi, 0.25);
  for (std::size_t j = 0; j < g.n; ++j) {
    const double x = g.x(j) - shift;
    shifted.amplitudes[j] =
        pref * std::exp(cdouble(-(x + 4.0) * (x + 4.0), 4.0 * x + 16.0));
  }
  auto sw = to_momentum(wf);
  auto sw_shifted = to_momentum(shifted);
  double max_err = 0.0;
  for (std::size_t m = 0; m < g.n; ++m) {
    const double k = g.k(m);
    const cdouble expected =
        sw.amplitudes[m] * std::exp(cdouble(0.0, -k * shift));
    max_err = std::max(max_err, std::abs(sw_shifted.amplitudes[m] - expected));
  }
  CHECK(max_err < 1e-10);
}

TEST_CASE("transform round trip and Parseval on random band-limited states") {
  auto g = make_grid(-20.0, 20.0, 1024);
  std::mt19937 rng(1234);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    WaveFunction wf;
    wf.grid = g;
    wf.amplitudes.resize(g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
      const double x = g.x(j);
      const double envelope = std::exp(-x * x / 16.0);
      wf.amplitudes[j] = envelope * cdouble(gauss(rng), gauss(rng));
    }
    auto sw = to_momentum(wf);
    CHECK(norm_squared(sw) == doctest::Approx(norm_squared(wf)).epsilon(1e-10));
    auto back = to_position(sw);
    double sup = 0.0;
    for (std::size_t j = 0; j < g.n; ++j)
      sup = std::max(sup, std::abs(back.amplitudes[j] - wf.amplitudes[j]));
    CHECK(sup < 1e-12);
  }
}

TEST_CASE("zero state has zero norm") {
  WaveFunction wf;
  wf.grid = make_grid(-1.0, 1.0, 16);
  wf.amplitudes.assign(16, cdouble(0.0, 0.0));
  CHECK(norm(wf) == 0.0);
  CHECK_THROWS_AS(expectation_position(wf), std::domain_error);
}

TEST_CASE("density is pointwise modulus squared") {
  auto wf = gaussian_packet(paper_packet(), default_grid());
  auto d = density(wf);
  double sum = 0.0;
  for (double v : d) {
    CHECK(v >= 0.0);
    sum += v;
  }
  CHECK(sum * wf.grid.dx == doctest::Approx(1.0).epsilon(1e-10));
}
