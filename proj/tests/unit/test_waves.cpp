#include <cmath>
#include <numbers>

#include "bbmlab/linear_waves.hpp"
#include "bbmlab/littlewood_paley.hpp"
#include "bbmlab/spectral.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bbm;

namespace {

const GridSpec kGrid = GridSpec::line(40.0, 256);

Field low(const Field& f) { return dyadic_block(f, -1, build_partition(f.grid())); }

Field bump(double c) {
  return low(Field::from_function(kGrid, [c](double x, double) { return std::exp(-(x - c) * (x - c)); }));
}

// Band-limited translate f(x - a) by direct evaluation of the trigonometric
// interpolant from a naive DFT.
Field shifted(const Field& f, double a) {
  const auto c = oracle::naive_dft(f);
  const GridSpec& g = f.grid();
  return Field::from_function(g, [&](double x, double) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < g.nx(); ++i) {
      if (g.is_nyquist(0, i)) continue;
      acc += c[i] * std::polar(1.0, g.wavenumber(0, i) * (x - a));
    }
    return acc.real() / static_cast<double>(g.nx());
  });
}

}  // namespace

TEST_CASE("background at t = 0 is the initial data") {
  const Field e = bump(0.0);
  const Field u = bump(3.0);
  const WaveBackground bg(e, u);
  const auto [eta, vel] = bg.evaluate(0.0);
  CHECK(oracle::max_abs_diff(eta, e) == 0.0);
  CHECK(oracle::max_abs_diff(vel, u) == 0.0);
}

TEST_CASE("equal eta and u give a right-moving wave") {
  const Field f = bump(0.0);
  const WaveBackground bg(f, f);
  const double t = 3.3;
  const auto [eta, u] = dalembert_evolve(bg, t);
  const Field expect = shifted(f, t);
  CHECK(oracle::max_abs_diff(eta, expect) < 1e-12);
  CHECK(oracle::max_abs_diff(u, expect) < 1e-12);
}

TEST_CASE("closed form 2 eta_L = eta(x-t) + eta(x+t) + u(x-t) - u(x+t)") {
  const Field e = bump(-2.0);
  const Field u = low(Field::from_function(kGrid, [](double x, double) { return 0.4 * std::sin(x) * std::exp(-0.1 * x * x); }));
  const double t = 1.7;
  const auto [eta_l, u_l] = WaveBackground(e, u).evaluate(t);
  Field expect_eta = shifted(e, t) + shifted(e, -t) + shifted(u, t) - shifted(u, -t);
  expect_eta *= 0.5;
  Field expect_u = shifted(e, t) - shifted(e, -t) + shifted(u, t) + shifted(u, -t);
  expect_u *= 0.5;
  CHECK(oracle::max_abs_diff(eta_l, expect_eta) < 1e-12);
  CHECK(oracle::max_abs_diff(u_l, expect_u) < 1e-12);
}

TEST_CASE("background satisfies the acoustic system") {
  const WaveBackground bg(bump(1.0), bump(-4.0));
  const double t = 2.0;
  const double h = 1e-4;
  const auto [ep, up] = bg.evaluate(t + h);
  const auto [em, um] = bg.evaluate(t - h);
  const auto [e0, u0] = bg.evaluate(t);
  Field dt_eta = ep - em;
  dt_eta *= 1.0 / (2.0 * h);
  Field dt_u = up - um;
  dt_u *= 1.0 / (2.0 * h);
  CHECK((dt_eta + derivative(u0, 0)).max_abs() < 1e-7);
  CHECK((dt_u + derivative(e0, 0)).max_abs() < 1e-7);
}

TEST_CASE("energy and block norms are constant in time") {
  const WaveBackground bg(bump(0.0), bump(5.0));
  const DyadicPartition part = build_partition(kGrid);
  const auto energy = [&](double t) {
    const auto [e, u] = bg.evaluate(t);
    return inner_product(e, e) + inner_product(u, u);
  };
  const auto deriv_norm = [&](double t) {
    const auto [e, u] = bg.evaluate(t);
    const std::vector<Field> d{derivative(e, 0), derivative(u, 0)};
    return besov_norm(d, BesovSpec{0.0, 2.0, kInf}, part).value;
  };
  const double e0 = energy(0.0);
  const double n0 = deriv_norm(0.0);
  for (double t = 0.0; t <= 50.0; t += 5.0) {
    CHECK(std::abs(energy(t) - e0) / e0 < 1e-12);
    CHECK(std::abs(deriv_norm(t) - n0) < 1e-10);
  }
}

TEST_CASE("semigroup property") {
  const WaveBackground bg(bump(0.0), bump(2.0));
  const auto [e1, u1] = bg.evaluate(1.3);
  const auto [e2, u2] = WaveBackground(e1, u1).evaluate(2.1);
  const auto [e3, u3] = bg.evaluate(3.4);
  CHECK(oracle::max_abs_diff(e2, e3) < 1e-12);
  CHECK(oracle::max_abs_diff(u2, u3) < 1e-12);
}

TEST_CASE("forcing terms") {
  const double b = 0.2;
  const double d = 0.3;
  const auto [f0, g0] = forcing_terms(Field(kGrid), Field(kGrid), b, d);
  CHECK(f0.max_abs() == 0.0);
  CHECK(g0.max_abs() == 0.0);
  const auto [fc, gc] = forcing_terms(Field::constant(kGrid, 0.8), Field(kGrid), b, d);
  CHECK(fc.max_abs() < 1e-14);
  CHECK(gc.max_abs() < 1e-14);

  // Single mode background against a sixth-order finite-difference oracle.
  const double k = 2.0 * std::numbers::pi / 40.0;
  const Field e = Field::from_function(kGrid, [k](double x, double) { return 0.3 * std::cos(k * x); });
  const Field u = Field::from_function(kGrid, [k](double x, double) { return 0.2 * std::sin(k * x) + 0.1; });
  const auto [f, g] = forcing_terms(e, u, b, d);
  const double h = kGrid.spacing(0);
  const auto dx = [h](const std::vector<double>& v) { return oracle::fd6(v, h); };
  std::vector<double> eu(e.size());
  std::vector<double> udu(e.size());
  const auto du = dx(u.data());
  for (std::size_t i = 0; i < e.size(); ++i) {
    eu[i] = e[i] * u[i];
    udu[i] = u[i] * du[i];
  }
  const auto d_eu = dx(eu);
  const auto d3u = dx(dx(du));
  const auto d3e = dx(dx(dx(e.data())));
  std::vector<double> f_ref(e.size());
  std::vector<double> g_ref(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    f_ref[i] = -d_eu[i] - b * d3u[i];
    g_ref[i] = -udu[i] - d * d3e[i];
  }
  CHECK(oracle::max_abs_diff(f.data(), f_ref) < 1e-8);
  CHECK(oracle::max_abs_diff(g.data(), g_ref) < 1e-8);
}
