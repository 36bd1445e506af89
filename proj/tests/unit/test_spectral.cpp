#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "bbmlab/errors.hpp"
#include "bbmlab/field_io.hpp"
#include "bbmlab/littlewood_paley.hpp"
#include "bbmlab/spectral.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bbm;
using std::numbers::pi;

namespace {

double rel_l2(const Field& a, const Field& b) {
  return (a - b).l2_norm() / std::max(b.l2_norm(), 1e-300);
}

Field mode(const GridSpec& g, int index) {
  return Field::from_function(g, [&](double x, double) {
    return std::cos(2.0 * pi * index * x / g.length[0]);
  });
}

}  // namespace

TEST_CASE("grid validation and lattice layout") {
  CHECK_THROWS_AS(GridSpec::line(1.0, 3).validate(), ConfigError);
  CHECK_THROWS_AS(GridSpec::line(1.0, 2).validate(), ConfigError);
  CHECK_THROWS_AS(GridSpec::line(-1.0, 8).validate(), ConfigError);
  const GridSpec g = GridSpec::line(2.0 * pi, 8);
  CHECK(g.spacing(0) == doctest::Approx(2.0 * pi / 8));
  int nyquist = 0;
  for (std::size_t i = 0; i < g.nx(); ++i) nyquist += g.is_nyquist(0, i) ? 1 : 0;
  CHECK(nyquist == 1);
  CHECK(g.lattice_index(0, 4) == -4);
  CHECK(g.wavenumber(0, 1) == doctest::Approx(1.0));
  CHECK(g.coordinate(0, 0) == doctest::Approx(-pi));
}

TEST_CASE("transform of a constant keeps only the zero mode") {
  const GridSpec g = GridSpec::line(10.0, 16);
  const Spectrum s = transform(Field::constant(g, 2.5));
  CHECK(s[0].real() == doctest::Approx(2.5 * 16));
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(std::abs(s[i]) < 1e-12);
}

TEST_CASE("cos(2 pi x / L) has two conjugate modes of height N/2") {
  const GridSpec g = GridSpec::line(7.0, 32);
  const Spectrum s = transform(mode(g, 1));
  CHECK(s[1].real() == doctest::Approx(16.0));
  CHECK(s[31].real() == doctest::Approx(16.0));
  CHECK(std::abs(s[1].imag()) < 1e-12);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i != 1 && i != 31) CHECK(std::abs(s[i]) < 1e-12);
  }
}

TEST_CASE("transform agrees with a direct DFT and round-trips") {
  for (const GridSpec& g : {GridSpec::line(3.0, 16), GridSpec::plane(3.0, 5.0, 8, 6)}) {
    const Field f = random_field(g, 11);
    const Spectrum s = transform(f);
    const auto ref = oracle::naive_dft(f);
    double err = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      err = std::max(err, std::abs(s[i] - ref[i]));
      scale = std::max(scale, std::abs(ref[i]));
    }
    CHECK(err / scale < 1e-12);
    CHECK(rel_l2(inverse_transform(s), f) < 1e-12);
  }
}

TEST_CASE("real fields have Hermitian spectra") {
  const GridSpec g = GridSpec::plane(4.0, 4.0, 8, 8);
  const Spectrum s = transform(random_field(g, 3));
  for (std::size_t ix = 0; ix < 8; ++ix) {
    for (std::size_t iy = 0; iy < 8; ++iy) {
      const std::size_t jx = (8 - ix) % 8;
      const std::size_t jy = (8 - iy) % 8;
      CHECK(std::abs(s[ix * 8 + iy] - std::conj(s[jx * 8 + jy])) < 1e-12);
    }
  }
}

TEST_CASE("inverse transform rejects a mismatched coefficient count") {
  const GridSpec g = GridSpec::line(1.0, 8);
  std::vector<Complex> c(7);
  CHECK_THROWS_AS(inverse_transform(c, g), ConfigError);
}

TEST_CASE("Parseval holds for random fields") {
  const GridSpec g = GridSpec::line(5.0, 64);
  for (int t = 0; t < 100; ++t) {
    const Field f = random_field(g, 100 + t);
    CHECK(std::abs(spectral_l2_norm(transform(f)) - f.l2_norm()) / f.l2_norm() < 1e-12);
  }
}

TEST_CASE("inverse Helmholtz on cos(x)") {
  const GridSpec g = GridSpec::line(2.0 * pi, 32);
  const Field c = mode(g, 1);
  const Field out = apply_multiplier(inverse_helmholtz_op(g, 0.1), c);
  Field expect = c;
  expect *= 1.0 / 1.1;
  CHECK(oracle::max_abs_diff(out, expect) < 1e-14);
  CHECK(apply_multiplier(laplacian_op(g), Field(g)).max_abs() == 0.0);
}

TEST_CASE("inverse Helmholtz is an L2 contraction") {
  const GridSpec g = GridSpec::line(10.0, 128);
  const MultiplierOp op = inverse_helmholtz_op(g, 0.3);
  for (const Complex& v : op.symbol) {
    CHECK(v.real() > 0.0);
    CHECK(v.real() <= 1.0);
  }
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Field f = random_field(g, 500 + t);
    worst = std::max(worst, apply_multiplier(op, f).l2_norm() / f.l2_norm());
  }
  CHECK(worst <= 1.0 + 1e-12);
}

TEST_CASE("dispersive gradient multiplier is bounded by 1/2") {
  const GridSpec g = GridSpec::line(50.0, 512);
  const double ed = 0.37;
  double m = 0.0;
  for (double k2 : wavenumber_squared(g)) m = std::max(m, std::sqrt(ed * k2) / (1.0 + ed * k2));
  CHECK(m <= 0.5 + 1e-15);
}

TEST_CASE("multipliers commute") {
  const GridSpec g = GridSpec::plane(6.0, 4.0, 32, 16);
  const Field f = random_field(g, 9);
  const MultiplierOp a = inverse_helmholtz_op(g, 0.2);
  const MultiplierOp b = derivative_op(g, 1);
  CHECK(oracle::max_abs_diff(apply_multiplier(a, apply_multiplier(b, f)),
                             apply_multiplier(b, apply_multiplier(a, f))) < 1e-13);
}

TEST_CASE("multiplier on a different grid is a configuration error") {
  const GridSpec g = GridSpec::line(1.0, 8);
  CHECK_THROWS_AS(apply_multiplier(laplacian_op(g), Field(GridSpec::line(1.0, 16))), ConfigError);
  CHECK_THROWS_AS(dealias_product(Field(g), Field(GridSpec::line(2.0, 8))), ConfigError);
}

TEST_CASE("derivative zeroes the Nyquist mode") {
  const GridSpec g = GridSpec::line(2.0 * pi, 8);
  const Field nyq = Field::from_function(g, [](double x, double) { return std::cos(4.0 * x); });
  CHECK(derivative(nyq, 0).max_abs() < 1e-14);
  const Field s = Field::from_function(g, [](double x, double) { return std::sin(2.0 * x); });
  const Field ds = derivative(s, 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(ds[i] == doctest::Approx(2.0 * std::cos(2.0 * g.coordinate(0, i))).epsilon(1e-13));
  }
}

TEST_CASE("dealiased product examples") {
  const GridSpec g = GridSpec::line(2.0 * pi, 16);
  const Field c = mode(g, 1);
  const Field p = dealias_product(c, c);
  const Field expect =
      Field::from_function(g, [](double x, double) { return 0.5 * (1.0 + std::cos(2.0 * x)); });
  CHECK(oracle::max_abs_diff(p, expect) < 1e-14);

  const Field r = random_field(g, 4);
  CHECK(oracle::max_abs_diff(dealias_product(Field::constant(g, 1.0), r), truncate_to_band(r)) < 1e-13);
}

TEST_CASE("dealiased product matches a fine-grid product restricted to the band") {
  const std::size_t n = 24;
  const GridSpec g = GridSpec::line(3.0, n);
  const GridSpec fine = GridSpec::line(3.0, 2 * n);
  const auto band = [&](long k) { return 3 * std::labs(k) < static_cast<long>(n); };

  const auto check_pair = [&](const Field& f, const Field& h) {
    // Trigonometric interpolants of the band-limited inputs evaluated on the fine grid.
    const auto fh = oracle::naive_dft(f);
    const auto hh = oracle::naive_dft(h);
    const auto interp = [&](const std::vector<oracle::cplx>& c, double x) {
      oracle::cplx acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (band(g.lattice_index(0, i))) acc += c[i] * std::polar(1.0, g.wavenumber(0, i) * x);
      }
      return acc.real() / static_cast<double>(n);
    };
    const Field prod = Field::from_function(fine, [&](double x, double) {
      return interp(fh, x) * interp(hh, x);
    });
    const auto ph = oracle::naive_dft(prod);
    std::vector<double> expect(n, 0.0);
    for (std::size_t ix = 0; ix < n; ++ix) {
      oracle::cplx acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const long k = g.lattice_index(0, i);
        if (!band(k)) continue;
        const std::size_t fi = static_cast<std::size_t>((k + static_cast<long>(2 * n)) % static_cast<long>(2 * n));
        acc += ph[fi] * std::polar(1.0, g.wavenumber(0, i) * g.coordinate(0, ix));
      }
      expect[ix] = acc.real() / static_cast<double>(2 * n);
    }
    CHECK(oracle::max_abs_diff(dealias_product(f, h).data(), expect) < 1e-12);
  };

  // A mode just inside the band: its square sits at index 14, outside the
  // band, so only the mean survives; without dealiasing the alias would return.
  const Field m = mode(g, 7);
  check_pair(m, m);
  const Field p = dealias_product(m, m);
  for (double v : p.data()) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
  // Index N/3 itself is outside the band: the product vanishes.
  CHECK(dealias_product(mode(g, 8), mode(g, 8)).max_abs() < 1e-13);
  check_pair(random_field(g, 21), random_field(g, 22));
}

TEST_CASE("Friedrichs projector") {
  const GridSpec g = GridSpec::line(2.0 * pi, 64);
  const Field f = truncate_to_band(random_field(g, 5));
  CHECK(oracle::max_abs_diff(friedrichs_project(f, 100.0), f) < 1e-13);
  CHECK(friedrichs_project(mode(g, 1), 0.5).max_abs() < 1e-15);
  CHECK_THROWS_AS(friedrichs_project(f, 0.0), DomainError);
  for (int t = 0; t < 20; ++t) {
    const Field r = random_field(g, 40 + t);
    const Field once = friedrichs_project(r, 9.5);
    const Field twice = friedrichs_project(once, 9.5);
    const Field again = friedrichs_project(r, 9.5);
    CHECK(oracle::max_abs_diff(once, again) == 0.0);
    CHECK(oracle::max_abs_diff(once, twice) < 1e-14);
    const Field q = random_field(g, 90 + t);
    CHECK(std::abs(inner_product(once, q) - inner_product(r, friedrichs_project(q, 9.5))) < 1e-12);
  }
}

TEST_CASE("field CSV and binary serialization round-trip") {
  for (const GridSpec& g : {GridSpec::line(4.0, 16), GridSpec::plane(4.0, 2.0, 8, 4)}) {
    const Field f = random_field(g, 77);
    std::stringstream csv;
    write_field_csv(f, csv);
    const Field back = read_field_csv(csv);
    CHECK(back.grid() == g);
    CHECK(oracle::max_abs_diff(back, f) == 0.0);

    std::stringstream bin;
    write_field_binary(f, bin);
    const Field back2 = read_field_binary(bin);
    CHECK(back2.grid() == g);
    CHECK(oracle::max_abs_diff(back2, f) == 0.0);
  }
}
