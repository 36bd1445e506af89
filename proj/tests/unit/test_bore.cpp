#include <cmath>

#include "bbmlab/bore_data.hpp"
#include "bbmlab/errors.hpp"
#include "bbmlab/spectral.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bbm;

namespace {

BoreProfile tanh_bore(double lo, double hi, double center = 0.0) {
  BoreProfile p;
  p.kind = BoreKind::tanh;
  p.left_limit = lo;
  p.right_limit = hi;
  p.center = center;
  return p;
}

}  // namespace

TEST_CASE("bore kinds parse") {
  CHECK(parse_bore_kind("tanh") == BoreKind::tanh);
  CHECK(parse_bore_kind("smoothed-step") == BoreKind::smoothed_step);
  CHECK(parse_bore_kind("custom-samples") == BoreKind::custom_samples);
  CHECK_THROWS_AS(parse_bore_kind("sech"), ConfigError);
}

TEST_CASE("equal limits give a constant field and no buffer") {
  const GridSpec g = GridSpec::line(80.0, 512);
  const BoreField b = make_bore(tanh_bore(0.3, 0.3), g);
  CHECK_FALSE(b.buffer.active);
  for (double v : b.field.data()) CHECK(v == doctest::Approx(0.3));
}

TEST_CASE("tanh bore values and exact interior") {
  const GridSpec g = GridSpec::line(80.0, 4096);
  const BoreField b = make_bore(tanh_bore(-1.0, 1.0), g);
  REQUIRE(b.buffer.active);
  CHECK(b.buffer.interior_half_width == doctest::Approx(32.0));
  const double h = g.spacing(0);
  const std::size_t i0 = 2048;  // x = 0
  const std::size_t ip = i0 + static_cast<std::size_t>(std::lround(10.0 / h));
  const std::size_t im = i0 - static_cast<std::size_t>(std::lround(10.0 / h));
  CHECK(std::abs(b.field[i0]) < 1e-15);
  CHECK(std::abs(b.field[ip] - 1.0) < 1e-8);
  CHECK(std::abs(b.field[im] + 1.0) < 1e-8);

  double interior = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(0, i);
    const double dev = std::abs(b.field[i] - std::tanh(x));
    if (!b.buffer.contains(x)) interior = std::max(interior, dev);
  }
  CHECK(interior < 1e-10);
  // The compensated field is smooth and periodic: its spectrum decays.
  const Spectrum s = transform(b.field);
  double tail = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::abs(g.lattice_index(0, i)) > 1024) tail = std::max(tail, std::abs(s[i]));
  }
  CHECK(tail / std::abs(s[1]) < 1e-10);
}

TEST_CASE("profile derivative vanishes at the grid edge") {
  const GridSpec g = GridSpec::line(80.0, 1024);
  BoreProfile p = tanh_bore(-0.5, 0.5);
  const double edge = 0.5 * (1.0 - std::tanh(p.steepness * 40.0) * std::tanh(p.steepness * 40.0));
  CHECK(edge < 1e-8 * 0.5);
  p.kind = BoreKind::smoothed_step;
  const BoreField b = make_bore(p, g);
  CHECK(b.buffer.active);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(0, i);
    if (!b.buffer.contains(x)) CHECK(b.field[i] == doctest::Approx(p.evaluate(x)));
  }
}

TEST_CASE("domain too small") {
  CHECK_THROWS_AS(make_bore(tanh_bore(-1.0, 1.0), GridSpec::line(15.0, 256)), DomainTooSmallError);
  CHECK_THROWS_AS(make_bore(tanh_bore(-1.0, 1.0, 25.0), GridSpec::line(80.0, 1024)), DomainTooSmallError);
}

TEST_CASE("custom samples") {
  const GridSpec g = GridSpec::line(80.0, 512);
  BoreProfile p = tanh_bore(-0.5, 0.5);
  const BoreField ref = make_bore(p, g);
  p.kind = BoreKind::custom_samples;
  for (std::size_t i = 0; i < g.size(); ++i) p.samples.push_back(0.5 * std::tanh(g.coordinate(0, i)));
  const BoreField custom = make_bore(p, g);
  CHECK(oracle::max_abs_diff(custom.field, ref.field) < 1e-15);
  p.samples.pop_back();
  CHECK_THROWS_AS(make_bore(p, g), ConfigError);
}

TEST_CASE("E-norm of the bore is translation invariant") {
  const GridSpec g = GridSpec::line(80.0, 2048);
  const DyadicPartition part = build_partition(g);
  const EnergyWeights w{1.0 / 6, 1.0 / 6, 1.0, 2.0};
  const auto norm = [&](double c) {
    const BoreField b = make_bore(tanh_bore(-0.5, 0.5, c), g);
    // Only the interior profile is compared; the buffer is shared by both.
    const State s{b.field, {Field(g)}};
    return e_norm(s, w, part, 2.0);
  };
  // Shifts by whole grid cells keep the sampled profile identical up to the buffer.
  const double h = g.spacing(0);
  CHECK(std::abs(norm(0.0) - norm(8.0 * h)) / norm(0.0) < 1e-3);
}

TEST_CASE("E-norm of the bore converges under refinement") {
  const EnergyWeights w{1.0 / 6, 1.0 / 6, 1.0, 2.0};
  const auto norm = [&](std::size_t n) {
    const GridSpec g = GridSpec::line(80.0, n);
    const BoreField b = make_bore(tanh_bore(-1.0, 1.0), g);
    return e_norm(State{b.field, {Field(g)}}, w, build_partition(g), 2.0);
  };
  const double a = norm(4096);
  const double b = norm(8192);
  CHECK(std::isfinite(a));
  CHECK(std::abs(a - b) / a < 5e-3);
}

TEST_CASE("low/high split") {
  const GridSpec g = GridSpec::line(2.0 * 3.141592653589793, 64);
  const DyadicPartition part = build_partition(g);
  const SplitData c = low_high_split(State{Field::constant(g, 2.0), {Field::constant(g, -1.0)}}, part);
  CHECK(c.high.max_abs() < 1e-14);

  const Field m = Field::from_function(g, [](double x, double) { return std::cos(4.0 * x); });
  const SplitData s = low_high_split(State{m, {m}}, part);
  CHECK(s.low.max_abs() < 1e-14);
  CHECK(oracle::max_abs_diff(s.high.eta, m) < 1e-14);

  const State r{random_field(g, 1), {random_field(g, 2)}};
  const SplitData rs = low_high_split(r, part);
  CHECK(((rs.low + rs.high) - r).l2_norm() / r.l2_norm() < 1e-12);
}

TEST_CASE("high part of the tanh bore is grid converged") {
  const auto high_norm = [](std::size_t n) {
    const GridSpec g = GridSpec::line(80.0, n);
    const BoreField b = make_bore(tanh_bore(-0.5, 0.5), g);
    const State s{b.field, {Field(g)}};
    return low_high_split(s, build_partition(g)).high.l2_norm();
  };
  const double a = high_norm(2048);
  const double b = high_norm(4096);
  CHECK(std::abs(a - b) / a < 1e-3);

  const GridSpec g = GridSpec::line(80.0, 2048);
  const DyadicPartition part = build_partition(g);
  const State s{make_bore(tanh_bore(-0.5, 0.5), g).field, {Field(g)}};
  const double c2 = split_constant(low_high_split(s, part), s, EnergyWeights{1.0 / 6, 1.0 / 6, 0.1, 2.0}, part, 2.0);
  CHECK(std::isfinite(c2));
  CHECK(c2 > 0.0);
}

TEST_CASE("compose 2D data") {
  const GridSpec line = GridSpec::line(40.0, 256);
  const GridSpec plane = GridSpec::plane(40.0, 40.0, 256, 256);
  const BoreField bore = make_bore(tanh_bore(-0.5, 0.5), line);
  const Field zero2(plane);
  const ComposedState flat = compose_2d(bore.field, Field(line), zero2, {zero2, zero2});
  const std::size_t ny = plane.ny();
  double dev = 0.0;
  for (std::size_t ix = 0; ix < plane.nx(); ++ix) {
    for (std::size_t iy = 1; iy < ny; ++iy) dev = std::max(dev, std::abs(flat.total.eta.at(ix, iy) - flat.total.eta.at(ix, 0)));
    CHECK(flat.total.eta.at(ix, 0) == bore.field[ix]);
  }
  CHECK(dev == 0.0);

  const Field phi = gaussian_bump(plane, 0.1, 1.0);
  const ComposedState pure = compose_2d(Field(line), Field(line), phi, {zero2, zero2});
  CHECK(oracle::max_abs_diff(pure.total.eta, phi) == 0.0);

  const ComposedState both = compose_2d(bore.field, Field(line), phi, {zero2, zero2});
  const EnergyWeights w{1.0 / 6, 1.0 / 6, 0.1, 2.0};
  const double m = both.m_norm(w, 2.0);
  const double e1 = e_norm(State{bore.field, {Field(line)}}, w, build_partition(line), 2.0);
  const double x2 = stacked_norm(State{phi, {zero2, zero2}}, w, build_partition(plane), 2.0).value;
  CHECK(m == doctest::Approx(e1 + x2).epsilon(1e-14));

  CHECK_THROWS_AS(compose_2d(Field(GridSpec::line(40.0, 128)), Field(GridSpec::line(40.0, 128)), phi, {zero2, zero2}), ConfigError);
}
