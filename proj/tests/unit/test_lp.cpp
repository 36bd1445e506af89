#include <cmath>
#include <numbers>

#include "bbmlab/errors.hpp"
#include "bbmlab/littlewood_paley.hpp"
#include "bbmlab/spectral.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bbm;
using std::numbers::pi;

namespace {

Field smooth_field(const GridSpec& g, double shift) {
  return Field::from_function(g, [shift](double x, double y) {
    return std::exp(-0.5 * (x - shift) * (x - shift) - 0.3 * y * y) * std::cos(1.3 * x + shift);
  });
}

// H^s norm from the naive DFT: sum (1 + k^2)^s |c_k|^2 scaled by cell / N.
double sobolev_norm(const Field& f, double s) {
  const auto c = oracle::naive_dft(f);
  const GridSpec& g = f.grid();
  const double n = static_cast<double>(g.size());
  const double cell = g.spacing(0) * (g.dim == 2 ? g.spacing(1) : 1.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double k = g.wavenumber(0, i);
    acc += std::pow(1.0 + k * k, s) * std::norm(c[i]);
  }
  return std::sqrt(acc * cell / n);
}

}  // namespace

TEST_CASE("profiles") {
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
  CHECK(chi_profile(0.0) == 1.0);
  CHECK(chi_profile(1.0) == 1.0);
  CHECK(chi_profile(4.0 / 3.0) == 0.0);
  CHECK(phi_profile(2.0) == 1.0);
  CHECK(phi_profile(0.99) == 0.0);
  CHECK(phi_profile(8.0 / 3.0) == 0.0);
  for (double r = 0.0; r < 10.0; r += 0.01) {
    double sum = chi_profile(r);
    for (int j = 0; j < 6; ++j) sum += phi_profile(r / std::ldexp(1.0, j));
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("partition identities on lattices") {
  for (const GridSpec& g : {GridSpec::line(2.0 * pi, 512), GridSpec::line(80.0, 1024),
                            GridSpec::plane(2.0 * pi, 2.0 * pi, 64, 64)}) {
    const DyadicPartition part = build_partition(g);
    const PartitionResiduals r = partition_residuals(part);
    CHECK(r.unity_residual < 1e-14);
    CHECK(r.square_sum_min >= 0.5 - 1e-14);
    CHECK(r.square_sum_max <= 1.0 + 1e-14);
    CHECK(r.disjoint_supports);
  }
  const DyadicPartition p = build_partition(GridSpec::line(2.0 * pi, 512));
  CHECK(p.j_max() == 8);  // 0.75 * 2^8 = 192 <= 256 < 384
  CHECK(p.weights(-2).empty());
  CHECK(p.weights(p.j_max() + 1).empty());
}

TEST_CASE("a |k| = 2 mode lives in block 0 alone") {
  const GridSpec g = GridSpec::line(2.0 * pi, 64);
  const DyadicPartition part = build_partition(g);
  const Field m = Field::from_function(g, [](double x, double) { return std::cos(2.0 * x); });
  for (int j = -1; j <= part.j_max(); ++j) {
    const Field b = dyadic_block(m, j, part);
    if (j == 0) {
      CHECK(oracle::max_abs_diff(b, m) < 1e-14);
    } else {
      CHECK(b.max_abs() < 1e-14);
    }
  }
}

TEST_CASE("blocks reconstruct and are almost orthogonal") {
  const GridSpec g = GridSpec::line(10.0, 256);
  const DyadicPartition part = build_partition(g);
  double worst = 0.0;
  double cross = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Field f = random_field(g, 1000 + t);
    Field sum(g);
    std::vector<Field> blocks;
    for (int j = -1; j <= part.j_max(); ++j) {
      blocks.push_back(dyadic_block(f, j, part));
      sum += blocks.back();
    }
    worst = std::max(worst, (sum - f).l2_norm() / f.l2_norm());
    for (std::size_t a = 0; a < blocks.size(); ++a) {
      for (std::size_t b = a + 2; b < blocks.size(); ++b) {
        cross = std::max(cross, std::abs(inner_product(blocks[a], blocks[b])) / (f.l2_norm() * f.l2_norm()));
      }
    }
  }
  CHECK(worst < 1e-12);
  CHECK(cross < 1e-12);
}

TEST_CASE("degenerate grids are rejected") {
  CHECK_THROWS_AS(build_partition(GridSpec::line(1000.0, 4)), DegenerateGridError);
}

TEST_CASE("Besov norm examples") {
  const double l = 2.0 * pi;
  CHECK_THROWS_AS((BesovSpec{0.0, 3.0, 2.0}.validate()), ConfigError);
  CHECK_THROWS_AS((BesovSpec{0.0, 2.0, 0.5}.validate()), ConfigError);

  const GridSpec g = GridSpec::line(l, 64);
  const DyadicPartition part = build_partition(g);
  // Constant: only block -1, weight 2^{-s}, L2 norm sqrt(2 pi).
  const NormResult c = besov_norm(Field::constant(g, 1.0), BesovSpec{3.0, 2.0, 2.0}, part);
  CHECK(c.value == doctest::Approx(std::sqrt(l) / 8.0).epsilon(1e-13));
  CHECK(c.tail_estimate == 0.0);
  // cos(2x) in block 0: weight 2^{0 s} = 1 for every s.
  const Field m = Field::from_function(g, [](double x, double) { return std::cos(2.0 * x); });
  CHECK(besov_norm(m, BesovSpec{1.5, 2.0, 2.0}, part).value == doctest::Approx(std::sqrt(pi)).epsilon(1e-13));
  CHECK(besov_norm(m, BesovSpec{0.0, kInf, kInf}, part).value == doctest::Approx(1.0).epsilon(1e-13));
  // cos(8x) sits in block 2 (phi(2) = 1 at 2^-2 * 8).
  const Field m8 = Field::from_function(g, [](double x, double) { return std::cos(8.0 * x); });
  CHECK(besov_norm(m8, BesovSpec{1.0, 2.0, 2.0}, part).value == doctest::Approx(4.0 * std::sqrt(pi)).epsilon(1e-13));
  const double seq[] = {3.0, 4.0};
  CHECK(lr_norm(seq, 2.0) == doctest::Approx(5.0));
  CHECK(lr_norm(seq, 1.0) == doctest::Approx(7.0));
  CHECK(lr_norm(seq, kInf) == 4.0);
}

TEST_CASE("B^s_{2,2} is equivalent to H^s with explicit constants") {
  const GridSpec g = GridSpec::line(20.0, 128);
  const DyadicPartition part = build_partition(g);
  for (double s : {-1.0, 0.0, 0.5, 1.0, 2.0}) {
    // Pointwise bracket of the multiplier sum_j 2^{2js} phi_j(k)^2 / (1 + k^2)^s,
    // evaluated from the profiles on the lattice.
    double m_lo = kInf;
    double m_hi = 0.0;
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const double k = std::abs(g.wavenumber(0, i));
      double acc = std::pow(2.0, -2.0 * s) * chi_profile(k) * chi_profile(k);
      for (int j = 0; j <= part.j_max(); ++j) {
        const double p = phi_profile(std::ldexp(k, -j));
        acc += std::pow(2.0, 2.0 * j * s) * p * p;
      }
      const double m = std::sqrt(acc / std::pow(1.0 + k * k, s));
      m_lo = std::min(m_lo, m);
      m_hi = std::max(m_hi, m);
    }
    const double lo = std::pow(2.0, -std::abs(s)) / std::sqrt(2.0);
    const double hi = std::pow(2.0, std::abs(s));
    for (int t = 0; t < 10; ++t) {
      const Field f = t < 5 ? random_field(g, 70 + t) : smooth_field(g, 0.3 * t);
      const double ratio = besov_norm(f, BesovSpec{s, 2.0, 2.0}, part).value / sobolev_norm(f, s);
      CHECK(ratio >= m_lo * (1.0 - 1e-12));
      CHECK(ratio <= m_hi * (1.0 + 1e-12));
      // The dyadic bracket [2^{-|s|}/sqrt 2, 2^{|s|}] is only an upper bound for
      // s >= 0; for negative s the overlap near |k| = 2^{j+1} pushes the
      // multiplier slightly above 2^{|s|}.
      if (s >= 0.0) {
        CHECK(ratio >= lo);
        CHECK(ratio <= hi);
      }
    }
  }
}

TEST_CASE("block energy of cos(2x)") {
  const GridSpec g = GridSpec::line(2.0 * pi, 64);
  const DyadicPartition part = build_partition(g);
  const Field m = Field::from_function(g, [](double x, double) { return std::cos(2.0 * x); });
  const State s{m, {Field(g)}};
  // ||cos 2x||^2 = pi and eps b ||2 sin 2x||^2 = 4 pi eps b; eps b = 1/4 gives 2 pi.
  const EnergyWeights w{0.25, 0.0, 1.0, 0.0};
  CHECK(block_energy(s, 0, w, part) * block_energy(s, 0, w, part) == doctest::Approx(2.0 * pi).epsilon(1e-13));
  CHECK(block_energy(s, 1, w, part) < 1e-12);
  const auto all = block_energies(s, w, part);
  CHECK(all.size() == static_cast<std::size_t>(part.block_count()));
  CHECK(all[1] == doctest::Approx(std::sqrt(2.0 * pi)));
}

TEST_CASE("block energies increase with eps") {
  const GridSpec g = GridSpec::line(10.0, 128);
  const DyadicPartition part = build_partition(g);
  const State s{random_field(g, 8), {random_field(g, 9)}};
  for (int j = -1; j <= part.j_max(); ++j) {
    double prev = 0.0;
    for (double eps : {0.0, 0.01, 0.1, 1.0}) {
      const double u = block_energy(s, j, EnergyWeights{0.3, 0.2, eps, 1.0}, part);
      CHECK(u >= prev);
      prev = u;
    }
  }
}

TEST_CASE("stacked and E-norms") {
  const GridSpec g = GridSpec::line(2.0 * pi, 64);
  const DyadicPartition part = build_partition(g);
  const EnergyWeights w{1.0 / 6, 1.0 / 6, 0.5, 2.0};
  const State c{Field::constant(g, -0.5), {Field::constant(g, 0.25)}};
  CHECK(e_norm(c, w, part, 2.0) == doctest::Approx(0.5).epsilon(1e-14));
  const State z{Field(g), {Field(g)}};
  CHECK(e_norm(z, w, part, 2.0) == 0.0);
  CHECK(stacked_norm(z, w, part, 2.0).value == 0.0);

  // sin x in block -1 (chi(1) = 1), weight 2^{-s} in the stacked norm.
  const Field sn = Field::from_function(g, [](double x, double) { return std::sin(x); });
  const State s{sn, {Field(g)}};
  const double u_minus = std::sqrt(pi * (1.0 + w.eps * w.b));
  CHECK(stacked_norm(s, w, part, 2.0).value == doctest::Approx(0.25 * u_minus).epsilon(1e-13));
  // E-norm: sup |sin| plus the X^{s-1} norm of (cos x, 0), again in block -1.
  CHECK(e_norm(s, w, part, 2.0) == doctest::Approx(1.0 + 0.5 * u_minus).epsilon(1e-12));

  const double blocks[] = {1.0, 2.0, 0.0};
  const NormResult r = stacked_norm_from_blocks(blocks, 1.0, kInf);
  CHECK(r.value == doctest::Approx(2.0));
}

TEST_CASE("Bernstein ratios") {
  const GridSpec g = GridSpec::line(2.0 * pi, 512);
  const DyadicPartition part = build_partition(g);
  const Field m = Field::from_function(g, [](double x, double) { return std::sin(12.0 * x); });
  CHECK(bernstein_ratio(m) == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(std::isnan(bernstein_ratio(Field(g))));
  for (int j = 0; j <= part.j_max(); ++j) {
    const BernsteinReport rep = bernstein_audit(part, j, 50, 17);
    CHECK(rep.pass);
    if (rep.ratios.empty()) continue;
    CHECK(rep.min_ratio >= rep.lower);
    CHECK(rep.max_ratio <= rep.upper);
  }
  // On L = 2 pi, N = 512 the top block only touches the Nyquist slot, so every
  // trial is a 0/0 and is skipped rather than failed.
  const BernsteinReport top = bernstein_audit(part, part.j_max(), 10, 3);
  CHECK(top.skipped == 10);
  CHECK(top.pass);
  const BernsteinReport three = bernstein_audit(part, 3, 200, 5);
  CHECK(three.lower == doctest::Approx(6.0));
  CHECK(three.upper == doctest::Approx(64.0 / 3.0));
  CHECK(three.ratios.size() + static_cast<std::size_t>(three.skipped) == 200);
}

TEST_CASE("commutator residuals") {
  const GridSpec g = GridSpec::line(20.0, 256);
  const DyadicPartition part = build_partition(g);
  const Field v = smooth_field(g, 1.0);
  for (int j = -1; j <= part.j_max(); ++j) {
    CHECK(commutator_residual(Field::constant(g, 2.0), v, j, part) < 1e-12);
  }
  // Direct composition of the library primitives.
  const Field u = smooth_field(g, -2.0);
  for (int j = 0; j < 4; ++j) {
    const Field lhs = dyadic_block(dealias_product(u, derivative(v, 0)), j, part);
    const Field rhs = dealias_product(u, dyadic_block(derivative(v, 0), j, part));
    CHECK(commutator_residual(u, v, j, part) == doctest::Approx((lhs - rhs).l2_norm()).epsilon(1e-12));
  }
}

TEST_CASE("commutator constant is stable under refinement") {
  const auto fit = [](std::size_t n) {
    const GridSpec g = GridSpec::line(20.0, n);
    return commutator_fit(smooth_field(g, -1.0), smooth_field(g, 2.0), 1.5, 2.0, build_partition(g));
  };
  const CommutatorFit a = fit(256);
  const CommutatorFit b = fit(512);
  CHECK(a.constant > 0.0);
  CHECK(std::abs(a.constant - b.constant) / a.constant < 0.2);
}
