#include "bbmlab/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bbmlab/errors.hpp"
#include "bbmlab/spectral.hpp"

namespace bbm {

namespace {

double glue(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// Parseval: ||f||^2 = cell / N * sum |F_k|^2 for the unnormalized forward sum.
double parseval_scale(const GridSpec& g) {
  return g.cell_volume() / static_cast<double>(g.size());
}

double block_l2_sq(const Spectrum& s, std::span<const double> w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) acc += w[i] * w[i] * std::norm(s.coeffs[i]);
  return acc * parseval_scale(s.grid);
}

double block_max(const Spectrum& s, std::span<const double> w) {
  Spectrum b = s;
  for (std::size_t i = 0; i < b.size(); ++i) b.coeffs[i] *= w[i];
  return inverse_transform(b).max_abs();
}

NormResult finish_norm(std::vector<double> weighted, double r) {
  NormResult out;
  out.value = lr_norm(weighted, r);
  if (!weighted.empty() && out.value > 0.0 && weighted.back() > 1e-10 * out.value) {
    out.tail_estimate = weighted.back();
  }
  return out;
}

}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = glue(t);
  return a / (a + glue(1.0 - t));
}

double chi_profile(double r) { return smooth_step(3.0 * (4.0 / 3.0 - r)); }

double phi_profile(double r) { return chi_profile(0.5 * r) - chi_profile(r); }

DyadicPartition DyadicPartition::build(const GridSpec& grid) {
  grid.validate();
  const double kmax = grid.max_wavenumber();
  if (kmax < 0.75) {
    throw DegenerateGridError("grid " + grid.describe() +
                              " cannot host any dyadic annulus (max |k| < 3/4)");
  }
  DyadicPartition part;
  part.grid_ = grid;
  part.j_max_ = static_cast<int>(std::floor(std::log2(kmax / 0.75)));
  while (std::ldexp(0.75, part.j_max_ + 1) <= kmax) ++part.j_max_;
  while (std::ldexp(0.75, part.j_max_) > kmax) --part.j_max_;

  const std::vector<double> k2 = wavenumber_squared(grid);
  part.radius_.resize(k2.size());
  std::transform(k2.begin(), k2.end(), part.radius_.begin(), [](double v) { return std::sqrt(v); });

  part.weights_.assign(static_cast<std::size_t>(part.block_count()),
                       std::vector<double>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = part.radius_[i];
    part.weights_[0][i] = chi_profile(r);
    for (int j = 0; j <= part.j_max_; ++j) {
      part.weights_[static_cast<std::size_t>(j + 1)][i] = phi_profile(std::ldexp(r, -j));
    }
  }
  return part;
}

std::span<const double> DyadicPartition::weights(int j) const {
  if (j < -1 || j > j_max_) return {};
  return weights_[static_cast<std::size_t>(j + 1)];
}

PartitionResiduals partition_residuals(const DyadicPartition& part) {
  PartitionResiduals res;
  res.square_sum_min = kInf;
  const std::size_t n = part.grid().size();
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    double sq = 0.0;
    for (int j = -1; j <= part.j_max(); ++j) {
      const double w = part.weights(j)[i];
      sum += w;
      sq += w * w;
      for (int jj = j + 2; jj <= part.j_max(); ++jj) {
        if (j >= 0 && w * part.weights(jj)[i] != 0.0) res.disjoint_supports = false;
      }
    }
    res.unity_residual = std::max(res.unity_residual, std::abs(sum - 1.0));
    res.square_sum_min = std::min(res.square_sum_min, sq);
    res.square_sum_max = std::max(res.square_sum_max, sq);
  }
  return res;
}

Spectrum dyadic_block(const Spectrum& u, int j, const DyadicPartition& part) {
  require_same_grid(u.grid, part.grid(), "dyadic_block");
  Spectrum out{u.grid, std::vector<Complex>(u.size())};
  const auto w = part.weights(j);
  if (w.empty()) return out;
  for (std::size_t i = 0; i < u.size(); ++i) out.coeffs[i] = u.coeffs[i] * w[i];
  return out;
}

Field dyadic_block(const Field& u, int j, const DyadicPartition& part) {
  require_same_grid(u.grid(), part.grid(), "dyadic_block");
  if (part.weights(j).empty()) return Field(u.grid());
  return inverse_transform(dyadic_block(transform(u), j, part));
}

void BesovSpec::validate() const {
  if (!(p == 2.0 || p == kInf)) throw ConfigError("Besov integrability p must be 2 or inf");
  if (!(r >= 1.0)) throw ConfigError("Besov summation r must be >= 1");
  if (!std::isfinite(s)) throw ConfigError("Besov regularity s must be finite");
}

double lr_norm(std::span<const double> a, double r) {
  if (r == kInf) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  for (double v : a) acc += std::pow(std::abs(v), r);
  return std::pow(acc, 1.0 / r);
}

NormResult besov_norm(std::span<const Field> components, const BesovSpec& spec,
                      const DyadicPartition& part) {
  spec.validate();
  std::vector<Spectrum> spectra;
  spectra.reserve(components.size());
  for (const Field& c : components) {
    require_same_grid(c.grid(), part.grid(), "besov_norm");
    spectra.push_back(transform(c));
  }
  std::vector<double> weighted;
  for (int j = -1; j <= part.j_max(); ++j) {
    const auto w = part.weights(j);
    double block = 0.0;
    for (const Spectrum& s : spectra) {
      if (spec.p == 2.0) {
        block += block_l2_sq(s, w);
      } else {
        const double m = block_max(s, w);
        block += m * m;
      }
    }
    weighted.push_back(std::exp2(j * spec.s) * std::sqrt(block));
  }
  return finish_norm(std::move(weighted), spec.r);
}

NormResult besov_norm(const Field& u, const BesovSpec& spec, const DyadicPartition& part) {
  return besov_norm(std::span<const Field>(&u, 1), spec, part);
}

std::vector<double> block_energies(const State& state, const EnergyWeights& w,
                                   const DyadicPartition& part) {
  validate_state(state, "block_energies");
  require_same_grid(state.grid(), part.grid(), "block_energies");
  const GridSpec& g = state.grid();
  const std::vector<double> grad2 = gradient_symbol_squared(g);

  // Per-node spectral density of the energy integrand, shared by all blocks.
  std::vector<double> density(g.size(), 0.0);
  const Spectrum eta = transform(state.eta);
  for (std::size_t i = 0; i < g.size(); ++i) {
    density[i] += std::norm(eta.coeffs[i]) * (1.0 + w.eps * w.b * grad2[i]);
  }
  for (const Field& v : state.velocity) {
    const Spectrum vs = transform(v);
    for (std::size_t i = 0; i < g.size(); ++i) {
      density[i] += std::norm(vs.coeffs[i]) * (1.0 + w.eps * w.d * grad2[i]);
    }
  }
  const double scale = parseval_scale(g);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(part.block_count()));
  for (int j = -1; j <= part.j_max(); ++j) {
    const auto wj = part.weights(j);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) acc += wj[i] * wj[i] * density[i];
    out.push_back(std::sqrt(acc * scale));
  }
  return out;
}

double block_energy(const State& state, int j, const EnergyWeights& w, const DyadicPartition& part) {
  if (j < -1 || j > part.j_max()) return 0.0;
  return block_energies(state, w, part)[static_cast<std::size_t>(j + 1)];
}

NormResult stacked_norm_from_blocks(std::span<const double> blocks, double s, double r) {
  if (!(r >= 1.0)) throw ConfigError("summation exponent r must be >= 1");
  std::vector<double> weighted(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    weighted[i] = std::exp2((static_cast<int>(i) - 1) * s) * blocks[i];
  }
  return finish_norm(std::move(weighted), r);
}

NormResult stacked_norm(const State& state, const EnergyWeights& w, const DyadicPartition& part,
                        double r) {
  return stacked_norm_from_blocks(block_energies(state, w, part), w.s, r);
}

double e_norm(const State& state, const EnergyWeights& w, const DyadicPartition& part, double r) {
  validate_state(state, "e_norm");
  EnergyWeights lower = w;
  lower.s = w.s - 1.0;
  double deriv_sq = 0.0;
  for (int k = 0; k < state.dim(); ++k) {
    State dk{derivative(state.eta, k), {}};
    for (const Field& v : state.velocity) dk.velocity.push_back(derivative(v, k));
    const double n = stacked_norm(dk, lower, part, r).value;
    deriv_sq += n * n;
  }
  return state.max_abs() + std::sqrt(deriv_sq);
}

double bernstein_ratio(const Field& v) {
  const double base = v.l2_norm();
  if (base == 0.0) return std::nan("");
  double grad_sq = 0.0;
  for (int k = 0; k < v.grid().dim; ++k) {
    const double n = derivative(v, k).l2_norm();
    grad_sq += n * n;
  }
  return std::sqrt(grad_sq) / base;
}

BernsteinReport bernstein_audit(const DyadicPartition& part, int j, int trials, std::uint64_t seed) {
  if (j < 0 || j > part.j_max()) {
    throw ConfigError("Bernstein audit block " + std::to_string(j) + " outside [0, " +
                      std::to_string(part.j_max()) + "]");
  }
  BernsteinReport rep;
  rep.j = j;
  rep.lower = std::ldexp(0.75, j);
  rep.upper = std::ldexp(8.0 / 3.0, j);
  rep.min_ratio = kInf;
  rep.max_ratio = 0.0;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const Field v = dyadic_block(random_field(part.grid(), rng()), j, part);
    const double ratio = bernstein_ratio(v);
    if (std::isnan(ratio)) {
      ++rep.skipped;
      continue;
    }
    rep.ratios.push_back(ratio);
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    const double slack = 1e-12 * rep.upper;
    if (ratio < rep.lower - slack || ratio > rep.upper + slack) rep.pass = false;
  }
  if (rep.ratios.empty()) rep.min_ratio = 0.0;
  return rep;
}

namespace {

Field commutator_field(const Field& u, const Field& v, int j, const DyadicPartition& part,
                       int axis) {
  const Field dv = derivative(v, axis);
  Field r = dyadic_block(dealias_product(u, dv), j, part);
  r -= dealias_product(u, dyadic_block(dv, j, part));
  return r;
}

}  // namespace

double commutator_residual(const Field& u, const Field& v, int j, const DyadicPartition& part,
                           int axis) {
  require_same_grid(u.grid(), v.grid(), "commutator_residual");
  require_same_grid(u.grid(), part.grid(), "commutator_residual");
  if (part.weights(j).empty()) return 0.0;
  return commutator_field(u, v, j, part, axis).l2_norm();
}

CommutatorFit commutator_fit(const Field& u, const Field& v, double s, double r,
                             const DyadicPartition& part) {
  const int dim = u.grid().dim;
  std::vector<double> weighted;
  for (int j = -1; j <= part.j_max(); ++j) {
    double sq = 0.0;
    for (int k = 0; k < dim; ++k) {
      const double n = commutator_residual(u, v, j, part, k);
      sq += n * n;
    }
    weighted.push_back(std::exp2(j * s) * std::sqrt(sq));
  }
  std::vector<Field> grad_u;
  std::vector<Field> grad_v;
  double gu_inf = 0.0;
  double gv_inf = 0.0;
  for (int k = 0; k < dim; ++k) {
    grad_u.push_back(derivative(u, k));
    grad_v.push_back(derivative(v, k));
    gu_inf = std::max(gu_inf, grad_u.back().max_abs());
    gv_inf = std::max(gv_inf, grad_v.back().max_abs());
  }
  const BesovSpec lower{s - 1.0, 2.0, r};
  CommutatorFit fit;
  fit.stacked = lr_norm(weighted, r);
  fit.bound = gu_inf * besov_norm(grad_v, lower, part).value +
              gv_inf * besov_norm(grad_u, lower, part).value;
  fit.constant = fit.bound > 0.0 ? fit.stacked / fit.bound : 0.0;
  return fit;
}

Field random_field(const GridSpec& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Field f(grid);
  for (double& x : f.data()) x = normal(rng);
  return f;
}

}  // namespace bbm
