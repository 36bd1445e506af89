#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "bbmlab/field.hpp"
#include "bbmlab/state.hpp"

namespace bbm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// exp(-1/t) glue: 0 for t <= 0, 1 for t >= 1, C-infinity in between.
double smooth_step(double t);
/// Radial low-pass profile: 1 on [0, 1], 0 on [4/3, inf).
double chi_profile(double r);
/// Annulus profile phi(r) = chi(r/2) - chi(r), supported in [1, 8/3].
double phi_profile(double r);

/// Dyadic partition of unity tabulated on the lattice of one grid.
///
/// Block j = -1 carries chi(|k|); block j >= 0 carries phi(2^-j |k|). The
/// tabulated weights reproduce the continuous profiles exactly, so the
/// telescoping identity chi + sum phi = 1 holds to rounding at every node.
class DyadicPartition {
 public:
  static DyadicPartition build(const GridSpec& grid);

  const GridSpec& grid() const noexcept { return grid_; }
  static constexpr int j_min() noexcept { return -1; }
  /// Largest j with 2^j * 3/4 <= max lattice |k|.
  int j_max() const noexcept { return j_max_; }
  int block_count() const noexcept { return j_max_ + 2; }

  /// Lattice weights of block j; blocks outside [-1, j_max] are identically zero
  /// and yield an empty span.
  std::span<const double> weights(int j) const;
  std::span<const double> radius() const noexcept { return radius_; }

 private:
  GridSpec grid_;
  int j_max_ = -1;
  std::vector<double> radius_;
  std::vector<std::vector<double>> weights_;
};

inline DyadicPartition build_partition(const GridSpec& grid) { return DyadicPartition::build(grid); }

struct PartitionResiduals {
  double unity_residual = 0.0;  // max |chi + sum phi - 1|
  double square_sum_min = 1.0;  // min of chi^2 + sum phi^2
  double square_sum_max = 0.0;  // max of chi^2 + sum phi^2
  bool disjoint_supports = true;  // phi_j * phi_j' == 0 for |j - j'| >= 2
};
PartitionResiduals partition_residuals(const DyadicPartition& part);

/// Delta_j u.
Field dyadic_block(const Field& u, int j, const DyadicPartition& part);
/// Delta_j applied to a precomputed spectrum.
Spectrum dyadic_block(const Spectrum& u, int j, const DyadicPartition& part);

struct BesovSpec {
  double s = 0.0;
  double p = 2.0;  // 2 or kInf
  double r = 2.0;  // >= 1, kInf for the supremum
  void validate() const;
};

struct NormResult {
  double value = 0.0;
  /// Weighted contribution of the j_max block when it exceeds 1e-10 of the
  /// total (a sign of under-resolution); 0 otherwise.
  double tail_estimate = 0.0;
};

/// l^r norm of a nonnegative sequence (r = kInf gives the max).
double lr_norm(std::span<const double> a, double r);

/// ||u||_{B^s_{p,r}} with discrete block norms (grid max for p = inf).
NormResult besov_norm(const Field& u, const BesovSpec& spec, const DyadicPartition& part);
/// Besov norm of a tuple, block norms combined in the Euclidean sense.
NormResult besov_norm(std::span<const Field> components, const BesovSpec& spec,
                      const DyadicPartition& part);

/// Parameters of the eps-weighted energy norms.
struct EnergyWeights {
  double b = 0.0;
  double d = 0.0;
  double eps = 1.0;
  double s = 0.0;

  static double sgn(double x) noexcept { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }
  double s_b() const noexcept { return s + sgn(b); }
  double s_d() const noexcept { return s + sgn(d); }
};

/// U_j of a state: sqrt of int |eta_j|^2 + eps b |grad eta_j|^2 + |V_j|^2 + eps d |grad V_j|^2.
double block_energy(const State& state, int j, const EnergyWeights& w, const DyadicPartition& part);
/// U_j for every j in [-1, j_max], index j + 1.
std::vector<double> block_energies(const State& state, const EnergyWeights& w,
                                   const DyadicPartition& part);
/// X^{s,eps}_{b,d,r} norm U_s = || (2^{js} U_j)_j ||_{l^r}; uses w.s.
NormResult stacked_norm(const State& state, const EnergyWeights& w, const DyadicPartition& part,
                        double r);
/// Same from precomputed block energies.
NormResult stacked_norm_from_blocks(std::span<const double> blocks, double s, double r);

/// E-norm: ||(eta, V)||_inf + (sum_k ||(d_k eta, d_k V)||^2_{X^{s-1,eps}})^{1/2}.
double e_norm(const State& state, const EnergyWeights& w, const DyadicPartition& part, double r);

struct BernsteinReport {
  int j = 0;
  double lower = 0.0;  // 0.75 * 2^j
  double upper = 0.0;  // (8/3) * 2^j
  std::vector<double> ratios;
  int skipped = 0;     // zero blocks (0/0) are not counted
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  bool pass = true;
};
/// ||grad v|| / ||v|| for random fields localized by Delta_j.
BernsteinReport bernstein_audit(const DyadicPartition& part, int j, int trials, std::uint64_t seed);
/// Ratio for one given field localized at block j.
double bernstein_ratio(const Field& v);

/// ||R_j||_{L2}, R_j = Delta_j(u d_axis v) - u Delta_j d_axis v, products dealiased.
double commutator_residual(const Field& u, const Field& v, int j, const DyadicPartition& part,
                           int axis = 0);

struct CommutatorFit {
  double stacked = 0.0;  // || (2^{js} ||R_j||)_j ||_{l^r}
  double bound = 0.0;    // ||grad u||_inf ||grad v||_{B^{s-1}} + ||grad v||_inf ||grad u||_{B^{s-1}}
  double constant = 0.0; // stacked / bound
};
CommutatorFit commutator_fit(const Field& u, const Field& v, double s, double r,
                             const DyadicPartition& part);

/// Random real field with i.i.d. standard normal node values.
Field random_field(const GridSpec& grid, std::uint64_t seed);

}  // namespace bbm
