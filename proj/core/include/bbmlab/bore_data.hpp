#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bbmlab/field.hpp"
#include "bbmlab/littlewood_paley.hpp"
#include "bbmlab/state.hpp"

namespace bbm {

enum class BoreKind { tanh, smoothed_step, custom_samples };

BoreKind parse_bore_kind(const std::string& name);
std::string to_string(BoreKind kind);

/// A bounded profile with distinct limits at -inf and +inf.
///
/// tanh:          mid + amp tanh(k (x - c)), mid and amp chosen to hit both limits
/// smoothed_step: eta_minus + (eta_plus - eta_minus) S((k (x - c) + 1) / 2), a compact
///                C-infinity transition of width 2/k
/// custom_samples: node values supplied by the caller on the target grid's x axis.
struct BoreProfile {
  BoreKind kind = BoreKind::tanh;
  double left_limit = 0.0;
  double right_limit = 0.0;
  double steepness = 1.0;
  double center = 0.0;
  std::vector<double> samples;  // custom_samples only, one value per x node

  /// Value of the analytic profile at x (tanh and smoothed_step only).
  double evaluate(double x) const;
  double jump() const noexcept { return right_limit - left_limit; }
  void validate() const;
};

/// Nodes with |x| >= interior_half_width on the x axis form the periodization
/// buffer. An inactive zone has no nodes.
struct BufferZone {
  bool active = false;
  double interior_half_width = 0.0;
  double length = 0.0;

  bool contains(double x) const noexcept { return active && std::abs(x) >= interior_half_width; }
  /// Node mask over a 1D or 2D grid (buffer along x).
  std::vector<unsigned char> mask(const GridSpec& grid) const;
};

/// Fraction of the domain length reserved for the periodization buffer.
inline constexpr double kBufferFraction = 0.2;

struct BoreField {
  Field field;
  BufferZone buffer;
};

/// Samples the profile on a 1D grid and adds a smooth anti-transition inside
/// the boundary buffer so the result is periodic. Interior nodes equal the
/// profile exactly. Throws DomainTooSmallError when steepness * L < 20 or the
/// transition reaches the buffer.
BoreField make_bore(const BoreProfile& profile, const GridSpec& grid);

/// Localized Gaussian bump A exp(-|x - c|^2 / w^2) (c on the x axis).
Field gaussian_bump(const GridSpec& grid, double amplitude, double width, double center = 0.0);

struct SplitData {
  State low;
  State high;
};

/// low = Delta_{-1} state, high = state - low.
SplitData low_high_split(const State& state, const DyadicPartition& part);

/// ||high||_X / ||(d_x eta0, d_x u0)||_{X^{s-1}}: the constant in the
/// high-frequency bound, reported rather than asserted.
double split_constant(const SplitData& split, const State& state, const EnergyWeights& w,
                      const DyadicPartition& part, double r);

/// y-independent extension of a 1D field along the x axis of a 2D grid.
Field extend_along_y(const Field& line, const GridSpec& plane);

/// 2D data eta = eta1d(x) + phi(x, y), V = (u1d(x), 0) + psi(x, y), kept in
/// its two parts so the M-norm can be evaluated.
struct ComposedState {
  State line;          // 1D background data on the x axis
  State perturbation;  // 2D localized part
  State total;         // on the 2D grid

  /// ||line||_E + ||perturbation||_X.
  double m_norm(const EnergyWeights& w, double r) const;
};

ComposedState compose_2d(const Field& eta1d, const Field& u1d, const Field& phi,
                         const std::vector<Field>& psi);

}  // namespace bbm
