#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bbmlab/field.hpp"

namespace bbm {

/// A Fourier multiplier tabulated on the wavenumber lattice of one grid.
struct MultiplierOp {
  std::string label;
  GridSpec grid;
  std::vector<Complex> symbol;

  /// Tabulates fn(kx, ky) over the lattice (ky = 0 in 1D). Throws ConfigError
  /// if any tabulated value is not finite.
  static MultiplierOp tabulate(const GridSpec& grid, std::string label,
                               const std::function<Complex(double, double)>& fn);
};

/// i k_axis, with the Nyquist slot of that axis set to zero.
MultiplierOp derivative_op(const GridSpec& grid, int axis);
/// -|k|^2.
MultiplierOp laplacian_op(const GridSpec& grid);
/// (I - c Laplacian)^{-1}, symbol 1 / (1 + c |k|^2); c = eps * b for the BBM operators.
MultiplierOp inverse_helmholtz_op(const GridSpec& grid, double c);
/// Indicator of the closed ball |k| <= m (Friedrichs cutoff E_m).
MultiplierOp friedrichs_op(const GridSpec& grid, double m);
/// Indicator of the 2/3-rule band: 3 |index| < N on every axis.
MultiplierOp dealias_op(const GridSpec& grid);

bool in_dealias_band(const GridSpec& grid, std::size_t ix, std::size_t iy);

/// Pointwise multiplication in Fourier space. Throws ConfigError on grid mismatch.
Field apply_multiplier(const MultiplierOp& op, const Field& f);
void apply_multiplier(const MultiplierOp& op, Spectrum& s);

/// Alias-free product: both inputs truncated to the 2/3 band, multiplied in
/// physical space, and the result truncated to the same band.
Field dealias_product(const Field& f, const Field& g);
/// Truncation of a field to the 2/3 band.
Field truncate_to_band(const Field& f);

/// E_m f: spectrum zeroed strictly outside |k| <= m. Throws DomainError if m <= 0.
Field friedrichs_project(const Field& f, double m);

/// Spectral partial derivative along `axis` (Nyquist zeroed).
Field derivative(const Field& f, int axis);

/// Squared wavenumber magnitude |k|^2 for every lattice slot.
std::vector<double> wavenumber_squared(const GridSpec& grid);
/// Symbol of |grad|^2 as seen by derivative_op: sum_l k_l^2 with the Nyquist
/// slot of each axis contributing zero.
std::vector<double> gradient_symbol_squared(const GridSpec& grid);

}  // namespace bbm
