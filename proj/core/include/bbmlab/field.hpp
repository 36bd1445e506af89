#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "bbmlab/grid.hpp"

namespace bbm {

using Complex = std::complex<double>;

/// Real scalar field sampled on the nodes of a periodic grid.
class Field {
 public:
  Field() = default;
  explicit Field(GridSpec grid);
  Field(GridSpec grid, std::vector<double> samples);

  static Field zeros(const GridSpec& grid) { return Field(grid); }
  static Field constant(const GridSpec& grid, double value);
  /// Samples fn(x, y) at every node; y is 0 in 1D.
  static Field from_function(const GridSpec& grid, const std::function<double(double, double)>& fn);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const double> samples() const noexcept { return samples_; }
  std::span<double> samples() noexcept { return samples_; }
  std::vector<double>& data() noexcept { return samples_; }
  const std::vector<double>& data() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }

  double operator[](std::size_t i) const noexcept { return samples_[i]; }
  double& operator[](std::size_t i) noexcept { return samples_[i]; }
  double at(std::size_t ix, std::size_t iy = 0) const noexcept {
    return samples_[ix * grid_.ny() + iy];
  }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double c);
  /// this += c * other
  Field& axpy(double c, const Field& other);

  /// Discrete L2 norm, sqrt(sum f^2 * cell volume).
  double l2_norm() const;
  double max_abs() const;
  double integral() const;
  bool all_finite() const;

 private:
  GridSpec grid_;
  std::vector<double> samples_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double c, Field a);
/// Pointwise product without any spectral truncation.
Field pointwise_product(const Field& a, const Field& b);
double inner_product(const Field& a, const Field& b);

/// Discrete Fourier coefficients over the full wavenumber lattice.
///
/// Normalization: the forward transform is the unnormalized sum
/// F[k] = sum_n f(x_n) exp(-i k . x_n) over the physical node coordinates
/// x_n in [-L/2, L/2); the inverse divides by the node count. Using the
/// physical coordinates (rather than the node index) only flips the sign of
/// odd modes, and makes cos(2 pi x / L) transform to +N/2 at index +-1.
struct Spectrum {
  GridSpec grid;
  std::vector<Complex> coeffs;

  std::size_t size() const noexcept { return coeffs.size(); }
  Complex operator[](std::size_t i) const noexcept { return coeffs[i]; }
  Complex& operator[](std::size_t i) noexcept { return coeffs[i]; }
};

Spectrum transform(const Field& f);
/// Inverse transform; the imaginary residue (roundoff for Hermitian input) is discarded.
Field inverse_transform(const Spectrum& spectrum);
/// Same as above but validates that the sample count matches the grid.
Field inverse_transform(std::span<const Complex> coeffs, const GridSpec& grid);

/// Spectral L2 norm consistent with Field::l2_norm through Parseval.
double spectral_l2_norm(const Spectrum& s);

}  // namespace bbm
