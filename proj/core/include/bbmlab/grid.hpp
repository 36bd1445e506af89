#pragma once

#include <array>
#include <cstddef>
#include <string>

namespace bbm {

/// Uniform periodic grid on [-L/2, L/2) per axis, in one or two dimensions.
///
/// Nodes are stored row-major with x as the slow axis: flat index = ix * ny + iy
/// (ny = 1 in 1D). The wavenumber lattice uses signed integer indices in
/// [-N/2, N/2); the Nyquist index -N/2 therefore appears exactly once per axis.
struct GridSpec {
  int dim = 1;
  std::array<double, 2> length{1.0, 1.0};
  std::array<std::size_t, 2> points{4, 1};

  static GridSpec line(double length, std::size_t points);
  static GridSpec plane(double length_x, double length_y, std::size_t points_x,
                        std::size_t points_y);

  /// Throws ConfigError unless dim is 1 or 2, lengths are positive and each
  /// axis has an even number of points, at least 4.
  void validate() const;

  std::size_t size() const noexcept { return points[0] * (dim == 2 ? points[1] : 1); }
  std::size_t nx() const noexcept { return points[0]; }
  std::size_t ny() const noexcept { return dim == 2 ? points[1] : 1; }

  double spacing(int axis) const noexcept {
    return length[axis] / static_cast<double>(points[axis]);
  }
  /// Quadrature weight of one node (product of spacings).
  double cell_volume() const noexcept;
  double coordinate(int axis, std::size_t i) const noexcept {
    return -0.5 * length[axis] + static_cast<double>(i) * spacing(axis);
  }

  /// Signed lattice index of the i-th FFT slot on an axis, in [-N/2, N/2).
  long lattice_index(int axis, std::size_t i) const noexcept {
    const long n = static_cast<long>(points[axis]);
    const long k = static_cast<long>(i);
    return k < n / 2 ? k : k - n;
  }
  bool is_nyquist(int axis, std::size_t i) const noexcept {
    return i == points[axis] / 2;
  }
  /// Physical wavenumber 2*pi*index/L of the i-th FFT slot.
  double wavenumber(int axis, std::size_t i) const noexcept;
  double nyquist_wavenumber(int axis) const noexcept;
  /// Largest |k| over the lattice (the Nyquist corner in 2D).
  double max_wavenumber() const noexcept;

  bool same_shape(const GridSpec& other) const noexcept;
  std::string describe() const;

  friend bool operator==(const GridSpec& a, const GridSpec& b) noexcept { return a.same_shape(b); }
};

/// Throws ConfigError when the two grids differ.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* context);

}  // namespace bbm
