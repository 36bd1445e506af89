#include "bbmlab/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bbmlab/errors.hpp"

namespace bbm {

GridSpec GridSpec::line(double length, std::size_t points) {
  GridSpec g;
  g.dim = 1;
  g.length = {length, 1.0};
  g.points = {points, 1};
  g.validate();
  return g;
}

GridSpec GridSpec::plane(double length_x, double length_y, std::size_t points_x,
                         std::size_t points_y) {
  GridSpec g;
  g.dim = 2;
  g.length = {length_x, length_y};
  g.points = {points_x, points_y};
  g.validate();
  return g;
}

void GridSpec::validate() const {
  if (dim != 1 && dim != 2) {
    throw ConfigError("dimension must be 1 or 2, got " + std::to_string(dim), "grid.dim");
  }
  for (int a = 0; a < dim; ++a) {
    const std::string axis = a == 0 ? "x" : "y";
    if (!(length[a] > 0.0) || !std::isfinite(length[a])) {
      throw ConfigError("length along " + axis + " must be positive", "grid.length");
    }
    if (points[a] < 4 || points[a] % 2 != 0) {
      throw ConfigError("points along " + axis + " must be even and >= 4, got " +
                            std::to_string(points[a]),
                        "grid.points");
    }
  }
}

double GridSpec::cell_volume() const noexcept {
  double v = spacing(0);
  if (dim == 2) v *= spacing(1);
  return v;
}

double GridSpec::wavenumber(int axis, std::size_t i) const noexcept {
  return 2.0 * std::numbers::pi * static_cast<double>(lattice_index(axis, i)) / length[axis];
}

double GridSpec::nyquist_wavenumber(int axis) const noexcept {
  return std::numbers::pi * static_cast<double>(points[axis]) / length[axis];
}

double GridSpec::max_wavenumber() const noexcept {
  double k2 = 0.0;
  for (int a = 0; a < dim; ++a) k2 += nyquist_wavenumber(a) * nyquist_wavenumber(a);
  return std::sqrt(k2);
}

bool GridSpec::same_shape(const GridSpec& other) const noexcept {
  if (dim != other.dim) return false;
  for (int a = 0; a < dim; ++a) {
    if (points[a] != other.points[a] || length[a] != other.length[a]) return false;
  }
  return true;
}

std::string GridSpec::describe() const {
  std::ostringstream os;
  os << dim << "D[";
  for (int a = 0; a < dim; ++a) {
    if (a) os << " x ";
    os << points[a] << " pts / L=" << length[a];
  }
  os << "]";
  return os.str();
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* context) {
  if (!a.same_shape(b)) {
    throw ConfigError(std::string(context) + ": grid mismatch " + a.describe() + " vs " +
                      b.describe());
  }
}

}  // namespace bbm
