#include "bbmlab/field.hpp"

#include <algorithm>
#include <cmath>

#include "bbmlab/errors.hpp"
#include "fft.hpp"

namespace bbm {

Field::Field(GridSpec grid) : grid_(grid), samples_(grid.size(), 0.0) {}

Field::Field(GridSpec grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.size()) {
    throw ConfigError("field has " + std::to_string(samples_.size()) + " samples but grid " +
                      grid_.describe() + " has " + std::to_string(grid_.size()) + " nodes");
  }
}

Field Field::constant(const GridSpec& grid, double value) {
  return Field(grid, std::vector<double>(grid.size(), value));
}

Field Field::from_function(const GridSpec& grid,
                           const std::function<double(double, double)>& fn) {
  Field f(grid);
  const std::size_t ny = grid.ny();
  for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
    const double x = grid.coordinate(0, ix);
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const double y = grid.dim == 2 ? grid.coordinate(1, iy) : 0.0;
      f.samples_[ix * ny + iy] = fn(x, y);
    }
  }
  return f;
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_, "field addition");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += other.samples_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_, "field subtraction");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= other.samples_[i];
  return *this;
}

Field& Field::operator*=(double c) {
  for (double& v : samples_) v *= c;
  return *this;
}

Field& Field::axpy(double c, const Field& other) {
  require_same_grid(grid_, other.grid_, "field axpy");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += c * other.samples_[i];
  return *this;
}

double Field::l2_norm() const {
  double sum = 0.0;
  for (double v : samples_) sum += v * v;
  return std::sqrt(sum * grid_.cell_volume());
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

double Field::integral() const {
  double sum = 0.0;
  for (double v : samples_) sum += v;
  return sum * grid_.cell_volume();
}

bool Field::all_finite() const {
  return std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); });
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double c, Field a) { return a *= c; }

Field pointwise_product(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid(), "pointwise product");
  Field out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

double inner_product(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid(), "inner product");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum * a.grid().cell_volume();
}

namespace {

// exp(-i k (-L/2)) = (-1)^index on each axis; the lattice index and the FFT
// slot have the same parity because N is even.
void apply_coordinate_phase(const GridSpec& grid, std::span<Complex> data) {
  const std::size_t ny = grid.ny();
  for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
    for (std::size_t iy = 0; iy < ny; ++iy) {
      if ((ix + iy) % 2 == 1) data[ix * ny + iy] = -data[ix * ny + iy];
    }
  }
}

}  // namespace

Spectrum transform(const Field& f) {
  Spectrum s{f.grid(), std::vector<Complex>(f.size())};
  for (std::size_t i = 0; i < f.size(); ++i) s.coeffs[i] = Complex(f[i], 0.0);
  detail::fft_forward(f.grid(), s.coeffs);
  apply_coordinate_phase(f.grid(), s.coeffs);
  return s;
}

Field inverse_transform(std::span<const Complex> coeffs, const GridSpec& grid) {
  if (coeffs.size() != grid.size()) {
    throw ConfigError("spectrum has " + std::to_string(coeffs.size()) +
                      " coefficients but grid " + grid.describe() + " has " +
                      std::to_string(grid.size()) + " nodes");
  }
  std::vector<Complex> work(coeffs.begin(), coeffs.end());
  apply_coordinate_phase(grid, work);
  detail::fft_backward(grid, work);
  Field out(grid);
  const double inv_n = 1.0 / static_cast<double>(grid.size());
  for (std::size_t i = 0; i < work.size(); ++i) out[i] = work[i].real() * inv_n;
  return out;
}

Field inverse_transform(const Spectrum& spectrum) {
  return inverse_transform(spectrum.coeffs, spectrum.grid);
}

double spectral_l2_norm(const Spectrum& s) {
  double sum = 0.0;
  for (const Complex& c : s.coeffs) sum += std::norm(c);
  const double n = static_cast<double>(s.grid.size());
  return std::sqrt(sum * s.grid.cell_volume() / n);
}

}  // namespace bbm
