#pragma once

// Independent reference computations used by the tests. Nothing here calls the
// library's transforms.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "bbmlab/field.hpp"

namespace oracle {

using cplx = std::complex<double>;

/// Direct O(N^2) evaluation of sum_n f(x_n) exp(-i k x_n) over the physical nodes.
inline std::vector<cplx> naive_dft(const bbm::Field& f) {
  const bbm::GridSpec& g = f.grid();
  const std::size_t nx = g.nx();
  const std::size_t ny = g.ny();
  std::vector<cplx> out(g.size());
  for (std::size_t kx = 0; kx < nx; ++kx) {
    for (std::size_t ky = 0; ky < ny; ++ky) {
      cplx acc = 0.0;
      const double wx = g.wavenumber(0, kx);
      const double wy = g.dim == 2 ? g.wavenumber(1, ky) : 0.0;
      for (std::size_t ix = 0; ix < nx; ++ix) {
        for (std::size_t iy = 0; iy < ny; ++iy) {
          const double x = g.coordinate(0, ix);
          const double y = g.dim == 2 ? g.coordinate(1, iy) : 0.0;
          acc += f.at(ix, iy) * std::polar(1.0, -(wx * x + wy * y));
        }
      }
      out[kx * ny + ky] = acc;
    }
  }
  return out;
}

/// Sixth-order centred finite difference of a periodic 1D sample vector.
inline std::vector<double> fd6(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> out(n);
  const auto at = [&](long i) { return f[static_cast<std::size_t>((i % static_cast<long>(n) + static_cast<long>(n)) % static_cast<long>(n))]; };
  for (long i = 0; i < static_cast<long>(n); ++i) {
    out[static_cast<std::size_t>(i)] =
        (45.0 * (at(i + 1) - at(i - 1)) - 9.0 * (at(i + 2) - at(i - 2)) + (at(i + 3) - at(i - 3))) /
        (60.0 * h);
  }
  return out;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const bbm::Field& a, const bbm::Field& b) {
  return max_abs_diff(a.data(), b.data());
}

}  // namespace oracle
