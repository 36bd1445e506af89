#include "bbmlab/spectral.hpp"

#include <cmath>

#include "bbmlab/errors.hpp"

namespace bbm {

MultiplierOp MultiplierOp::tabulate(const GridSpec& grid, std::string label,
                                    const std::function<Complex(double, double)>& fn) {
  MultiplierOp op{std::move(label), grid, std::vector<Complex>(grid.size())};
  const std::size_t ny = grid.ny();
  for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
    const double kx = grid.wavenumber(0, ix);
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const double ky = grid.dim == 2 ? grid.wavenumber(1, iy) : 0.0;
      const Complex v = fn(kx, ky);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw ConfigError("multiplier '" + op.label + "' is not finite at k=(" +
                          std::to_string(kx) + ", " + std::to_string(ky) + ")");
      }
      op.symbol[ix * ny + iy] = v;
    }
  }
  return op;
}

MultiplierOp derivative_op(const GridSpec& grid, int axis) {
  if (axis < 0 || axis >= grid.dim) {
    throw ConfigError("derivative axis " + std::to_string(axis) + " out of range for " +
                      grid.describe());
  }
  MultiplierOp op{axis == 0 ? "d/dx" : "d/dy", grid, std::vector<Complex>(grid.size())};
  const std::size_t ny = grid.ny();
  for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const std::size_t i = axis == 0 ? ix : iy;
      op.symbol[ix * ny + iy] =
          grid.is_nyquist(axis, i) ? Complex(0.0, 0.0) : Complex(0.0, grid.wavenumber(axis, i));
    }
  }
  return op;
}

MultiplierOp laplacian_op(const GridSpec& grid) {
  return MultiplierOp::tabulate(grid, "laplacian",
                                [](double kx, double ky) { return Complex(-(kx * kx + ky * ky)); });
}

MultiplierOp inverse_helmholtz_op(const GridSpec& grid, double c) {
  if (c < 0.0) throw DomainError("inverse Helmholtz coefficient must be nonnegative");
  return MultiplierOp::tabulate(grid, "(I-" + std::to_string(c) + " lap)^-1",
                                [c](double kx, double ky) {
                                  return Complex(1.0 / (1.0 + c * (kx * kx + ky * ky)));
                                });
}

MultiplierOp friedrichs_op(const GridSpec& grid, double m) {
  if (!(m > 0.0)) throw DomainError("Friedrichs cutoff must be positive");
  const double m2 = m * m;
  return MultiplierOp::tabulate(grid, "E_" + std::to_string(m), [m2](double kx, double ky) {
    return Complex(kx * kx + ky * ky <= m2 ? 1.0 : 0.0);
  });
}

bool in_dealias_band(const GridSpec& grid, std::size_t ix, std::size_t iy) {
  const auto inside = [&](int axis, std::size_t i) {
    const long k = grid.lattice_index(axis, i);
    return 3 * std::labs(k) < static_cast<long>(grid.points[axis]);
  };
  return inside(0, ix) && (grid.dim == 1 || inside(1, iy));
}

MultiplierOp dealias_op(const GridSpec& grid) {
  MultiplierOp op{"2/3-rule", grid, std::vector<Complex>(grid.size())};
  const std::size_t ny = grid.ny();
  for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
    for (std::size_t iy = 0; iy < ny; ++iy) {
      op.symbol[ix * ny + iy] = in_dealias_band(grid, ix, iy) ? 1.0 : 0.0;
    }
  }
  return op;
}

void apply_multiplier(const MultiplierOp& op, Spectrum& s) {
  require_same_grid(op.grid, s.grid, "apply_multiplier");
  for (std::size_t i = 0; i < s.size(); ++i) s.coeffs[i] *= op.symbol[i];
}

Field apply_multiplier(const MultiplierOp& op, const Field& f) {
  require_same_grid(op.grid, f.grid(), "apply_multiplier");
  Spectrum s = transform(f);
  apply_multiplier(op, s);
  return inverse_transform(s);
}

Field truncate_to_band(const Field& f) { return apply_multiplier(dealias_op(f.grid()), f); }

Field dealias_product(const Field& f, const Field& g) {
  require_same_grid(f.grid(), g.grid(), "dealias_product");
  const MultiplierOp band = dealias_op(f.grid());
  Field prod = pointwise_product(apply_multiplier(band, f), apply_multiplier(band, g));
  return apply_multiplier(band, prod);
}

Field friedrichs_project(const Field& f, double m) {
  return apply_multiplier(friedrichs_op(f.grid(), m), f);
}

Field derivative(const Field& f, int axis) {
  return apply_multiplier(derivative_op(f.grid(), axis), f);
}

std::vector<double> wavenumber_squared(const GridSpec& grid) {
  std::vector<double> k2(grid.size());
  const std::size_t ny = grid.ny();
  for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
    const double kx = grid.wavenumber(0, ix);
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const double ky = grid.dim == 2 ? grid.wavenumber(1, iy) : 0.0;
      k2[ix * ny + iy] = kx * kx + ky * ky;
    }
  }
  return k2;
}

std::vector<double> gradient_symbol_squared(const GridSpec& grid) {
  std::vector<double> k2(grid.size());
  const std::size_t ny = grid.ny();
  for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
    const double kx = grid.is_nyquist(0, ix) ? 0.0 : grid.wavenumber(0, ix);
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const double ky =
          grid.dim == 2 && !grid.is_nyquist(1, iy) ? grid.wavenumber(1, iy) : 0.0;
      k2[ix * ny + iy] = kx * kx + ky * ky;
    }
  }
  return k2;
}

}  // namespace bbm
