#include "bbmlab/linear_waves.hpp"

#include <cmath>

#include "bbmlab/errors.hpp"
#include "bbmlab/spectral.hpp"

namespace bbm {

WaveBackground::WaveBackground(const Field& eta0_low, const Field& u0_low)
    : grid_(eta0_low.grid()), eta0_(eta0_low), u0_(u0_low) {
  require_same_grid(eta0_low.grid(), u0_low.grid(), "WaveBackground");
  if (grid_.dim != 1) throw ConfigError("the linear wave background is one-dimensional");
  eta_hat_ = transform(eta0_);
  u_hat_ = transform(u0_);
}

std::pair<Field, Field> WaveBackground::evaluate(double t) const {
  if (t == 0.0) return {eta0_, u0_};
  Spectrum eta{grid_, std::vector<Complex>(grid_.size())};
  Spectrum u{grid_, std::vector<Complex>(grid_.size())};
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const double kt = grid_.wavenumber(0, i) * t;
    const double c = std::cos(kt);
    const Complex is(0.0, std::sin(kt));
    eta.coeffs[i] = c * eta_hat_.coeffs[i] - is * u_hat_.coeffs[i];
    u.coeffs[i] = -is * eta_hat_.coeffs[i] + c * u_hat_.coeffs[i];
  }
  return {inverse_transform(eta), inverse_transform(u)};
}

std::pair<Field, Field> forcing_terms(const Field& eta_l, const Field& u_l, double b, double d) {
  require_same_grid(eta_l.grid(), u_l.grid(), "forcing_terms");
  const Field dx_u = derivative(u_l, 0);
  const Field dx_eta = derivative(eta_l, 0);
  Field f = derivative(dealias_product(eta_l, u_l), 0);
  f *= -1.0;
  f.axpy(-b, derivative(derivative(dx_u, 0), 0));
  Field g = dealias_product(u_l, dx_u);
  g *= -1.0;
  g.axpy(-d, derivative(derivative(dx_eta, 0), 0));
  return {std::move(f), std::move(g)};
}

std::pair<Field, Field> forcing_terms(const WaveBackground& bg, double t, double b, double d) {
  const auto [eta, u] = bg.evaluate(t);
  return forcing_terms(eta, u, b, d);
}

}  // namespace bbm
