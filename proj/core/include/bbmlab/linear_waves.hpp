#pragma once

#include <utility>

#include "bbmlab/field.hpp"

namespace bbm {

/// Exact solution of the linear acoustic system
///   d_t eta + d_x u = 0,  d_t u + d_x eta = 0
/// for band-limited 1D data, propagated by spectral phase factors:
///   eta_L^ = cos(kt) eta^ - i sin(kt) u^,   u_L^ = -i sin(kt) eta^ + cos(kt) u^,
/// i.e. 2 eta_L(t, x) = eta(x - t) + eta(x + t) + u(x - t) - u(x + t) and
/// 2 u_L(t, x)   = eta(x - t) - eta(x + t) + u(x - t) + u(x + t).
class WaveBackground {
 public:
  WaveBackground() = default;
  WaveBackground(const Field& eta0_low, const Field& u0_low);

  const GridSpec& grid() const noexcept { return grid_; }
  const Field& eta0() const noexcept { return eta0_; }
  const Field& u0() const noexcept { return u0_; }

  /// (eta_L, u_L) at time t.
  std::pair<Field, Field> evaluate(double t) const;

 private:
  GridSpec grid_;
  Field eta0_;
  Field u0_;
  Spectrum eta_hat_;
  Spectrum u_hat_;
};

inline std::pair<Field, Field> dalembert_evolve(const WaveBackground& bg, double t) {
  return bg.evaluate(t);
}

/// f_L = -d_x T(eta_L u_L) - b d_xxx u_L,  g_L = -T(u_L d_x u_L) - d d_xxx eta_L,
/// T the 2/3-rule truncation.
std::pair<Field, Field> forcing_terms(const Field& eta_l, const Field& u_l, double b, double d);
std::pair<Field, Field> forcing_terms(const WaveBackground& bg, double t, double b, double d);

}  // namespace bbm
