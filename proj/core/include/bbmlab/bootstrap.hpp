#pragma once

#include <array>
#include <optional>
#include <vector>

namespace bbm {

/// Inputs of the long-time bootstrap: initial sizes R0 (X-norm at eps = 1 and
/// eps = 0), suprema over the run of ||h||_inf, W_s and F_s, and the abstract
/// constants C (energy inequality) and C1 (embedding B^{n/2}_{2,1} into L^inf).
struct BootstrapInputs {
  double R0_1 = 1.0;
  double R0_0 = 1.0;
  double sup_h = 1.0;
  double sup_W = 1.0;
  double sup_F = 1.0;
  double C = 1.0;
  double C1 = 1.0;
};

struct BootstrapConstants {
  BootstrapInputs inputs;
  std::array<double, 4> eps0_candidates{};
  double eps0 = 0.0;
  std::array<double, 3> c_tilde_candidates{};
  double c_tilde = 0.0;

  /// Guaranteed horizon C~ / eps.
  double predicted_horizon(double eps) const { return c_tilde / eps; }
};

/// Throws DomainError unless every input is positive.
BootstrapConstants bootstrap_constants(const BootstrapInputs& in);

struct TStar {
  bool crossed = false;
  double time = 0.0;     // crossing time, or the horizon when not crossed
  double threshold = 0.0;
};

/// First time the series exceeds factor * R0, linearly interpolated between
/// samples. Throws ConfigError on an empty or unsorted series.
TStar t_star_measure(const std::vector<double>& times, const std::vector<double>& values, double R0,
                     double factor);

}  // namespace bbm
