#pragma once

#include <vector>

#include "bbmlab/field.hpp"

namespace bbm {

/// Surface elevation eta and velocity V (one component per space dimension).
struct State {
  Field eta;
  std::vector<Field> velocity;

  static State zeros(const GridSpec& grid);

  const GridSpec& grid() const noexcept { return eta.grid(); }
  int dim() const noexcept { return eta.grid().dim; }

  State& operator+=(const State& other);
  State& operator-=(const State& other);
  State& operator*=(double c);
  State& axpy(double c, const State& other);

  bool all_finite() const;
  /// Maximum of |eta| and |V^k| over all nodes.
  double max_abs() const;
  /// sqrt(||eta||^2 + sum ||V^k||^2) in discrete L2.
  double l2_norm() const;

  /// Every component as a list, eta first.
  std::vector<const Field*> components() const;
};

State operator+(State a, const State& b);
State operator-(State a, const State& b);

/// Throws ConfigError unless all components share one grid and the number of
/// velocity components equals the dimension.
void validate_state(const State& s, const char* context);

}  // namespace bbm
