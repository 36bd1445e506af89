#include "bbmlab/state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bbmlab/errors.hpp"

namespace bbm {

State State::zeros(const GridSpec& grid) {
  State s{Field(grid), {}};
  for (int a = 0; a < grid.dim; ++a) s.velocity.emplace_back(grid);
  return s;
}

State& State::operator+=(const State& other) {
  eta += other.eta;
  for (std::size_t k = 0; k < velocity.size(); ++k) velocity[k] += other.velocity[k];
  return *this;
}

State& State::operator-=(const State& other) {
  eta -= other.eta;
  for (std::size_t k = 0; k < velocity.size(); ++k) velocity[k] -= other.velocity[k];
  return *this;
}

State& State::operator*=(double c) {
  eta *= c;
  for (Field& v : velocity) v *= c;
  return *this;
}

State& State::axpy(double c, const State& other) {
  eta.axpy(c, other.eta);
  for (std::size_t k = 0; k < velocity.size(); ++k) velocity[k].axpy(c, other.velocity[k]);
  return *this;
}

bool State::all_finite() const {
  return eta.all_finite() &&
         std::all_of(velocity.begin(), velocity.end(), [](const Field& v) { return v.all_finite(); });
}

double State::max_abs() const {
  double m = eta.max_abs();
  for (const Field& v : velocity) m = std::max(m, v.max_abs());
  return m;
}

double State::l2_norm() const {
  double sum = eta.l2_norm() * eta.l2_norm();
  for (const Field& v : velocity) sum += v.l2_norm() * v.l2_norm();
  return std::sqrt(sum);
}

std::vector<const Field*> State::components() const {
  std::vector<const Field*> out{&eta};
  for (const Field& v : velocity) out.push_back(&v);
  return out;
}

State operator+(State a, const State& b) { return a += b; }
State operator-(State a, const State& b) { return a -= b; }

void validate_state(const State& s, const char* context) {
  const GridSpec& g = s.eta.grid();
  if (static_cast<int>(s.velocity.size()) != g.dim) {
    throw ConfigError(std::string(context) + ": state has " + std::to_string(s.velocity.size()) +
                      " velocity components on a " + std::to_string(g.dim) + "D grid");
  }
  for (const Field& v : s.velocity) require_same_grid(g, v.grid(), context);
}

}  // namespace bbm
