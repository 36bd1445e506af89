#include "bbmlab/bore_data.hpp"

#include <algorithm>
#include <cmath>

#include "bbmlab/errors.hpp"
#include "bbmlab/spectral.hpp"

namespace bbm {

BoreKind parse_bore_kind(const std::string& name) {
  if (name == "tanh") return BoreKind::tanh;
  if (name == "smoothed-step" || name == "smoothed_step") return BoreKind::smoothed_step;
  if (name == "custom-samples" || name == "custom_samples") return BoreKind::custom_samples;
  throw ConfigError("unknown bore kind '" + name + "'", "init.kind");
}

std::string to_string(BoreKind kind) {
  switch (kind) {
    case BoreKind::tanh:
      return "tanh";
    case BoreKind::smoothed_step:
      return "smoothed-step";
    case BoreKind::custom_samples:
      return "custom-samples";
  }
  return "?";
}

double BoreProfile::evaluate(double x) const {
  const double z = steepness * (x - center);
  switch (kind) {
    case BoreKind::tanh: {
      const double mid = 0.5 * (left_limit + right_limit);
      const double amp = 0.5 * (right_limit - left_limit);
      return mid + amp * std::tanh(z);
    }
    case BoreKind::smoothed_step:
      return left_limit + jump() * smooth_step(0.5 * (z + 1.0));
    case BoreKind::custom_samples:
      break;
  }
  throw ConfigError("custom-samples profiles have no closed form", "init.kind");
}

void BoreProfile::validate() const {
  if (!std::isfinite(left_limit) || !std::isfinite(right_limit)) {
    throw ConfigError("bore limits must be finite", "init.eta_minus");
  }
  if (kind != BoreKind::custom_samples && !(steepness > 0.0)) {
    throw ConfigError("bore steepness must be positive", "init.steepness");
  }
}

std::vector<unsigned char> BufferZone::mask(const GridSpec& grid) const {
  std::vector<unsigned char> m(grid.size(), 0);
  if (!active) return m;
  const std::size_t ny = grid.ny();
  for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
    if (!contains(grid.coordinate(0, ix))) continue;
    for (std::size_t iy = 0; iy < ny; ++iy) m[ix * ny + iy] = 1;
  }
  return m;
}

BoreField make_bore(const BoreProfile& profile, const GridSpec& grid) {
  profile.validate();
  if (grid.dim != 1) throw ConfigError("make_bore expects a 1D grid", "grid.dim");
  const double length = grid.length[0];
  const std::size_t n = grid.nx();

  std::vector<double> values(n);
  if (profile.kind == BoreKind::custom_samples) {
    if (profile.samples.size() != n) {
      throw ConfigError("custom bore has " + std::to_string(profile.samples.size()) +
                            " samples, grid has " + std::to_string(n),
                        "init.samples_file");
    }
    values = profile.samples;
  } else {
    for (std::size_t i = 0; i < n; ++i) values[i] = profile.evaluate(grid.coordinate(0, i));
  }

  const double jump = profile.jump();
  BoreField out{Field(grid, values), BufferZone{}};
  if (jump == 0.0) return out;

  if (profile.kind != BoreKind::custom_samples && profile.steepness * length < 20.0) {
    throw DomainTooSmallError("steepness * length = " + std::to_string(profile.steepness * length) +
                              " < 20: no room for the bore and its buffer");
  }

  const double w = 0.5 * kBufferFraction * length;
  const double interior = 0.5 * length - w;

  // The transition must be resolved inside the interior: every node whose value
  // still differs from its side's limit by more than 1e-8 |jump| is transition.
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.coordinate(0, i);
    const double limit = x < profile.center ? profile.left_limit : profile.right_limit;
    if (std::abs(values[i] - limit) > 1e-8 * std::abs(jump) && std::abs(x) >= interior) {
      throw DomainTooSmallError("bore transition reaches the periodization buffer at x = " +
                                std::to_string(x) + " (buffer starts at |x| = " +
                                std::to_string(interior) + ")");
    }
  }

  // Wrapped coordinate xi in [-w, w) across the periodic boundary: xi = -w at
  // the right buffer edge, +w at the left one. The base ramp carries the right
  // limit back to the left limit; the profile's residual tail is faded out so
  // the buffer edges join the profile with all derivatives matching.
  auto& data = out.field.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.coordinate(0, i);
    if (std::abs(x) < interior) continue;
    const double xi = x >= 0.0 ? x - 0.5 * length : x + 0.5 * length;
    const double limit = xi < 0.0 ? profile.right_limit : profile.left_limit;
    const double base = profile.right_limit - jump * smooth_step((xi + w) / (2.0 * w));
    const double fade = smooth_step((std::abs(xi) - 0.5 * w) / (0.5 * w));
    data[i] = base + (values[i] - limit) * fade;
  }
  out.buffer = BufferZone{true, interior, length};
  return out;
}

Field gaussian_bump(const GridSpec& grid, double amplitude, double width, double center) {
  if (!(width > 0.0)) throw ConfigError("perturbation width must be positive", "init.perturbation.width");
  return Field::from_function(grid, [&](double x, double y) {
    const double r2 = (x - center) * (x - center) + y * y;
    return amplitude * std::exp(-r2 / (width * width));
  });
}

SplitData low_high_split(const State& state, const DyadicPartition& part) {
  validate_state(state, "low_high_split");
  SplitData out{State{dyadic_block(state.eta, -1, part), {}}, State{}};
  for (const Field& v : state.velocity) out.low.velocity.push_back(dyadic_block(v, -1, part));
  out.high = state - out.low;
  return out;
}

double split_constant(const SplitData& split, const State& state, const EnergyWeights& w,
                      const DyadicPartition& part, double r) {
  const double high = stacked_norm(split.high, w, part, r).value;
  EnergyWeights lower = w;
  lower.s = w.s - 1.0;
  double deriv_sq = 0.0;
  for (int k = 0; k < state.dim(); ++k) {
    State dk{derivative(state.eta, k), {}};
    for (const Field& v : state.velocity) dk.velocity.push_back(derivative(v, k));
    const double n = stacked_norm(dk, lower, part, r).value;
    deriv_sq += n * n;
  }
  const double denom = std::sqrt(deriv_sq);
  return denom > 0.0 ? high / denom : 0.0;
}

Field extend_along_y(const Field& line, const GridSpec& plane) {
  const GridSpec& g = line.grid();
  if (g.dim != 1 || plane.dim != 2 || g.points[0] != plane.points[0] ||
      g.length[0] != plane.length[0]) {
    throw ConfigError("1D grid " + g.describe() + " does not match the x axis of " +
                      plane.describe());
  }
  Field out(plane);
  const std::size_t ny = plane.ny();
  for (std::size_t ix = 0; ix < plane.nx(); ++ix) {
    std::fill_n(out.data().begin() + static_cast<std::ptrdiff_t>(ix * ny), ny, line[ix]);
  }
  return out;
}

double ComposedState::m_norm(const EnergyWeights& w, double r) const {
  const DyadicPartition p1 = build_partition(line.grid());
  const DyadicPartition p2 = build_partition(perturbation.grid());
  return e_norm(line, w, p1, r) + stacked_norm(perturbation, w, p2, r).value;
}

ComposedState compose_2d(const Field& eta1d, const Field& u1d, const Field& phi,
                         const std::vector<Field>& psi) {
  const GridSpec& plane = phi.grid();
  if (plane.dim != 2) throw ConfigError("compose_2d: phi must live on a 2D grid");
  require_same_grid(eta1d.grid(), u1d.grid(), "compose_2d");
  if (psi.size() != 2) throw ConfigError("compose_2d: psi needs two components");
  for (const Field& p : psi) require_same_grid(p.grid(), plane, "compose_2d");

  ComposedState out;
  out.line = State{eta1d, {u1d}};
  out.perturbation = State{phi, psi};
  out.total = State{extend_along_y(eta1d, plane) + phi,
                    {extend_along_y(u1d, plane) + psi[0], psi[1]}};
  return out;
}

}  // namespace bbm
