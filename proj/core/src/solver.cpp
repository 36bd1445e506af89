#include "bbmlab/solver.hpp"

#include <algorithm>
#include <cmath>

#include "bbmlab/errors.hpp"
#include "bbmlab/spectral.hpp"

namespace bbm {

void ModelParams::validate() const {
  if (!(b >= 0.0) || !std::isfinite(b)) throw ConfigError("b must be >= 0", "params.b");
  if (!(d >= 0.0) || !std::isfinite(d)) throw ConfigError("d must be >= 0", "params.d");
  if (!(eps >= 0.0 && eps <= 1.0)) throw ConfigError("eps must lie in [0, 1]", "params.eps");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("beta must lie in [0, 1]", "params.beta");
  if (enforce_bbm_sum && std::abs(b + d - 1.0 / 3.0) >= 1e-12) {
    throw ConfigError("b + d must equal 1/3 when enforce_bbm_sum is set", "params.enforce_bbm_sum");
  }
}

TimeField TimeField::constant(Field f) {
  TimeField tf;
  tf.kind_ = Kind::constant;
  tf.grid_ = f.grid();
  tf.samples_.push_back(std::move(f));
  return tf;
}

TimeField TimeField::series(std::vector<double> times, std::vector<Field> samples) {
  if (times.empty() || times.size() != samples.size()) {
    throw ConfigError("coefficient series needs one field per sample time");
  }
  if (!std::is_sorted(times.begin(), times.end()) ||
      std::adjacent_find(times.begin(), times.end()) != times.end()) {
    throw ConfigError("coefficient series times must be strictly increasing");
  }
  for (const Field& f : samples) require_same_grid(f.grid(), samples.front().grid(), "series");
  TimeField tf;
  tf.kind_ = Kind::series;
  tf.grid_ = samples.front().grid();
  tf.times_ = std::move(times);
  tf.samples_ = std::move(samples);
  return tf;
}

TimeField TimeField::rule(GridSpec grid, Rule fn) {
  TimeField tf;
  tf.kind_ = Kind::rule;
  tf.grid_ = grid;
  tf.rule_ = std::move(fn);
  return tf;
}

TimeField TimeField::provider(Provider fn) {
  TimeField tf;
  tf.kind_ = Kind::provider;
  tf.provider_ = std::move(fn);
  return tf;
}

Field TimeField::at(double t) const {
  switch (kind_) {
    case Kind::zero:
      throw Error("TimeField::at called on the zero coefficient");
    case Kind::constant:
      return samples_.front();
    case Kind::series: {
      const double slack = 1e-12 * std::max(1.0, std::abs(times_.back()));
      if (t < times_.front() - slack || t > times_.back() + slack) {
        throw DomainError("coefficient series queried at t=" + std::to_string(t) +
                          " outside its sampled range");
      }
      if (times_.size() == 1 || t <= times_.front()) return samples_.front();
      if (t >= times_.back()) return samples_.back();
      const auto it = std::upper_bound(times_.begin(), times_.end(), t);
      const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
      const double theta = (t - times_[hi - 1]) / (times_[hi] - times_[hi - 1]);
      Field out = samples_[hi - 1];
      out *= 1.0 - theta;
      out.axpy(theta, samples_[hi]);
      return out;
    }
    case Kind::rule:
      return Field::from_function(grid_, [&](double x, double y) { return rule_(t, x, y); });
    case Kind::provider:
      return provider_(t);
  }
  return {};
}

namespace {

std::optional<std::vector<Field>> vector_at(const std::vector<TimeField>& v, double t) {
  if (v.empty() || std::all_of(v.begin(), v.end(), [](const TimeField& f) { return f.is_zero(); })) {
    return std::nullopt;
  }
  std::vector<Field> out;
  for (const TimeField& f : v) {
    out.push_back(f.is_zero() ? Field() : f.at(t));
  }
  // Zero components adopt the grid of the first nonzero one.
  const auto ref = std::find_if(out.begin(), out.end(), [](const Field& f) { return f.size() > 0; });
  for (Field& f : out) {
    if (f.size() == 0) f = Field(ref->grid());
  }
  return out;
}

std::optional<Field> scalar_at(const TimeField& f, double t) {
  if (f.is_zero()) return std::nullopt;
  return f.at(t);
}

}  // namespace

CoefficientFields CoefficientSet::at(double t) const {
  return CoefficientFields{scalar_at(h, t),  scalar_at(dt_h, t), vector_at(w1, t),
                           vector_at(w2, t), vector_at(w3, t),   scalar_at(f, t),
                           vector_at(g, t)};
}

double SolverConfig::max_linear_frequency(const ModelParams& p, const GridSpec& grid) {
  double best = 0.0;
  const std::vector<double> k2 = gradient_symbol_squared(grid);
  for (double q : k2) {
    const double w2 = q / ((1.0 + p.eps * p.b * q) * (1.0 + p.eps * p.d * q));
    best = std::max(best, w2);
  }
  return std::sqrt(best);
}

void SolverConfig::validate(const ModelParams& params, const GridSpec& grid) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive", "solver.dt");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw ConfigError("t_end must be >= 0", "solver.t_end");
  }
  if (friedrichs_m && !(*friedrichs_m > 0.0)) {
    throw ConfigError("Friedrichs cutoff must be positive", "solver.m");
  }
  if (max_steps && *max_steps < 0) throw ConfigError("max_steps must be >= 0", "solver.max_steps");
  if (params.eps * params.b == 0.0 || params.eps * params.d == 0.0) {
    double h = grid.spacing(0);
    if (grid.dim == 2) h = std::min(h, grid.spacing(1));
    if (dt > 0.5 * h) {
      throw ConfigError("dt = " + std::to_string(dt) + " exceeds the advective cap 0.5 * spacing = " +
                            std::to_string(0.5 * h) + " required without dispersive regularization",
                        "solver.dt");
    }
  }
}

RhsEvaluator::RhsEvaluator(const GridSpec& grid, const ModelParams& params,
                           const SolverConfig& config)
    : grid_(grid), params_(params), dealias_(config.dealias) {
  grid_.validate();
  params_.validate();
  const std::size_t n = grid_.size();
  const std::vector<double> k2 = wavenumber_squared(grid_);
  band_.assign(n, 1.0);
  helm_b_.resize(n);
  helm_d_.resize(n);
  const std::size_t ny = grid_.ny();
  for (std::size_t ix = 0; ix < grid_.nx(); ++ix) {
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const std::size_t i = ix * ny + iy;
      if (dealias_ && !in_dealias_band(grid_, ix, iy)) band_[i] = 0.0;
      const double keep =
          config.friedrichs_m && k2[i] > *config.friedrichs_m * *config.friedrichs_m ? 0.0 : 1.0;
      helm_b_[i] = keep / (1.0 + params_.eps * params_.b * k2[i]);
      helm_d_[i] = keep / (1.0 + params_.eps * params_.d * k2[i]);
    }
  }
  k_.assign(static_cast<std::size_t>(grid_.dim), std::vector<double>(n, 0.0));
  for (int a = 0; a < grid_.dim; ++a) {
    for (std::size_t ix = 0; ix < grid_.nx(); ++ix) {
      for (std::size_t iy = 0; iy < ny; ++iy) {
        const std::size_t idx = a == 0 ? ix : iy;
        if (!grid_.is_nyquist(a, idx)) k_[a][ix * ny + iy] = grid_.wavenumber(a, idx);
      }
    }
  }
}

State RhsEvaluator::operator()(const State& s, double t, const CoefficientFields& c) const {
  validate_state(s, "rhs_eval");
  require_same_grid(s.grid(), grid_, "rhs_eval");
  const std::size_t n = grid_.size();
  const int dim = grid_.dim;
  const double eps = params_.eps;
  const double beta = params_.beta;
  const Complex I(0.0, 1.0);

  const auto band_inverse = [&](const Spectrum& in) {
    Spectrum m = in;
    for (std::size_t i = 0; i < n; ++i) m.coeffs[i] *= band_[i];
    return inverse_transform(m);
  };
  const auto band_field = [&](const Field& f) {
    require_same_grid(f.grid(), grid_, "rhs_eval coefficient");
    return dealias_ ? band_inverse(transform(f)) : f;
  };
  const auto band_derivative = [&](const Spectrum& in, int axis) {
    Spectrum m = in;
    for (std::size_t i = 0; i < n; ++i) m.coeffs[i] *= I * (k_[axis][i] * band_[i]);
    return inverse_transform(m);
  };
  const auto add_banded = [&](Spectrum& acc, const Field& prod, Complex factor) {
    const Spectrum p = transform(prod);
    for (std::size_t i = 0; i < n; ++i) acc.coeffs[i] += factor * band_[i] * p.coeffs[i];
  };
  const auto check_components = [&](const std::optional<std::vector<Field>>& v, const char* name) {
    if (v && static_cast<int>(v->size()) != dim) {
      throw ConfigError(std::string("coefficient ") + name + " needs " + std::to_string(dim) +
                        " components");
    }
  };
  check_components(c.w1, "W1");
  check_components(c.w2, "W2");
  check_components(c.w3, "W3");
  check_components(c.g, "g");

  const Spectrum eta_hat = transform(s.eta);
  std::vector<Spectrum> v_hat;
  for (const Field& v : s.velocity) v_hat.push_back(transform(v));

  // Bracketed operators before the elliptic inverses: [div V + ...] and [grad eta + ...].
  Spectrum a_eta{grid_, std::vector<Complex>(n)};
  std::vector<Spectrum> a_v(static_cast<std::size_t>(dim), Spectrum{grid_, std::vector<Complex>(n)});
  for (int l = 0; l < dim; ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      a_eta.coeffs[i] += I * k_[l][i] * v_hat[l].coeffs[i];
      a_v[l].coeffs[i] = I * k_[l][i] * eta_hat.coeffs[i];
    }
  }

  if (eps != 0.0) {
    const bool eta_flux = c.w1 || c.h || beta != 0.0;
    const bool advect = c.w2 || beta != 0.0;
    if (eta_flux || advect || c.w3) {
      const Field eta_b = dealias_ ? band_inverse(eta_hat) : s.eta;
      std::vector<Field> v_b;
      for (int l = 0; l < dim; ++l) v_b.push_back(dealias_ ? band_inverse(v_hat[l]) : s.velocity[l]);

      if (eta_flux) {
        const std::optional<Field> h_b = c.h ? std::optional<Field>(band_field(*c.h)) : std::nullopt;
        for (int l = 0; l < dim; ++l) {
          Field flux(grid_);
          if (c.w1) flux += pointwise_product(eta_b, band_field((*c.w1)[l]));
          if (h_b) flux += pointwise_product(*h_b, v_b[l]);
          if (beta != 0.0) flux.axpy(beta, pointwise_product(eta_b, v_b[l]));
          const Spectrum fh = transform(flux);
          for (std::size_t i = 0; i < n; ++i) {
            a_eta.coeffs[i] += eps * band_[i] * I * k_[l][i] * fh.coeffs[i];
          }
        }
      }

      std::vector<Field> advector;
      if (advect) {
        for (int l = 0; l < dim; ++l) {
          Field a = c.w2 ? band_field((*c.w2)[l]) : Field(grid_);
          if (beta != 0.0) a.axpy(beta, v_b[l]);
          advector.push_back(std::move(a));
        }
      }
      std::vector<Spectrum> w3_hat;
      if (c.w3) {
        for (int k = 0; k < dim; ++k) w3_hat.push_back(transform((*c.w3)[k]));
      }
      for (int k = 0; k < dim; ++k) {
        Field q(grid_);
        for (int l = 0; l < dim; ++l) {
          if (advect) q += pointwise_product(advector[l], band_derivative(v_hat[k], l));
          if (c.w3) q += pointwise_product(v_b[l], band_derivative(w3_hat[k], l));
        }
        add_banded(a_v[k], q, eps);
      }
    }
    if (c.f) {
      require_same_grid(c.f->grid(), grid_, "rhs_eval forcing f");
      const Spectrum fh = transform(*c.f);
      for (std::size_t i = 0; i < n; ++i) a_eta.coeffs[i] -= eps * fh.coeffs[i];
    }
    if (c.g) {
      for (int k = 0; k < dim; ++k) {
        require_same_grid((*c.g)[k].grid(), grid_, "rhs_eval forcing g");
        const Spectrum gh = transform((*c.g)[k]);
        for (std::size_t i = 0; i < n; ++i) a_v[k].coeffs[i] -= eps * gh.coeffs[i];
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) a_eta.coeffs[i] *= -helm_b_[i];
  State out{inverse_transform(a_eta), {}};
  for (int k = 0; k < dim; ++k) {
    for (std::size_t i = 0; i < n; ++i) a_v[k].coeffs[i] *= -helm_d_[i];
    out.velocity.push_back(inverse_transform(a_v[k]));
  }
  if (!out.all_finite()) throw BlowUpError("non-finite time derivative", t);
  return out;
}

State rhs_eval(const State& state, double t, const ModelParams& params,
               const CoefficientFields& coeffs, const SolverConfig& config) {
  return RhsEvaluator(state.grid(), params, config)(state, t, coeffs);
}

Bundle& axpy(Bundle& y, double c, const Bundle& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i].axpy(c, x[i]);
  return y;
}

Bundle rk4_step(const BundleRhs& rhs, const Bundle& y, double t, double dt) {
  const Bundle k1 = rhs(t, y);
  Bundle y2 = y;
  const Bundle k2 = rhs(t + 0.5 * dt, axpy(y2, 0.5 * dt, k1));
  Bundle y3 = y;
  const Bundle k3 = rhs(t + 0.5 * dt, axpy(y3, 0.5 * dt, k2));
  Bundle y4 = y;
  const Bundle k4 = rhs(t + dt, axpy(y4, dt, k3));
  Bundle out = y;
  axpy(out, dt / 6.0, k1);
  axpy(out, dt / 3.0, k2);
  axpy(out, dt / 3.0, k3);
  axpy(out, dt / 6.0, k4);
  return out;
}

State rk4_step(const std::function<State(double, const State&)>& rhs, const State& y, double t,
               double dt) {
  const BundleRhs wrapped = [&](double tt, const Bundle& b) { return Bundle{rhs(tt, b.front())}; };
  return rk4_step(wrapped, Bundle{y}, t, dt).front();
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::horizon:
      return "horizon";
    case Termination::threshold:
      return "threshold";
    case Termination::blowup:
      return "blowup";
    case Termination::contamination:
      return "contamination";
    case Termination::step_budget:
      return "step_budget";
  }
  return "?";
}

int exit_code(Termination t) {
  switch (t) {
    case Termination::horizon:
    case Termination::step_budget:
      return 0;
    case Termination::threshold:
      return 2;
    case Termination::blowup:
      return 3;
    case Termination::contamination:
      return 4;
  }
  return 1;
}

long record_interval(double stride, double dt) {
  if (!(stride > 0.0)) throw ConfigError("ledger stride must be positive", "ledger.stride");
  return std::max(1L, static_cast<long>(std::floor(stride / dt + 1e-9)));
}

IntegrationResult integrate(Bundle y0, const BundleRhs& rhs, const SolverConfig& config,
                            long record_every, const Observer& observer) {
  IntegrationResult res;
  res.final_state = std::move(y0);
  const long total = config.t_end == 0.0
                         ? 0
                         : static_cast<long>(std::ceil(config.t_end / config.dt - 1e-9));
  const auto observe = [&](double t, long step) {
    if (!observer) return false;
    if (const auto stop = observer(t, res.final_state, step)) {
      res.reason = *stop;
      return true;
    }
    return false;
  };
  if (observe(0.0, 0)) return res;
  for (long step = 1; step <= total; ++step) {
    if (config.max_steps && step > *config.max_steps) {
      res.reason = Termination::step_budget;
      res.message = "step budget exhausted";
      observe(res.t, res.steps);
      return res;
    }
    const double t_next = step == total ? config.t_end : static_cast<double>(step) * config.dt;
    try {
      Bundle next = rk4_step(rhs, res.final_state, res.t, t_next - res.t);
      for (const State& s : next) {
        if (!s.all_finite()) throw BlowUpError("non-finite state", t_next);
      }
      res.final_state = std::move(next);
    } catch (const BlowUpError& e) {
      res.reason = Termination::blowup;
      res.message = e.what();
      return res;
    }
    res.t = t_next;
    res.steps = step;
    if ((step % record_every == 0 || step == total) && observe(res.t, step)) return res;
  }
  res.reason = Termination::horizon;
  return res;
}

}  // namespace bbm
