#include "bbmlab/diagnostics.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "bbmlab/errors.hpp"
#include "bbmlab/spectral.hpp"

namespace bbm {

void LedgerSettings::validate() const {
  if (!(stride > 0.0)) throw ConfigError("stride must be positive", "ledger.stride");
  if (!(r >= 1.0)) throw ConfigError("r must be >= 1", "ledger.r");
  if (!std::isfinite(s)) throw ConfigError("s must be finite", "ledger.s");
  if (!(threshold_factor > 1.0)) {
    throw ConfigError("threshold factor must exceed 1", "ledger.threshold_factor");
  }
  if (!(leak_tolerance > 0.0)) throw ConfigError("leak tolerance must be positive", "ledger.leak_tolerance");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void EnergyLedger::write_csv(std::ostream& os) const {
  os << kLedgerHeader << '\n';
  for (const LedgerSample& s : samples) {
    os << format_double(s.t) << ',' << format_double(s.U_s) << ',' << format_double(s.max_eta) << ','
       << format_double(s.dt_eta_inf) << ',' << format_double(s.blowup_integral) << ','
       << format_double(s.buffer_leak) << '\n';
  }
}

void EnergyLedger::write_diagnostics_csv(std::ostream& os, const std::vector<int>& blocks) const {
  std::vector<int> chosen = blocks;
  if (chosen.empty() && !samples.empty()) {
    for (int j = -1; j + 1 < static_cast<int>(samples.front().U_j.size()); ++j) chosen.push_back(j);
  }
  os << "t,U_inf,mass,e_norm_total,W_s,F_s,window_ok";
  for (int j : chosen) os << ",U_" << j;
  for (int j : chosen) os << ",N_" << j;
  os << '\n';
  const auto block = [](const std::vector<double>& v, int j) {
    const std::size_t i = static_cast<std::size_t>(j + 1);
    return i < v.size() ? v[i] : 0.0;
  };
  for (const LedgerSample& s : samples) {
    os << format_double(s.t) << ',' << format_double(s.U_inf) << ',' << format_double(s.mass) << ','
       << format_double(s.e_norm_total) << ',' << format_double(s.W_s) << ','
       << format_double(s.F_s) << ',' << (s.window_ok ? 1 : 0);
    for (int j : chosen) os << ',' << format_double(block(s.U_j, j));
    for (int j : chosen) os << ',' << format_double(block(s.N_j, j));
    os << '\n';
  }
}

EnergyLedger EnergyLedger::read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kLedgerHeader) {
    throw ConfigError("ledger CSV header must be '" + std::string(kLedgerHeader) + "'");
  }
  EnergyLedger out;
  long row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    double v[6];
    int n = 0;
    while (std::getline(ss, cell, ',')) {
      if (n == 6) throw ConfigError("ledger row " + std::to_string(row) + " has too many columns");
      char* end = nullptr;
      v[n] = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        throw ConfigError("ledger row " + std::to_string(row) + ": bad number '" + cell + "'");
      }
      ++n;
    }
    if (n != 6) throw ConfigError("ledger row " + std::to_string(row) + " has too few columns");
    LedgerSample s;
    s.t = v[0];
    s.U_s = v[1];
    s.max_eta = v[2];
    s.dt_eta_inf = v[3];
    s.blowup_integral = v[4];
    s.buffer_leak = v[5];
    out.samples.push_back(s);
  }
  return out;
}

namespace {

double quad(const Field& a, const Field& b) { return inner_product(a, b); }

Field weighted_block(const Spectrum& s, std::span<const double> w, const std::vector<double>* k) {
  Spectrum m = s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    m.coeffs[i] *= w[i];
    if (k) m.coeffs[i] *= Complex(0.0, (*k)[i]);
  }
  return inverse_transform(m);
}

std::vector<std::vector<double>> derivative_tables(const GridSpec& g) {
  std::vector<std::vector<double>> k(static_cast<std::size_t>(g.dim), std::vector<double>(g.size()));
  const std::size_t ny = g.ny();
  for (int a = 0; a < g.dim; ++a) {
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
      for (std::size_t iy = 0; iy < ny; ++iy) {
        const std::size_t idx = a == 0 ? ix : iy;
        k[a][ix * ny + iy] = g.is_nyquist(a, idx) ? 0.0 : g.wavenumber(a, idx);
      }
    }
  }
  return k;
}

double grad_sup(const Field& f) {
  if (f.grid().dim == 1) return derivative(f, 0).max_abs();
  const Field dx = derivative(f, 0);
  const Field dy = derivative(f, 1);
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::hypot(dx[i], dy[i]));
  return m;
}

}  // namespace

ModifiedEnergy modified_energy(const State& state, const ModelParams& params, const Field* h,
                               const DyadicPartition& part) {
  validate_state(state, "modified_energy");
  require_same_grid(state.grid(), part.grid(), "modified_energy");
  const GridSpec& g = state.grid();
  const double eps = params.eps;

  Field weight = Field::constant(g, 1.0);
  weight.axpy(eps, state.eta);
  if (h) {
    require_same_grid(h->grid(), g, "modified_energy");
    weight.axpy(eps, *h);
  }
  ModifiedEnergy out;
  const auto [lo, hi] = std::minmax_element(weight.data().begin(), weight.data().end());
  out.weight_min = *lo;
  out.weight_max = *hi;
  out.window_ok = std::max(std::abs(*lo - 1.0), std::abs(*hi - 1.0)) < 0.75;

  const auto k = derivative_tables(g);
  const Spectrum eta_hat = transform(state.eta);
  std::vector<Spectrum> v_hat;
  for (const Field& v : state.velocity) v_hat.push_back(transform(v));

  for (int j = -1; j <= part.j_max(); ++j) {
    const auto w = part.weights(j);
    const Field eta_j = weighted_block(eta_hat, w, nullptr);
    double n2 = quad(eta_j, eta_j);
    for (int a = 0; a < g.dim; ++a) {
      const Field d = weighted_block(eta_hat, w, &k[a]);
      n2 += eps * params.b * quad(d, d);
    }
    Field dens(g);
    for (const Spectrum& vh : v_hat) {
      const Field vj = weighted_block(vh, w, nullptr);
      dens += pointwise_product(vj, vj);
      for (int a = 0; a < g.dim; ++a) {
        const Field d = weighted_block(vh, w, &k[a]);
        dens.axpy(eps * params.d, pointwise_product(d, d));
      }
    }
    n2 += quad(weight, dens);
    out.N_j.push_back(std::sqrt(std::max(n2, 0.0)));
  }
  return out;
}

double modified_energy(const State& state, int j, const ModelParams& params, const Field* h,
                       const DyadicPartition& part) {
  if (j < -1 || j > part.j_max()) return 0.0;
  return modified_energy(state, params, h, part).N_j[static_cast<std::size_t>(j + 1)];
}

double sup_norm_with_gradients(const State& state) {
  double m = state.max_abs();
  for (const Field* f : state.components()) {
    for (int a = 0; a < state.dim(); ++a) m = std::max(m, derivative(*f, a).max_abs());
  }
  return m;
}

void BlowupMonitor::add(double t, double u) {
  if (!times_.empty() && t <= times_.back()) {
    throw ConfigError("blow-up monitor samples must be strictly increasing in t");
  }
  const double prev = integral_.empty() ? 0.0 : integral_.back();
  const double inc = times_.empty() ? 0.0 : 0.5 * (u + values_.back()) * (t - times_.back());
  times_.push_back(t);
  values_.push_back(u);
  integral_.push_back(prev + inc);
  if (flag_ || integral_.back() <= 0.0) return;
  const double window_start = t - 0.05 * t;
  for (std::size_t k = 0; k + 1 < times_.size(); ++k) {
    if (times_[k] < window_start) continue;
    if (integral_[k] > 0.0 && integral_.back() >= 2.0 * integral_[k]) flag_ = t;
    break;
  }
}

BlowupStatus blowup_monitor(const std::vector<double>& times, const std::vector<double>& u) {
  if (times.size() != u.size()) throw ConfigError("blowup_monitor: series lengths differ");
  BlowupMonitor m;
  for (std::size_t i = 0; i < times.size(); ++i) m.add(times[i], u[i]);
  BlowupStatus st;
  st.integral = m.integral();
  if (m.flag_time()) {
    st.flagged = true;
    st.flag_time = *m.flag_time();
  }
  return st;
}

namespace {

double gradient_besov(const Field& f, double s, double r, const DyadicPartition& part) {
  std::vector<Field> grad;
  for (int a = 0; a < f.grid().dim; ++a) grad.push_back(derivative(f, a));
  return besov_norm(grad, BesovSpec{s, 2.0, r}, part).value;
}

double vector_term(const std::optional<std::vector<Field>>& w, double s, double r,
                   const DyadicPartition& part) {
  if (!w) return 0.0;
  double sup = 0.0;
  std::vector<Field> grad;
  for (const Field& c : *w) {
    sup = std::max(sup, c.max_abs());
    for (int a = 0; a < c.grid().dim; ++a) grad.push_back(derivative(c, a));
  }
  return sup + besov_norm(grad, BesovSpec{s, 2.0, r}, part).value;
}

}  // namespace

double coefficient_norm(const CoefficientFields& c, double s, double r, const DyadicPartition& part) {
  double total = 0.0;
  if (c.h) total += c.h->max_abs() + gradient_besov(*c.h, s, r, part);
  if (c.dt_h) total += c.dt_h->max_abs();
  total += vector_term(c.w1, s, r, part);
  total += vector_term(c.w2, s, r, part);
  total += vector_term(c.w3, s, r, part);
  return total;
}

double forcing_norm(const CoefficientFields& c, double s, double r, const DyadicPartition& part) {
  std::vector<Field> parts;
  if (c.f) parts.push_back(*c.f);
  if (c.g) parts.insert(parts.end(), c.g->begin(), c.g->end());
  if (parts.empty()) return 0.0;
  return besov_norm(parts, BesovSpec{s, 2.0, r}, part).value;
}

double buffer_monitor(const State& now, const State& initial, const BufferZone& zone) {
  if (!zone.active) return 0.0;
  validate_state(now, "buffer_monitor");
  require_same_grid(now.grid(), initial.grid(), "buffer_monitor");
  const std::vector<unsigned char> mask = zone.mask(now.grid());
  const auto a = now.components();
  const auto b = initial.components();
  double leak = 0.0;
  double interior = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i]) {
        leak = std::max(leak, std::abs((*a[c])[i] - (*b[c])[i]));
      } else {
        interior = std::max(interior, std::abs((*a[c])[i]));
      }
    }
  }
  return interior > 0.0 ? leak / interior : leak;
}

LedgerRecorder::LedgerRecorder(LedgerSettings settings, const ModelParams& params,
                               const DyadicPartition& part, BufferZone buffer, State initial)
    : settings_(std::move(settings)),
      params_(params),
      weights_{params.b, params.d, params.eps, settings_.s},
      part_(&part),
      buffer_(buffer),
      initial_(std::move(initial)) {
  settings_.validate();
  validate_state(initial_, "LedgerRecorder");
  require_same_grid(initial_.grid(), part.grid(), "LedgerRecorder");
}

std::optional<Termination> LedgerRecorder::record(const Observation& obs) {
  LedgerSample s;
  s.t = obs.t;
  s.U_j = block_energies(obs.state, weights_, *part_);
  s.U_s = stacked_norm_from_blocks(s.U_j, settings_.s, settings_.r).value;
  s.max_eta = obs.state.eta.max_abs();
  s.dt_eta_inf = obs.rate.eta.max_abs();
  s.U_inf = sup_norm_with_gradients(obs.state);
  blowup_.add(obs.t, s.U_inf);
  s.blowup_integral = blowup_.integral();
  s.buffer_leak = buffer_monitor(obs.state, initial_, buffer_);
  s.mass = obs.state.eta.integral();
  s.e_norm_total = obs.e_norm_total;
  s.W_s = coefficient_norm(obs.coeffs, settings_.s, settings_.r, *part_);
  s.F_s = forcing_norm(obs.coeffs, settings_.s, settings_.r, *part_);
  const ModifiedEnergy me =
      modified_energy(obs.state, params_, obs.coeffs.h ? &*obs.coeffs.h : nullptr, *part_);
  s.N_j = me.N_j;
  s.window_ok = me.window_ok;
  if (!s.window_ok) ++ledger_.window_violations;

  std::optional<Termination> stop;
  if (ledger_.samples.empty()) ledger_.threshold = settings_.threshold_factor * s.U_s;
  if (!ledger_.crossing_time && ledger_.threshold > 0.0 && s.U_s > ledger_.threshold) {
    const LedgerSample* prev = ledger_.samples.empty() ? nullptr : &ledger_.samples.back();
    ledger_.crossing_time =
        prev ? prev->t + (ledger_.threshold - prev->U_s) / (s.U_s - prev->U_s) * (s.t - prev->t)
             : s.t;
    if (settings_.halt_on_threshold) stop = Termination::threshold;
  }
  if (blowup_.flag_time()) ledger_.blowup_flag_time = blowup_.flag_time();

  const bool finite = std::isfinite(s.U_s) && std::isfinite(s.max_eta) &&
                      std::isfinite(s.dt_eta_inf) && std::isfinite(s.blowup_integral) &&
                      std::isfinite(s.buffer_leak);
  if (!finite) stop = Termination::blowup;
  if (settings_.abort_on_leak && s.buffer_leak > settings_.leak_tolerance) {
    stop = Termination::contamination;
  }
  ledger_.samples.push_back(std::move(s));
  return stop;
}

double inequality_rhs_unit(const LedgerSample& s, int j, double eps, double beta, double sobolev_s) {
  const double uj = s.U_j.at(static_cast<std::size_t>(j + 1));
  const double g = s.W_s + beta * s.U_s;
  const double first = uj * uj * (eps * beta * s.F_s + g + eps * g * g);
  const double second = std::exp2(-j * sobolev_s) * uj *
                        (s.F_s * (1.0 + eps * g) + s.U_s * g * (1.0 + eps * g));
  return eps * (first + second);
}

namespace {

template <typename Fn>
void for_each_audited(const EnergyLedger& ledger, Fn&& fn) {
  const auto& smp = ledger.samples;
  for (std::size_t i = 1; i + 1 < smp.size(); ++i) {
    if (!smp[i].window_ok) continue;
    const double umax = *std::max_element(smp[i].U_j.begin(), smp[i].U_j.end());
    for (std::size_t b = 0; b < smp[i].U_j.size(); ++b) {
      if (!(smp[i].U_j[b] > 1e-12 * umax)) continue;
      const double n_next = smp[i + 1].N_j[b] * smp[i + 1].N_j[b];
      const double n_prev = smp[i - 1].N_j[b] * smp[i - 1].N_j[b];
      const double lhs = (n_next - n_prev) / (smp[i + 1].t - smp[i - 1].t);
      fn(smp[i], static_cast<int>(b) - 1, lhs, 0.5 * (n_next + n_prev));
    }
  }
}

}  // namespace

double fit_inequality_constant(const EnergyLedger& ledger, double eps, double beta, double s) {
  double c = 0.0;
  for_each_audited(ledger, [&](const LedgerSample& smp, int j, double lhs, double) {
    const double unit = inequality_rhs_unit(smp, j, eps, beta, s);
    if (lhs > 0.0 && unit > 0.0) c = std::max(c, lhs / unit);
  });
  return c;
}

InequalityReport inequality_audit(const EnergyLedger& ledger, double C, double eps, double beta,
                                  double s, double stride) {
  InequalityReport rep;
  rep.C = C;
  rep.worst_residual = kInf;
  for_each_audited(ledger, [&](const LedgerSample& smp, int j, double lhs, double energy) {
    const double rhs = C * inequality_rhs_unit(smp, j, eps, beta, s);
    const double tol = stride * stride * energy;
    ++rep.checked;
    if (lhs <= rhs + tol) ++rep.holding;
    rep.worst_residual = std::min(rep.worst_residual, rhs - lhs);
  });
  if (rep.checked == 0) rep.worst_residual = 0.0;
  rep.fraction = rep.checked ? static_cast<double>(rep.holding) / static_cast<double>(rep.checked) : 1.0;
  return rep;
}

double fit_time_derivative_constant(const EnergyLedger& ledger, double eps, double beta) {
  double c = 0.0;
  for (const LedgerSample& s : ledger.samples) {
    const double denom = s.U_s + eps * s.F_s + eps * s.U_s * (s.W_s + beta * s.U_s);
    if (denom > 0.0) c = std::max(c, s.dt_eta_inf / denom);
  }
  return c;
}

double difference_energy(const State& a, const State& b, const ModelParams& params) {
  const State diff = a - b;
  double e = diff.l2_norm();
  e *= e;
  for (const Field* f : diff.components()) {
    const double coef = f == &diff.eta ? params.b : params.d;
    for (int ax = 0; ax < diff.dim(); ++ax) {
      const double n = derivative(*f, ax).l2_norm();
      e += coef * coef * n * n;
    }
  }
  return std::sqrt(e);
}

double stability_rate(const State& sol1, const State& sol2, const CoefficientFields& coeffs,
                      const ModelParams& params) {
  validate_state(sol1, "stability_rate");
  validate_state(sol2, "stability_rate");
  const double denom = std::max(std::sqrt(params.b), std::sqrt(params.d));
  if (!(denom > 0.0)) throw DomainError("stability rate needs b + d > 0");
  const GridSpec& g = sol1.grid();
  const int dim = g.dim;
  const double eps = params.eps;
  const double beta = params.beta;

  const auto div_sup = [&](const std::optional<std::vector<Field>>& w, const State& sol) {
    Field div(g);
    for (int l = 0; l < dim; ++l) {
      Field comp = sol.velocity[l];
      comp *= beta;
      if (w) comp += (*w)[l];
      div += derivative(comp, l);
    }
    return div.max_abs();
  };
  double w3_grad = 0.0;
  {
    std::vector<Field> comps;
    for (int k = 0; k < dim; ++k) {
      Field comp = sol2.velocity[k];
      comp *= beta;
      if (coeffs.w3) comp += (*coeffs.w3)[k];
      comps.push_back(std::move(comp));
    }
    Field frob(g);
    for (const Field& c : comps) {
      for (int l = 0; l < dim; ++l) {
        const Field d = derivative(c, l);
        frob += pointwise_product(d, d);
      }
    }
    for (double v : frob.data()) w3_grad = std::max(w3_grad, std::sqrt(v));
  }
  Field h = sol2.eta;
  h *= beta;
  if (coeffs.h) h += *coeffs.h;

  return eps * div_sup(coeffs.w1, sol1) + eps * div_sup(coeffs.w2, sol1) + eps * w3_grad +
         std::sqrt(eps) * (h.max_abs() + grad_sup(h)) / denom;
}

}  // namespace bbm
