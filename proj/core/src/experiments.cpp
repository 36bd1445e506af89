#include "bbmlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "bbmlab/errors.hpp"
#include "bbmlab/field_io.hpp"
#include "bbmlab/spectral.hpp"
#include "bbmlab/svg.hpp"
#include "bbmlab_version.hpp"

namespace bbm {

using nlohmann::json;

std::string version_string() { return BBMLAB_VERSION_STRING; }

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double relative_l2(const State& a, const State& ref) {
  const double den = ref.l2_norm();
  const double num = (a - ref).l2_norm();
  return den > 0.0 ? num / den : num;
}

Field localized_profile(const InitConfig& init, const GridSpec& grid) {
  if (init.kind == "gaussian") return gaussian_bump(grid, init.amplitude, init.width, init.center);
  if (init.kind == "sech2") {
    if (!(init.width > 0.0)) throw ConfigError("width must be positive", "init.width");
    return Field::from_function(grid, [&](double x, double) {
      const double c = 1.0 / std::cosh((x - init.center) / init.width);
      return init.amplitude * c * c;
    });
  }
  return Field(grid);
}

BoreField bore_component(const InitConfig& init, const GridSpec& line, double lo, double hi,
                         bool use_samples) {
  BoreProfile p;
  p.kind = use_samples ? BoreKind::custom_samples : parse_bore_kind(init.kind);
  p.left_limit = lo;
  p.right_limit = hi;
  p.steepness = init.steepness;
  p.center = init.center;
  if (use_samples) {
    const Field f = load_field(*init.samples_file);
    if (f.grid() != line) {
      throw ConfigError("samples do not match the grid's x axis", "init.samples_file");
    }
    p.samples = f.data();
  }
  return make_bore(p, line);
}

PipelineOptions pipeline_options(const RunConfig& c,
                                 const std::function<void(double, const State&)>& on_record) {
  PipelineOptions o;
  o.params = c.params;
  o.solver = c.solver;
  o.ledger = c.ledger;
  o.on_record = on_record;
  return o;
}

double effective_beta(const RunConfig& c) { return c.pipeline == PipelineKind::direct ? c.params.beta : 1.0; }

}  // namespace

double mass_integral(const Field& eta) {
  const GridSpec& g = eta.grid();
  double cell = g.spacing(0);
  if (g.dim == 2) cell *= g.spacing(1);
  double sum = 0.0;
  for (double v : eta.data()) sum += v;
  return sum * cell;
}

InitialData build_initial(const RunConfig& config) {
  const GridSpec& grid = config.grid;
  const GridSpec line = config.line_grid();
  const InitConfig& init = config.init;
  InitialData out;

  Field eta_line(line);
  Field u_line(line);
  if (init.is_bore()) {
    const bool samples = init.kind == "custom-samples";
    const BoreField eta = bore_component(init, line, init.eta_minus, init.eta_plus, samples);
    eta_line = eta.field;
    out.buffer = eta.buffer;
    if (init.u_minus != init.u_plus) {
      InitConfig shape = init;
      if (samples) shape.kind = "tanh";
      const BoreField u = bore_component(shape, line, init.u_minus, init.u_plus, false);
      u_line = u.field;
      if (!out.buffer.active) out.buffer = u.buffer;
    } else {
      u_line = Field::constant(line, init.u_minus);
    }
  } else if (config.pipeline != PipelineKind::direct || grid.dim == 1) {
    eta_line = localized_profile(init, line);
    u_line = init.right_moving ? eta_line : Field::constant(line, init.u_minus);
  }

  Field phi(grid);
  if (init.perturbation) {
    phi = gaussian_bump(grid, init.perturbation->amplitude, init.perturbation->width, init.perturbation->center);
  }

  switch (config.pipeline) {
    case PipelineKind::direct: {
      if (grid.dim == 1) {
        out.total = State{eta_line + phi, {u_line}};
      } else if (init.is_bore()) {
        out.total = State{extend_along_y(eta_line, grid) + phi, {extend_along_y(u_line, grid), Field(grid)}};
      } else {
        Field eta = localized_profile(init, grid);
        Field u = init.right_moving ? eta : Field::constant(grid, init.u_minus);
        out.total = State{eta + phi, {u, Field(grid)}};
      }
      break;
    }
    case PipelineKind::bore_1d: {
      eta_line += phi;
      out.eta_line = eta_line;
      out.u_line = u_line;
      out.total = State{eta_line, {u_line}};
      break;
    }
    case PipelineKind::bore_2d: {
      out.eta_line = eta_line;
      out.u_line = u_line;
      out.composed = compose_2d(eta_line, u_line, phi, {Field(grid), Field(grid)});
      out.total = out.composed->total;
      break;
    }
  }
  return out;
}

RunOutcome execute(const RunConfig& config, const std::function<void(double, const State&)>& on_record) {
  config.validate();
  const InitialData init = build_initial(config);
  const PipelineOptions opts = pipeline_options(config, on_record);
  const auto start = std::chrono::steady_clock::now();

  RunOutcome out;
  switch (config.pipeline) {
    case PipelineKind::direct:
      out.result = solve_direct(init.total, CoefficientSet{}, opts, init.buffer);
      break;
    case PipelineKind::bore_1d:
      out.result = solve_1d_bore(*init.eta_line, *init.u_line, opts, init.buffer);
      break;
    case PipelineKind::bore_2d:
      out.result = solve_2d_bore(*init.composed, opts, init.buffer);
      break;
  }
  out.wall_seconds = seconds_since(start);
  out.initial_total = init.total;

  const double m0 = mass_integral(init.total.eta);
  const double m1 = mass_integral(out.result.final_total.eta);
  const double scale = init.total.eta.l2_norm();
  out.mass_drift = std::abs(m1 - m0) / (scale > 0.0 ? scale : 1.0);

  const EnergyLedger& led = out.result.ledger;
  if (!led.samples.empty()) {
    std::vector<double> ts;
    std::vector<double> us;
    for (const LedgerSample& s : led.samples) {
      ts.push_back(s.t);
      us.push_back(s.U_s);
    }
    out.t_star = t_star_measure(ts, us, us.front(), config.ledger.threshold_factor);
    if (!out.t_star.crossed) out.t_star.time = out.result.t;
    const double beta = effective_beta(config);
    out.C_inequality = fit_inequality_constant(led, config.params.eps, beta, config.ledger.s);
    out.inequality = inequality_audit(led, out.C_inequality, config.params.eps, beta, config.ledger.s,
                                      config.ledger.stride);
    out.C_time_derivative = fit_time_derivative_constant(led, config.params.eps, beta);
  }
  return out;
}

json run_record(const RunConfig& config, const RunOutcome& o) {
  const EnergyLedger& led = o.result.ledger;
  json final_norms = json::object();
  double leak = 0.0;
  double sup_u = 0.0;
  for (const LedgerSample& s : led.samples) {
    leak = std::max(leak, s.buffer_leak);
    sup_u = std::max(sup_u, s.U_s);
  }
  if (!led.samples.empty()) {
    const LedgerSample& first = led.samples.front();
    const LedgerSample& last = led.samples.back();
    final_norms = {{"U_s_initial", first.U_s},
                   {"U_s", last.U_s},
                   {"U_s_sup", sup_u},
                   {"max_eta", last.max_eta},
                   {"U_inf", last.U_inf},
                   {"e_norm_total", finite_or_null(last.e_norm_total)},
                   {"blowup_integral", last.blowup_integral}};
  }
  final_norms["l2_total"] = o.result.final_total.l2_norm();
  final_norms["sup_total"] = o.result.final_total.max_abs();
  final_norms["mass_drift"] = o.mass_drift;

  json t_star = nullptr;
  if (o.t_star.crossed) t_star = {{"time", o.t_star.time}, {"threshold", o.t_star.threshold}};

  return {
      {"schema_version", kRecordSchemaVersion},
      {"version", version_string()},
      {"config", config.echo},
      {"wall_time_s", o.wall_seconds},
      {"termination",
       {{"reason", to_string(o.result.reason)},
        {"exit_code", exit_code(o.result.reason)},
        {"t", o.result.t},
        {"steps", o.result.steps},
        {"message", o.result.message}}},
      {"t_star", t_star},
      {"final_norms", final_norms},
      {"fitted_constants",
       {{"C_inequality", o.C_inequality},
        {"inequality_fraction", o.inequality.fraction},
        {"inequality_checked", o.inequality.checked},
        {"C_time_derivative", o.C_time_derivative}}},
      {"ledger",
       {{"samples", led.samples.size()},
        {"threshold", led.threshold},
        {"blowup_flag_time", led.blowup_flag_time ? json(*led.blowup_flag_time) : json(nullptr)},
        {"window_violations", led.window_violations},
        {"max_buffer_leak", leak}}},
  };
}

namespace {

void compare_json(const json& g, const json& r, const std::string& path, double rtol, double atol,
                  const std::set<std::string>& ignore, std::vector<std::string>& out) {
  if (g.is_object()) {
    if (!r.is_object()) {
      out.push_back(path + ": expected an object");
      return;
    }
    for (const auto& [k, v] : g.items()) {
      if (ignore.count(k)) continue;
      const std::string p = path.empty() ? k : path + "." + k;
      if (!r.contains(k)) {
        out.push_back(p + ": missing");
        continue;
      }
      compare_json(v, r.at(k), p, rtol, atol, ignore, out);
    }
  } else if (g.is_array()) {
    if (!r.is_array() || r.size() != g.size()) {
      out.push_back(path + ": array length differs");
      return;
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      compare_json(g[i], r[i], path + "[" + std::to_string(i) + "]", rtol, atol, ignore, out);
    }
  } else if (g.is_number()) {
    if (!r.is_number()) {
      out.push_back(path + ": expected a number");
      return;
    }
    const double a = g.get<double>();
    const double b = r.get<double>();
    if (std::abs(a - b) > atol + rtol * std::abs(a)) {
      std::ostringstream os;
      os << path << ": golden " << format_double(a) << ", got " << format_double(b);
      out.push_back(os.str());
    }
  } else if (g != r) {
    out.push_back(path + ": golden " + g.dump() + ", got " + r.dump());
  }
}

PlotSeries profile_series(const std::string& label, const Field& eta) {
  const GridSpec& g = eta.grid();
  PlotSeries s{label, {}, {}};
  const std::size_t row = g.dim == 2 ? g.ny() / 2 : 0;
  for (std::size_t ix = 0; ix < g.nx(); ++ix) {
    s.x.push_back(g.coordinate(0, ix));
    s.y.push_back(g.dim == 2 ? eta.at(ix, row) : eta[ix]);
  }
  return s;
}

}  // namespace

std::vector<std::string> compare_records(const json& golden, const json& record, double rtol, double atol,
                                         const std::set<std::string>& ignore) {
  std::vector<std::string> out;
  compare_json(golden, record, "", rtol, atol, ignore, out);
  return out;
}

void write_run_outputs(const RunConfig& config, const RunOutcome& outcome, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const EnergyLedger& led = outcome.result.ledger;
  {
    std::ofstream os(dir / "ledger.csv");
    led.write_csv(os);
  }
  {
    std::ofstream os(dir / "diagnostics.csv");
    led.write_diagnostics_csv(os, config.ledger.blocks);
  }
  {
    std::ofstream os(dir / "record.json");
    os << run_record(config, outcome).dump(2) << '\n';
  }
  if (config.output.svg) {
    PlotSpec plot;
    plot.title = "Stacked energy U_s(t), " + to_string(config.pipeline) + " pipeline";
    plot.x_label = "t";
    plot.y_label = "U_s";
    PlotSeries s{"U_s", {}, {}};
    for (const LedgerSample& smp : led.samples) {
      s.x.push_back(smp.t);
      s.y.push_back(smp.U_s);
    }
    plot.series.push_back(std::move(s));
    plot.reference_line = led.threshold;
    plot.reference_label = "threshold";
    std::ofstream os(dir / "energy.svg");
    write_svg_plot(plot, os);
  }
  if (config.output.snapshots) {
    save_field(outcome.initial_total.eta, dir / "eta_initial.bin");
    save_field(outcome.result.final_total.eta, dir / "eta_final.bin");
    for (std::size_t k = 0; k < outcome.result.final_total.velocity.size(); ++k) {
      save_field(outcome.result.final_total.velocity[k], dir / ("velocity" + std::to_string(k) + "_final.bin"));
    }
    if (config.output.svg) {
      PlotSpec plot;
      plot.title = config.grid.dim == 2 ? "Surface elevation along y = 0" : "Surface elevation";
      plot.x_label = "x";
      plot.y_label = "eta";
      plot.series.push_back(profile_series("t = 0", outcome.initial_total.eta));
      plot.series.push_back(profile_series("t = " + format_double(outcome.result.t), outcome.result.final_total.eta));
      std::ofstream os(dir / "snapshots.svg");
      write_svg_plot(plot, os);
    }
  }
}

// ---------------------------------------------------------------------------

std::vector<double> validate_sweep_values(std::vector<double> eps) {
  if (eps.size() < 3) throw ConfigError("an eps sweep needs at least three values", "sweep.eps");
  for (double e : eps) {
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("eps values must be positive", "sweep.eps");
  }
  std::sort(eps.begin(), eps.end(), std::greater<>());
  for (std::size_t i = 1; i < eps.size(); ++i) {
    if (eps[i] == eps[i - 1]) {
      throw ConfigError("duplicate eps value " + format_double(eps[i]), "sweep.eps");
    }
  }
  return eps;
}

SweepFit fit_log_log(const std::vector<SweepPoint>& points) {
  std::vector<double> x;
  std::vector<double> y;
  for (const SweepPoint& p : points) {
    if (!p.crossed || p.reason == Termination::blowup || !(p.t_star > 0.0)) continue;
    x.push_back(std::log(1.0 / p.eps));
    y.push_back(std::log(p.t_star));
  }
  SweepFit fit;
  fit.used = static_cast<int>(x.size());
  if (x.size() < 2) return fit;
  const double n = static_cast<double>(x.size());
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) return fit;
  fit.available = true;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

SweepResult sweep_eps(const RunConfig& base, const std::vector<double>& eps_values, int threads,
                      HorizonMode mode) {
  const std::vector<double> eps = validate_sweep_values(eps_values);
  std::vector<RunConfig> configs;
  for (double e : eps) {
    RunConfig c = base;
    c.params.eps = e;
    if (mode == HorizonMode::inverse_eps) c.solver.t_end = 1.0 / e;
    c.validate();
    c.echo["params"]["eps"] = e;
    c.echo["solver"]["t_end"] = c.solver.t_end;
    configs.push_back(std::move(c));
  }

  SweepResult result;
  result.points.resize(eps.size());
  std::vector<std::exception_ptr> errors(eps.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        const RunOutcome o = execute(configs[i]);
        SweepPoint& p = result.points[i];
        p.eps = eps[i];
        p.horizon = configs[i].solver.t_end;
        p.crossed = o.t_star.crossed;
        p.t_star = o.t_star.crossed ? o.t_star.time : o.result.t;
        p.reason = o.result.reason;
        p.message = o.result.message;
        double sup = 0.0;
        for (const LedgerSample& s : o.result.ledger.samples) sup = std::max(sup, s.U_s);
        const double u0 = o.result.ledger.samples.empty() ? 0.0 : o.result.ledger.samples.front().U_s;
        p.margin = u0 > 0.0 ? sup / u0 : 0.0;
        p.ledger = o.result.ledger;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::clamp(threads, 1, static_cast<int>(configs.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  result.fit = fit_log_log(result.points);
  return result;
}

std::vector<ConvergenceRow> dt_convergence(const std::function<State(double)>& solve,
                                           const std::vector<double>& dts, double reference_dt) {
  if (dts.empty()) throw ConfigError("convergence study needs at least one step size", "conv.dt");
  const State ref = solve(reference_dt);
  std::vector<ConvergenceRow> rows;
  for (double dt : dts) {
    ConvergenceRow row{dt, relative_l2(solve(dt), ref), std::nan("")};
    if (!rows.empty()) {
      row.order = std::log(rows.back().error / row.error) / std::log(rows.back().parameter / dt);
    }
    rows.push_back(row);
  }
  return rows;
}

namespace {

RunConfig quiet_copy(const RunConfig& config) {
  RunConfig c = config;
  c.ledger.stride = std::max(c.solver.t_end, c.ledger.stride);
  c.ledger.abort_on_leak = false;
  c.ledger.halt_on_threshold = false;
  return c;
}

}  // namespace

std::vector<ConvergenceRow> dt_convergence(const RunConfig& config, const std::vector<double>& dts,
                                           std::optional<double> reference_dt) {
  const RunConfig base = quiet_copy(config);
  const double ref = reference_dt.value_or(*std::min_element(dts.begin(), dts.end()) / 16.0);
  return dt_convergence(
      [&](double dt) {
        RunConfig c = base;
        c.solver.dt = dt;
        return execute(c).result.final_total;
      },
      dts, ref);
}

std::vector<ConvergenceRow> friedrichs_convergence(const std::function<State(double)>& solve,
                                                   const std::vector<double>& ms) {
  if (ms.empty()) throw ConfigError("convergence study needs at least one cutoff", "conv.m");
  std::vector<double> sorted = ms;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, State>> cache;
  const auto get = [&](double m) -> const State& {
    for (const auto& [key, s] : cache) {
      if (key == m) return s;
    }
    cache.emplace_back(m, solve(m));
    return cache.back().second;
  };
  std::vector<ConvergenceRow> rows;
  for (double m : sorted) {
    const State coarse = get(m);
    ConvergenceRow row{m, relative_l2(coarse, get(2.0 * m)), std::nan("")};
    if (!rows.empty()) {
      row.order = std::log(rows.back().error / row.error) / std::log(m / rows.back().parameter);
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<ConvergenceRow> friedrichs_convergence(const RunConfig& config, const std::vector<double>& ms) {
  const RunConfig base = quiet_copy(config);
  return friedrichs_convergence(
      [&](double m) {
        RunConfig c = base;
        c.solver.friedrichs_m = m;
        return execute(c).result.final_total;
      },
      ms);
}

double max_wavenumber(const GridSpec& grid) {
  double k2 = 0.0;
  for (int a = 0; a < grid.dim; ++a) {
    const double k = std::numbers::pi * static_cast<double>(grid.points[a]) / grid.length[a];
    k2 += k * k;
  }
  return std::sqrt(k2);
}

// ---------------------------------------------------------------------------

StabilityReport stability_experiment(const RunConfig& config, double noise, std::uint64_t seed) {
  if (config.grid.dim != 1) throw ConfigError("stability experiment runs on a 1D grid", "grid.dim");
  if (!(noise > 0.0)) throw ConfigError("noise amplitude must be positive", "stability.noise");
  ModelParams params = config.params;
  params.beta = 1.0;
  params.validate();
  config.solver.validate(params, config.grid);
  const GridSpec& grid = config.grid;

  const InitialData init = build_initial(config);
  const DyadicPartition part = build_partition(grid);
  const SplitData split = low_high_split(init.total, part);
  const WaveBackground bg(split.low.eta, split.low.velocity[0]);
  BoreBackgroundCache cache(bg, params.b, params.d);
  const RhsEvaluator rhs(grid, params, config.solver);

  const auto band_noise = [&](std::uint64_t s) {
    Field f = truncate_to_band(random_field(grid, s));
    f *= noise / f.max_abs();
    return f;
  };
  const State p1 = split.high;
  const State p2 = p1 + State{band_noise(seed), {band_noise(seed + 1)}};

  StabilityReport rep;
  const BundleRhs f = [&](double t, const Bundle& y) {
    const CoefficientFields& c = cache.at(t).coeffs;
    return Bundle{rhs(y[0], t, c), rhs(y[1], t, c)};
  };
  const Observer obs = [&](double t, const Bundle& y, long) -> std::optional<Termination> {
    rep.t.push_back(t);
    rep.delta_U.push_back(difference_energy(y[0], y[1], params));
    rep.kappa0.push_back(stability_rate(y[0], y[1], cache.at(t).coeffs, params));
    return std::nullopt;
  };
  integrate(Bundle{p1, p2}, f, config.solver, record_interval(config.ledger.stride, config.solver.dt), obs);

  rep.kappa_integral.assign(rep.t.size(), 0.0);
  for (std::size_t i = 1; i < rep.t.size(); ++i) {
    rep.kappa_integral[i] =
        rep.kappa_integral[i - 1] + 0.5 * (rep.t[i] - rep.t[i - 1]) * (rep.kappa0[i] + rep.kappa0[i - 1]);
  }
  const double d0 = rep.delta_U.front();
  const double t_cal = 0.5 * rep.t.back();
  for (std::size_t i = 1; i < rep.t.size() && rep.t[i] <= t_cal + 1e-12; ++i) {
    if (rep.kappa_integral[i] > 0.0 && rep.delta_U[i] > d0) {
      rep.C_fit = std::max(rep.C_fit, 2.0 * std::log(rep.delta_U[i] / d0) / rep.kappa_integral[i]);
    }
  }
  for (std::size_t i = 0; i < rep.t.size(); ++i) {
    rep.margin = std::max(rep.margin, rep.delta_U[i] / (d0 * std::exp(0.5 * rep.C_fit * rep.kappa_integral[i])));
    rep.margin_unit_C = std::max(rep.margin_unit_C, rep.delta_U[i] / (d0 * std::exp(0.5 * rep.kappa_integral[i])));
  }
  return rep;
}

DecompositionReport decomposition_consistency(const RunConfig& config) {
  if (config.pipeline != PipelineKind::bore_2d) {
    throw ConfigError("decomposition check needs the 2d-bore pipeline", "pipeline");
  }
  config.validate();
  const InitialData init = build_initial(config);
  PipelineOptions opts = pipeline_options(config, {});
  opts.ledger.abort_on_leak = false;
  opts.ledger.halt_on_threshold = false;
  opts.ledger.stride = std::max(opts.ledger.stride, config.solver.t_end);

  DecompositionReport rep;
  auto start = std::chrono::steady_clock::now();
  rep.composed = solve_2d_bore(*init.composed, opts, init.buffer);
  rep.composed_seconds = seconds_since(start);

  opts.params.beta = 1.0;
  start = std::chrono::steady_clock::now();
  const PipelineResult direct = solve_direct(init.total, CoefficientSet{}, opts, init.buffer);
  rep.direct_seconds = seconds_since(start);
  rep.relative_error = relative_l2(rep.composed.final_total, direct.final_total);
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

using CheckFn = VerifyCheck (*)();

VerifyCheck check_partition_unity() {
  double worst = 0.0;
  for (const GridSpec& g : {GridSpec::line(2.0 * std::numbers::pi, 1024), GridSpec::plane(40.0, 40.0, 64, 64)}) {
    worst = std::max(worst, partition_residuals(build_partition(g)).unity_residual);
  }
  return {"partition_unity", false, worst, 1e-12, "max |chi + sum phi - 1| on lattice"};
}

VerifyCheck check_partition_bracket() {
  const PartitionResiduals r = partition_residuals(build_partition(GridSpec::line(80.0, 1024)));
  const double dev = std::max({0.5 - r.square_sum_min, r.square_sum_max - 1.0, r.disjoint_supports ? 0.0 : 1.0, 0.0});
  return {"partition_bracket", false, dev, 1e-12, "1/2 <= chi^2 + sum phi^2 <= 1, disjoint supports"};
}

VerifyCheck check_bernstein() {
  const BernsteinReport r = bernstein_audit(build_partition(GridSpec::line(2.0 * std::numbers::pi, 512)), 3, 100, 7);
  const double out = std::max({r.lower - r.min_ratio, r.max_ratio - r.upper, 0.0});
  return {"bernstein", false, out, 1e-12 * r.upper, "100 random j = 3 blocks, N = 512"};
}

VerifyCheck check_transform() {
  const Field f = random_field(GridSpec::plane(3.0, 5.0, 32, 16), 11);
  const double err = (inverse_transform(transform(f)) - f).l2_norm() / f.l2_norm();
  return {"transform_roundtrip", false, err, 1e-12, "forward then inverse transform, 2D"};
}

VerifyCheck check_parseval() {
  const Field f = random_field(GridSpec::line(5.0, 256), 12);
  const double err = std::abs(spectral_l2_norm(transform(f)) - f.l2_norm()) / f.l2_norm();
  return {"parseval", false, err, 1e-12, "spectral vs nodal L2 norm"};
}

VerifyCheck check_helmholtz() {
  double worst = 0.0;
  for (const Complex& v : inverse_helmholtz_op(GridSpec::line(10.0, 256), 0.3).symbol) {
    worst = std::max(worst, std::abs(v) - 1.0);
  }
  return {"helmholtz_contraction", false, std::max(worst, 0.0), 1e-15, "symbol of (I - c Lap)^-1 within (0, 1]"};
}

VerifyCheck check_dealias() {
  const GridSpec g = GridSpec::line(2.0 * std::numbers::pi, 24);
  const Field m = Field::from_function(g, [](double x, double) { return std::cos(7.0 * x); });
  const Field p = dealias_product(m, m);
  double err = 0.0;
  for (double v : p.data()) err = std::max(err, std::abs(v - 0.5));
  return {"dealias", false, err, 1e-12, "cos(7x)^2 on N = 24 keeps only the mean"};
}

VerifyCheck check_rhs_mms() {
  // eta = A cos(x - t), u = A sin(x - t) solve the system with a forcing built by hand.
  const GridSpec g = GridSpec::line(2.0 * std::numbers::pi, 256);
  ModelParams p;
  p.b = 0.2;
  p.d = 0.3;
  p.eps = 0.5;
  const double a = 0.1;
  const double t = 0.7;
  const double e = p.eps;
  const auto th = [t](double x) { return x - t; };
  const State s{Field::from_function(g, [&](double x, double) { return a * std::cos(th(x)); }),
                {Field::from_function(g, [&](double x, double) { return a * std::sin(th(x)); })}};
  CoefficientFields c;
  c.f = Field::from_function(g, [&](double x, double) {
    return (a * (1 + e * p.b) * std::sin(th(x)) + a * std::cos(th(x)) + e * a * a * std::cos(2 * th(x))) / e;
  });
  c.g = std::vector<Field>{Field::from_function(g, [&](double x, double) {
    return (-a * (1 + e * p.d) * std::cos(th(x)) - a * std::sin(th(x)) + e * 0.5 * a * a * std::sin(2 * th(x))) / e;
  })};
  SolverConfig sc;
  sc.dt = 1e-3;
  const State rate = RhsEvaluator(g, p, sc)(s, t, c);
  const State exact{Field::from_function(g, [&](double x, double) { return a * std::sin(th(x)); }),
                    {Field::from_function(g, [&](double x, double) { return -a * std::cos(th(x)); })}};
  return {"rhs_mms", false, (rate - exact).max_abs(), 1e-10, "manufactured solution residual, N = 256"};
}

VerifyCheck check_dalembert() {
  const GridSpec g = GridSpec::line(20.0, 64);
  ModelParams p;
  p.b = 1.0 / 6;
  p.d = 1.0 / 6;
  p.eps = 0.0;
  const Field eta = truncate_to_band(gaussian_bump(g, 0.5, 1.5));
  const Field u = truncate_to_band(gaussian_bump(g, 0.2, 1.0, 3.0));
  PipelineOptions o;
  o.params = p;
  o.solver.dt = 1e-3;
  o.solver.t_end = 1.0;
  o.ledger.stride = 1.0;
  const PipelineResult r = solve_direct(State{eta, {u}}, CoefficientSet{}, o);
  const auto [el, ul] = dalembert_evolve(WaveBackground(eta, u), r.t);
  const double err = std::max((r.final_total.eta - el).max_abs(), (r.final_total.velocity[0] - ul).max_abs());
  return {"dalembert", false, err, 1e-8, "eps = 0 solver against the exact propagator, t = 1"};
}

VerifyCheck check_mass() {
  const GridSpec g = GridSpec::line(40.0, 128);
  PipelineOptions o;
  o.params.b = 1.0 / 6;
  o.params.d = 1.0 / 6;
  o.params.eps = 0.3;
  o.solver.dt = 0.02;
  o.solver.t_end = 2.0;
  o.ledger.stride = 1.0;
  const State s0{gaussian_bump(g, 0.4, 2.0), {gaussian_bump(g, 0.1, 1.0, -2.0)}};
  const PipelineResult r = solve_direct(s0, CoefficientSet{}, o);
  const double drift = std::abs(mass_integral(r.final_total.eta) - mass_integral(s0.eta)) / s0.eta.l2_norm();
  return {"mass_conservation", false, drift, 1e-10, "relative drift of int eta over a short direct run"};
}

VerifyCheck check_bootstrap() {
  const BootstrapConstants c = bootstrap_constants(BootstrapInputs{});
  const double t = 1.0 + std::exp(1.0) * std::sqrt(7.0);
  const double eps01 = 3.0 / (4.0 * t + 4.0);
  const double ct = std::min({1.0 / (3.0 * std::exp(1.0)), 1.0 / (16.0 * t), 1.0 / 16.0});
  const double err = std::max(std::abs(c.eps0_candidates[0] - eps01) / eps01, std::abs(c.c_tilde - ct) / ct);
  return {"bootstrap", false, err, 1e-12, "all-ones constants against the closed forms"};
}

VerifyCheck check_ledger_csv() {
  EnergyLedger led;
  for (int i = 0; i < 5; ++i) {
    LedgerSample s;
    s.t = 0.1 * i;
    s.U_s = 1.0 / (3.0 + i);
    s.max_eta = std::exp(-i);
    led.samples.push_back(s);
  }
  std::ostringstream a;
  led.write_csv(a);
  std::istringstream in(a.str());
  std::ostringstream b;
  EnergyLedger::read_csv(in).write_csv(b);
  return {"ledger_csv_roundtrip", false, a.str() == b.str() ? 0.0 : 1.0, 0.0, "write, read, write is byte-identical"};
}

VerifyCheck check_modified_energy() {
  const GridSpec g = GridSpec::line(10.0, 128);
  const DyadicPartition part = build_partition(g);
  ModelParams p;
  p.b = 1.0 / 6;
  p.d = 1.0 / 6;
  p.eps = 1.0;
  Field eta = random_field(g, 31);
  eta *= 0.7 / eta.max_abs();
  const State s{eta, {random_field(g, 32)}};
  const ModifiedEnergy me = modified_energy(s, p, nullptr, part);
  const auto u = block_energies(s, EnergyWeights{p.b, p.d, p.eps, 0.0}, part);
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    worst = std::max({worst, 0.5 * u[i] - me.N_j[i], me.N_j[i] - 0.5 * std::sqrt(7.0) * u[i]});
  }
  return {"modified_energy_bracket", false, std::max(worst, 0.0), 1e-12, "U_j / 2 <= N_j <= sqrt(7) U_j / 2"};
}

struct Entry {
  const char* name;
  CheckFn fn;
};

const Entry kChecks[] = {
    {"partition_unity", check_partition_unity},
    {"partition_bracket", check_partition_bracket},
    {"bernstein", check_bernstein},
    {"transform_roundtrip", check_transform},
    {"parseval", check_parseval},
    {"helmholtz_contraction", check_helmholtz},
    {"dealias", check_dealias},
    {"rhs_mms", check_rhs_mms},
    {"dalembert", check_dalembert},
    {"mass_conservation", check_mass},
    {"bootstrap", check_bootstrap},
    {"ledger_csv_roundtrip", check_ledger_csv},
    {"modified_energy_bracket", check_modified_energy},
};

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const Entry& e : kChecks) out.emplace_back(e.name);
    return out;
  }();
  return names;
}

std::vector<VerifyCheck> run_verify(const std::set<std::string>& inject) {
  for (const std::string& name : inject) {
    const auto& names = verify_suite_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw ConfigError("unknown check '" + name + "'", "inject");
    }
  }
  std::vector<VerifyCheck> out;
  for (const Entry& e : kChecks) {
    VerifyCheck c;
    try {
      c = e.fn();
      if (inject.count(c.name)) {
        c.value += 1.0;
        c.detail += " [fault injected]";
      }
      c.pass = std::isfinite(c.value) && c.value <= c.tolerance;
    } catch (const std::exception& ex) {
      c = VerifyCheck{e.name, false, std::nan(""), 0.0, std::string("error: ") + ex.what()};
    }
    out.push_back(std::move(c));
  }
  return out;
}

json verify_report(const std::vector<VerifyCheck>& checks) {
  json list = json::array();
  bool all = true;
  for (const VerifyCheck& c : checks) {
    all = all && c.pass;
    list.push_back({{"name", c.name},
                    {"pass", c.pass},
                    {"value", finite_or_null(c.value)},
                    {"tolerance", c.tolerance},
                    {"detail", c.detail}});
  }
  return {{"schema_version", kRecordSchemaVersion},
          {"version", version_string()},
          {"pass", all},
          {"checks", list}};
}

}  // namespace bbm
