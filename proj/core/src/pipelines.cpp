#include "bbmlab/pipelines.hpp"

#include "bbmlab/errors.hpp"
#include "bbmlab/spectral.hpp"

namespace bbm {

const BoreBackgroundFields& BoreBackgroundCache::at(double t) {
  for (const auto& [time, fields] : entries_) {
    if (time == t) return fields;
  }
  if (entries_.size() == 4) entries_.pop_front();
  entries_.emplace_back(t, bore_background(bg_, t, b_, d_));
  return entries_.back().second;
}

BoreBackgroundFields bore_background(const WaveBackground& bg, double t, double b, double d) {
  auto [eta_l, u_l] = bg.evaluate(t);
  auto [f, g] = forcing_terms(eta_l, u_l, b, d);
  Field dt_h = derivative(u_l, 0);
  dt_h *= -1.0;
  BoreBackgroundFields out{eta_l, u_l, {}};
  out.coeffs.h = eta_l;
  out.coeffs.dt_h = std::move(dt_h);
  out.coeffs.w1 = std::vector<Field>{u_l};
  out.coeffs.w2 = std::vector<Field>{u_l};
  out.coeffs.w3 = std::vector<Field>{u_l};
  out.coeffs.f = std::move(f);
  out.coeffs.g = std::vector<Field>{std::move(g)};
  return out;
}

namespace {

void copy_outcome(const IntegrationResult& run, PipelineResult& out) {
  out.t = run.t;
  out.steps = run.steps;
  out.reason = run.reason;
  out.message = run.message;
}

ModelParams with_unit_beta(ModelParams p) {
  p.beta = 1.0;
  return p;
}

}  // namespace

PipelineResult solve_direct(const State& initial, const CoefficientSet& coeffs,
                            const PipelineOptions& opts, const BufferZone& buffer) {
  validate_state(initial, "solve_direct");
  const GridSpec& grid = initial.grid();
  opts.params.validate();
  opts.solver.validate(opts.params, grid);
  const DyadicPartition part = build_partition(grid);
  const RhsEvaluator rhs(grid, opts.params, opts.solver);
  LedgerRecorder recorder(opts.ledger, opts.params, part, buffer, initial);
  const EnergyWeights w{opts.params.b, opts.params.d, opts.params.eps, opts.ledger.s};

  const BundleRhs f = [&](double t, const Bundle& y) {
    return Bundle{rhs(y.front(), t, coeffs.at(t))};
  };
  const Observer obs = [&](double t, const Bundle& y, long) {
    const CoefficientFields c = coeffs.at(t);
    const State rate = rhs(y.front(), t, c);
    if (opts.on_record) opts.on_record(t, y.front());
    return recorder.record({t, y.front(), rate, c, e_norm(y.front(), w, part, opts.ledger.r)});
  };
  const IntegrationResult run =
      integrate(Bundle{initial}, f, opts.solver, record_interval(opts.ledger.stride, opts.solver.dt), obs);

  PipelineResult out;
  out.final_total = run.final_state.front();
  out.final_perturbation = run.final_state.front();
  out.ledger = recorder.take();
  copy_outcome(run, out);
  return out;
}

PipelineResult solve_1d_bore(const Field& eta0, const Field& u0, const PipelineOptions& opts,
                             const BufferZone& buffer) {
  require_same_grid(eta0.grid(), u0.grid(), "solve_1d_bore");
  const GridSpec& grid = eta0.grid();
  if (grid.dim != 1) throw ConfigError("solve_1d_bore needs a 1D grid", "grid.dim");
  const ModelParams params = with_unit_beta(opts.params);
  params.validate();
  opts.solver.validate(params, grid);

  const DyadicPartition part = build_partition(grid);
  const SplitData split = low_high_split(State{eta0, {u0}}, part);
  const WaveBackground bg(split.low.eta, split.low.velocity[0]);
  BoreBackgroundCache cache(bg, params.b, params.d);
  const RhsEvaluator rhs(grid, params, opts.solver);
  LedgerRecorder recorder(opts.ledger, params, part, buffer, split.high);
  const EnergyWeights w{params.b, params.d, params.eps, opts.ledger.s};

  const auto total = [&](const State& p, const BoreBackgroundFields& bgf) {
    return State{p.eta + bgf.eta_l, {p.velocity[0] + bgf.u_l}};
  };
  const BundleRhs f = [&](double t, const Bundle& y) {
    return Bundle{rhs(y.front(), t, cache.at(t).coeffs)};
  };
  const Observer obs = [&](double t, const Bundle& y, long) {
    const BoreBackgroundFields& bgf = cache.at(t);
    const State rate = rhs(y.front(), t, bgf.coeffs);
    const State full = total(y.front(), bgf);
    if (opts.on_record) opts.on_record(t, full);
    return recorder.record({t, y.front(), rate, bgf.coeffs, e_norm(full, w, part, opts.ledger.r)});
  };
  const IntegrationResult run = integrate(Bundle{split.high}, f, opts.solver,
                                          record_interval(opts.ledger.stride, opts.solver.dt), obs);

  PipelineResult out;
  out.final_perturbation = run.final_state.front();
  out.final_total = total(out.final_perturbation, cache.at(run.t));
  out.ledger = recorder.take();
  copy_outcome(run, out);
  return out;
}

PipelineResult solve_2d_bore(const ComposedState& data, const PipelineOptions& opts,
                             const BufferZone& buffer) {
  const GridSpec& line = data.line.grid();
  const GridSpec& plane = data.perturbation.grid();
  validate_state(data.line, "solve_2d_bore");
  validate_state(data.perturbation, "solve_2d_bore");
  if (line.dim != 1 || plane.dim != 2 || line.points[0] != plane.points[0] ||
      line.length[0] != plane.length[0]) {
    throw ConfigError("solve_2d_bore: the 1D grid must match the x axis of the 2D grid");
  }
  const ModelParams params = with_unit_beta(opts.params);
  params.validate();
  opts.solver.validate(params, plane);

  const DyadicPartition part1 = build_partition(line);
  const DyadicPartition part2 = build_partition(plane);
  const SplitData split = low_high_split(data.line, part1);
  const WaveBackground bg(split.low.eta, split.low.velocity[0]);
  BoreBackgroundCache cache(bg, params.b, params.d);
  const RhsEvaluator rhs1(line, params, opts.solver);
  const RhsEvaluator rhs2(plane, params, opts.solver);
  LedgerRecorder recorder(opts.ledger, params, part2, buffer, data.perturbation);
  const EnergyWeights w{params.b, params.d, params.eps, opts.ledger.s};

  const auto line_total = [&](const State& p1, const BoreBackgroundFields& bgf) {
    return State{p1.eta + bgf.eta_l, {p1.velocity[0] + bgf.u_l}};
  };
  const auto plane_coeffs = [&](const State& full_line) {
    CoefficientFields c;
    c.h = extend_along_y(full_line.eta, plane);
    const std::vector<Field> W{extend_along_y(full_line.velocity[0], plane), Field(plane)};
    c.w1 = W;
    c.w2 = W;
    c.w3 = W;
    return c;
  };
  const BundleRhs f = [&](double t, const Bundle& y) {
    const BoreBackgroundFields& bgf = cache.at(t);
    const State full_line = line_total(y[0], bgf);
    return Bundle{rhs1(y[0], t, bgf.coeffs), rhs2(y[1], t, plane_coeffs(full_line))};
  };
  const auto compose = [&](const State& full_line, const State& p2) {
    return State{extend_along_y(full_line.eta, plane) + p2.eta,
                 {extend_along_y(full_line.velocity[0], plane) + p2.velocity[0], p2.velocity[1]}};
  };
  const Observer obs = [&](double t, const Bundle& y, long) {
    const BoreBackgroundFields& bgf = cache.at(t);
    const State full_line = line_total(y[0], bgf);
    CoefficientFields c = plane_coeffs(full_line);
    const State rate1 = rhs1(y[0], t, bgf.coeffs);
    Field dt_h = *bgf.coeffs.dt_h + rate1.eta;
    c.dt_h = extend_along_y(dt_h, plane);
    const State rate2 = rhs2(y[1], t, c);
    if (opts.on_record) opts.on_record(t, compose(full_line, y[1]));
    const double m_norm =
        e_norm(full_line, w, part1, opts.ledger.r) + stacked_norm(y[1], w, part2, opts.ledger.r).value;
    return recorder.record({t, y[1], rate2, c, m_norm});
  };
  const IntegrationResult run = integrate(Bundle{split.high, data.perturbation}, f, opts.solver,
                                          record_interval(opts.ledger.stride, opts.solver.dt), obs);

  PipelineResult out;
  const State full_line = line_total(run.final_state[0], cache.at(run.t));
  out.final_perturbation = run.final_state[1];
  out.final_total = compose(full_line, run.final_state[1]);
  out.final_line = full_line;
  out.ledger = recorder.take();
  copy_outcome(run, out);
  return out;
}

}  // namespace bbm
