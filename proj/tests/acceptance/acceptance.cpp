// Acceptance suite: one line per criterion, exit status 0 only if all pass.
//
//   acceptance [configs-dir] [--only N[,N...]]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bbmlab/bootstrap.hpp"
#include "bbmlab/config.hpp"
#include "bbmlab/experiments.hpp"
#include "bbmlab/littlewood_paley.hpp"
#include "bbmlab/pipelines.hpp"
#include "bbmlab/solver.hpp"
#include "oracles.hpp"

using namespace bbm;
using std::numbers::pi;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::filesystem::path g_configs;

// ---------------------------------------------------------------------------

Verdict partition_identities() {
  double unity = 0.0;
  double sq_lo = 1.0;
  double sq_hi = 0.0;
  bool disjoint = true;
  for (const GridSpec& g : {GridSpec::line(2.0 * pi, 1024), GridSpec::plane(2.0 * pi, 2.0 * pi, 256, 256)}) {
    const DyadicPartition part = build_partition(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      double sum = 0.0;
      double sq = 0.0;
      std::vector<int> live;
      for (int j = -1; j <= part.j_max(); ++j) {
        const double w = part.weights(j)[i];
        sum += w;
        sq += w * w;
        if (w != 0.0) live.push_back(j);
      }
      unity = std::max(unity, std::abs(sum - 1.0));
      sq_lo = std::min(sq_lo, sq);
      sq_hi = std::max(sq_hi, sq);
      // phi_j and phi_j' overlap only for |j - j'| <= 1 (block -1 included).
      if (live.size() > 2 || (live.size() == 2 && live[1] - live[0] > 1)) disjoint = false;
    }
  }
  const bool ok = unity < 1e-12 && sq_lo >= 0.5 - 1e-12 && sq_hi <= 1.0 + 1e-12 && disjoint;
  return {ok, fmt("max|chi+sum phi-1| = %.2e (< 1e-12), chi^2+sum phi^2 in [%.6f, %.6f] (within [0.5, 1]), "
                  "disjoint supports %s",
                  unity, sq_lo, sq_hi, disjoint ? "yes" : "no")};
}

// ||d_x v|| / ||v|| from a direct DFT, without the library transforms.
double oracle_gradient_ratio(const Field& v) {
  const auto hat = oracle::naive_dft(v);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < hat.size(); ++k) {
    const double kk = v.grid().wavenumber(0, k);
    num += kk * kk * std::norm(hat[k]);
    den += std::norm(hat[k]);
  }
  return std::sqrt(num / den);
}

Verdict bernstein() {
  const GridSpec g = GridSpec::line(2.0 * pi, 512);
  const DyadicPartition part = build_partition(g);
  const double lo = 0.75 * 8.0;
  const double hi = 8.0 / 3.0 * 8.0;
  double rmin = 1e300;
  double rmax = 0.0;
  int bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Field v = dyadic_block(random_field(g, 1000 + trial), 3, part);
    const double r = oracle_gradient_ratio(v);
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
    if (!(r >= lo && r <= hi)) ++bad;
  }
  const BernsteinReport lib = bernstein_audit(part, 3, 100, 7);
  const bool ok = bad == 0 && lib.pass && lib.skipped == 0 && lib.min_ratio >= lo && lib.max_ratio <= hi;
  return {ok, fmt("100 trials, ratios in [%.4f, %.4f] (bracket [%.2f, %.2f]), library audit [%.4f, %.4f]", rmin,
                  rmax, lo, hi, lib.min_ratio, lib.max_ratio)};
}

// Manufactured solution eta = A cos(x - t), u = A sin(x - t) of the system with
// zero coefficients, beta = 1; forcings derived by hand.
Verdict manufactured_and_order() {
  const GridSpec g = GridSpec::line(2.0 * pi, 256);
  const double A = 0.1;
  double residual = 0.0;
  for (const ModelParams& p : {ModelParams{1.0 / 6, 1.0 / 6, 0.5, 1.0}, ModelParams{0.3, 0.05, 1.0, 1.0}}) {
    const double e = p.eps;
    CoefficientSet c;
    c.f = TimeField::rule(g, [=](double t, double x, double) {
      const double th = x - t;
      return (A * (1.0 + e * p.b) * std::sin(th) + A * std::cos(th) + A * A * e * std::cos(2.0 * th)) / e;
    });
    c.g = {TimeField::rule(g, [=](double t, double x, double) {
      const double th = x - t;
      return (-A * (1.0 + e * p.d) * std::cos(th) - A * std::sin(th) + 0.5 * A * A * e * std::sin(2.0 * th)) / e;
    })};
    for (double t : {0.0, 0.41, 1.7}) {
      const State s{Field::from_function(g, [&](double x, double) { return A * std::cos(x - t); }),
                    {Field::from_function(g, [&](double x, double) { return A * std::sin(x - t); })}};
      const State r = rhs_eval(s, t, p, c.at(t), SolverConfig{});
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.coordinate(0, i);
        residual = std::max(residual, std::abs(r.eta[i] - A * std::sin(x - t)));
        residual = std::max(residual, std::abs(r.velocity[0][i] + A * std::cos(x - t)));
      }
    }
  }

  // Self-convergence of a full nonlinear run; weak dispersion keeps the
  // temporal error well above rounding.
  const ModelParams p{0.0, 0.001, 1.0, 1.0};
  const State s0{Field::from_function(g, [](double x, double) { return 0.3 * std::exp(-8.0 * std::pow(std::sin(0.5 * x), 2)); }),
                 {Field::from_function(g, [](double x, double) { return 0.2 * std::cos(x) + 0.1 * std::sin(3.0 * x); })}};
  const auto solve = [&](double dt) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 2.0;
    const RhsEvaluator rhs(g, p, cfg);
    const auto run = integrate(Bundle{s0}, [&](double t, const Bundle& y) { return Bundle{rhs(y[0], t, {})}; },
                               cfg, 1L << 40, nullptr);
    return run.final_state[0];
  };
  const auto rows = dt_convergence(solve, {4e-3, 2e-3, 1e-3}, 1e-3 / 16.0);
  bool order_ok = true;
  std::string orders;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    order_ok = order_ok && std::abs(rows[i].order - 4.0) <= 0.3;
    orders += fmt("%s%.3f", i > 1 ? ", " : "", rows[i].order);
  }
  return {residual < 1e-10 && order_ok,
          fmt("rhs residual %.2e (< 1e-10); errors %.2e, %.2e, %.2e; observed orders %s (4.0 +- 0.3)", residual,
              rows[0].error, rows[1].error, rows[2].error, orders.c_str())};
}

Verdict acoustic_limit() {
  const double L = 20.0;
  const GridSpec g = GridSpec::line(L, 128);
  struct Mode {
    int m;
    double a, pa, b, pb;  // eta0 = a cos(k x + pa), u0 = b cos(k x + pb)
  };
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> amp(-0.2, 0.2);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
  std::vector<Mode> modes;
  for (int m = 1; m <= 10; ++m) modes.push_back({m, amp(rng), phase(rng), amp(rng), phase(rng)});

  // d'Alembert: each cosine splits into right and left movers.
  const auto exact = [&](double t, double x, bool velocity) {
    double v = 0.0;
    for (const Mode& md : modes) {
      const double k = 2.0 * pi * md.m / L;
      const double ra = std::cos(k * (x - t) + md.pa);
      const double la = std::cos(k * (x + t) + md.pa);
      const double rb = std::cos(k * (x - t) + md.pb);
      const double lb = std::cos(k * (x + t) + md.pb);
      v += velocity ? 0.5 * md.a * (ra - la) + 0.5 * md.b * (rb + lb)
                    : 0.5 * md.a * (ra + la) + 0.5 * md.b * (rb - lb);
    }
    return v;
  };
  const State s0{Field::from_function(g, [&](double x, double) { return exact(0.0, x, false); }),
                 {Field::from_function(g, [&](double x, double) { return exact(0.0, x, true); })}};
  const ModelParams p{1.0 / 6, 1.0 / 6, 0.0, 1.0};
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 10.0;
  const RhsEvaluator rhs(g, p, cfg);
  const auto run = integrate(Bundle{s0}, [&](double t, const Bundle& y) { return Bundle{rhs(y[0], t, {})}; }, cfg,
                             1L << 40, nullptr);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(0, i);
    err = std::max(err, std::abs(run.final_state[0].eta[i] - exact(10.0, x, false)));
    err = std::max(err, std::abs(run.final_state[0].velocity[0][i] - exact(10.0, x, true)));
  }
  return {run.t == 10.0 && err < 1e-8, fmt("eps = 0, t = %.1f, %ld steps, max error vs d'Alembert %.2e (< 1e-8)",
                                           run.t, run.steps, err)};
}

Verdict mass_invariant() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(g_configs)) {
    if (e.path().extension() == ".toml") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) return {false, "no shipped configs found in " + g_configs.string()};
  double worst = 0.0;
  std::string detail;
  for (const auto& f : files) {
    const RunConfig cfg = load_config(f);
    double m0 = NAN;
    double norm0 = 0.0;
    double drift = 0.0;
    const auto mass = [](const Field& eta) {
      double s = 0.0;
      for (double v : eta.data()) s += v;
      return s * eta.grid().cell_volume();
    };
    const auto watch = [&](double, const State& st) {
      if (std::isnan(m0)) {
        m0 = mass(st.eta);
        double sq = 0.0;
        for (double v : st.eta.data()) sq += v * v;
        norm0 = std::sqrt(sq * st.eta.grid().cell_volume());
        return;
      }
      drift = std::max(drift, std::abs(mass(st.eta) - m0) / norm0);
    };
    const RunOutcome o = execute(cfg, watch);
    drift = std::max(drift, std::abs(mass(o.result.final_total.eta) - m0) / norm0);
    worst = std::max(worst, drift);
    detail += fmt("%s%s %.1e", detail.empty() ? "" : ", ", f.stem().c_str(), drift);
    if (o.result.reason != Termination::horizon) detail += " (" + to_string(o.result.reason) + ")";
  }
  return {worst < 1e-10, "max relative mass drift " + fmt("%.2e", worst) + " (< 1e-10): " + detail};
}

const char* kTanhBore = R"(
pipeline = "1d-bore"
[grid]
L = 80.0
N = 4096
[params]
b = 0.16666666666666666
d = 0.16666666666666666
eps = 0.1
[init]
kind = "tanh"
eta_minus = 0.5
eta_plus = -0.5
[solver]
dt = 0.01
t_end = 10.0
[ledger]
stride = 0.1
s = 2.0
r = 2.0
abort_on_leak = false
)";

Verdict eps_scaling() {
  const RunConfig cfg = parse_config(kTanhBore, false, "criterion-6");
  const SweepResult sw = sweep_eps(cfg, {0.1, 0.05, 0.025}, 1, HorizonMode::inverse_eps);
  bool any_crossed = false;
  bool all_ran = true;
  std::string pts;
  for (const SweepPoint& p : sw.points) {
    any_crossed = any_crossed || p.crossed;
    all_ran = all_ran && p.reason == Termination::horizon;
    pts += fmt("%seps=%g: %s T=%.3f margin %.3f", pts.empty() ? "" : "; ", p.eps,
               p.crossed ? "crossed at" : "no crossing, horizon", p.t_star, p.margin);
  }
  const bool scaling_ok = !any_crossed || (sw.fit.available && sw.fit.slope >= 0.5 && sw.fit.slope <= 1.5);
  const SweepPoint& smallest = sw.points.back();
  const bool threshold_ok = smallest.margin <= kThresholdFactor;
  std::string fit = sw.fit.available ? fmt("slope %.3f", sw.fit.slope) : std::string("fit n/a");
  return {all_ran && scaling_ok && threshold_ok,
          pts + "; " + fit + fmt("; sup U_s/U_s(0) at eps=%g is %.3f (<= 1+e*sqrt7 = %.4f)", smallest.eps,
                                 smallest.margin, kThresholdFactor)};
}

Verdict friedrichs() {
  const RunConfig cfg = parse_config(R"(
pipeline = "direct"
[grid]
L = 40.0
N = 256
[params]
b = 0.16666666666666666
d = 0.16666666666666666
eps = 0.5
[init]
kind = "sech2"
amplitude = 0.3
width = 2.0
right_moving = true
[solver]
dt = 0.01
t_end = 2.0
[ledger]
stride = 0.5
)", false, "criterion-7");
  const double kmax = max_wavenumber(cfg.grid);
  const auto rows = friedrichs_convergence(cfg, {kmax / 8.0, kmax / 4.0, kmax / 2.0});
  bool mono = true;
  std::string table;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) mono = mono && rows[i].error <= 1.1 * rows[i - 1].error;
    table += fmt("%sm=%.3f: %.3e", i ? ", " : "", rows[i].parameter, rows[i].error);
  }
  return {mono, "||u(m)-u(2m)||/||u(2m)|| at t=2: " + table + (mono ? " (decreasing)" : " (not decreasing)")};
}

Verdict stability() {
  std::string text = kTanhBore;
  text.replace(text.find("N = 4096"), 8, "N = 1024");
  text.replace(text.find("t_end = 10.0"), 12, "t_end = 5.0");
  const RunConfig cfg = parse_config(text, false, "criterion-8");
  const StabilityReport rep = stability_experiment(cfg, 1e-6, 2024);
  const bool ok = !rep.t.empty() && rep.t.back() >= 5.0 - 1e-9 && rep.margin <= 10.0;
  return {ok, fmt("noise 1e-6, t in [0, %.2f], delta U(0) = %.3e, delta U(end) = %.3e, fitted C = %.3f, "
                  "margin %.3f (<= 10)",
                  rep.t.empty() ? 0.0 : rep.t.back(), rep.delta_U.empty() ? 0.0 : rep.delta_U.front(),
                  rep.delta_U.empty() ? 0.0 : rep.delta_U.back(), rep.C_fit, rep.margin)};
}

Verdict decomposition() {
  const RunConfig cfg = parse_config(R"(
pipeline = "2d-bore"
[grid]
Lx = 80.0
Ly = 20.0
Nx = 512
Ny = 128
[params]
b = 0.16666666666666666
d = 0.16666666666666666
eps = 0.1
[init]
kind = "tanh"
eta_minus = 0.5
eta_plus = -0.5
[init.perturbation]
amplitude = 0.1
width = 1.0
center = 0.0
[solver]
dt = 0.01
t_end = 2.0
[ledger]
stride = 0.5
)", false, "criterion-9");
  const DecompositionReport rep = decomposition_consistency(cfg);
  return {rep.composed.reason == Termination::horizon && rep.relative_error < 1e-4,
          fmt("512x128, t = %.2f: relative L2 difference %.3e (< 1e-4); composed %.1f s, direct %.1f s",
              rep.composed.t, rep.relative_error, rep.composed_seconds, rep.direct_seconds)};
}

Verdict bootstrap() {
  const BootstrapConstants c = bootstrap_constants(BootstrapInputs{});
  // Independent evaluation in extended precision.
  const long double factor = 1.0L + std::numbers::e_v<long double> * std::sqrt(7.0L);
  const long double eps01 = 3.0L / (4.0L * factor + 4.0L);
  const long double ctilde = std::min({1.0L / (3.0L * std::numbers::e_v<long double>), 1.0L / (16.0L * factor),
                                       1.0L / 16.0L});
  const auto rel = [](double a, long double b) { return static_cast<double>(std::abs(a - b) / std::abs(b)); };
  const double e_eps = rel(c.eps0_candidates[0], eps01);
  const double e_ct = rel(c.c_tilde, ctilde);
  // The quoted 0.08159 is given to four digits; compare at that precision.
  const bool quoted_eps = std::abs(c.eps0_candidates[0] - 0.08159) < 0.5e-5;
  const bool ok = e_eps < 5e-6 && e_ct < 5e-6 && quoted_eps;
  return {ok, fmt("eps01 = %.7f (oracle %.7Lf, quoted 0.08159), C~ = %.7f (oracle %.7Lf); quoted 0.007632 "
                  "assumes e*sqrt7 = 7.19226, exact e*sqrt7 = %.5Lf",
                  c.eps0_candidates[0], eps01, c.c_tilde, ctilde, factor - 1.0L)};
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Verdict()> check;
};

}  // namespace

int main(int argc, char** argv) {
  g_configs = BBMLAB_CONFIG_DIR;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string item;
      while (std::getline(ss, item, ',')) only.insert(std::stoi(item));
    } else {
      g_configs = argv[i];
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "partition of unity and square-sum bracket", 1.0, partition_identities},
      {2, "Bernstein bracket for j = 3 blocks", 5.0, bernstein},
      {3, "manufactured solution and fourth-order time convergence", 60.0, manufactured_and_order},
      {4, "eps = 0 against the d'Alembert propagator", 60.0, acoustic_limit},
      {5, "mass invariant over shipped runs", 600.0, mass_invariant},
      {6, "T*(eps) scaling for the tanh bore", 1200.0, eps_scaling},
      {7, "Friedrichs cutoff convergence", 300.0, friedrichs},
      {8, "stability of the perturbation problem", 120.0, stability},
      {9, "2D decomposition against a direct solve", 600.0, decomposition},
      {10, "bootstrap constants for unit inputs", 1.0, bootstrap},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_seconds;
    const bool pass = v.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("[%s] %d %s: %s; %.2f s (budget %g s%s)\n", pass ? "PASS" : "FAIL", c.id, c.title,
                v.detail.c_str(), secs, c.budget_seconds, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  std::printf("%s: %d criteria failed\n", failed ? "FAILED" : "OK", failed);
  return failed ? 1 : 0;
}
