// bbmlab: runs, eps sweeps, convergence studies, norm reports and self-checks
// for the pseudospectral Boussinesq laboratory.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bbmlab/config.hpp"
#include "bbmlab/errors.hpp"
#include "bbmlab/experiments.hpp"
#include "bbmlab/field_io.hpp"
#include "bbmlab/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitVerifyFailed = 5;

struct Globals {
  std::string config;
  std::string out = "out";
  int threads = 0;
  std::uint64_t seed = 1;
  bool quiet = false;
};

std::string fmt(double v) { return bbm::format_double(v); }

bbm::RunConfig require_config(const Globals& g) {
  if (g.config.empty()) throw bbm::ConfigError("this command needs --config");
  return bbm::load_config(g.config);
}

void log_line(const Globals& g, const std::string& s) {
  if (!g.quiet) std::cerr << s << '\n';
}

int cmd_run(const Globals& g, double stability_noise) {
  const bbm::RunConfig cfg = require_config(g);
  const fs::path out = g.out;
  double next_report = 0.0;
  const auto progress = [&](double t, const bbm::State&) {
    if (t + 1e-12 >= next_report) {
      log_line(g, "  t = " + fmt(t));
      next_report += 0.1 * cfg.solver.t_end;
    }
  };
  log_line(g, "run: " + bbm::to_string(cfg.pipeline) + " pipeline, t_end = " + fmt(cfg.solver.t_end));
  const bbm::RunOutcome o = bbm::execute(cfg, progress);
  bbm::write_run_outputs(cfg, o, out);

  if (stability_noise > 0.0) {
    const bbm::StabilityReport rep = bbm::stability_experiment(cfg, stability_noise, g.seed);
    std::ofstream csv(out / "stability.csv");
    csv << "t,delta_U,kappa0,kappa_integral\n";
    for (std::size_t i = 0; i < rep.t.size(); ++i) {
      csv << fmt(rep.t[i]) << ',' << fmt(rep.delta_U[i]) << ',' << fmt(rep.kappa0[i]) << ','
          << fmt(rep.kappa_integral[i]) << '\n';
    }
    json summary = {{"noise", stability_noise}, {"seed", g.seed},         {"C_fit", rep.C_fit},
                    {"margin", rep.margin},     {"margin_unit_C", rep.margin_unit_C}};
    std::ofstream(out / "stability.json") << summary.dump(2) << '\n';
    if (cfg.output.svg) {
      bbm::PlotSpec plot{"Difference energy of two nearby solutions", "t", "delta U", false, true, {}, {}, {}};
      plot.series.push_back({"delta U", rep.t, rep.delta_U});
      std::vector<double> bound;
      for (std::size_t i = 0; i < rep.t.size(); ++i) {
        bound.push_back(rep.delta_U.front() * std::exp(0.5 * rep.C_fit * rep.kappa_integral[i]));
      }
      plot.series.push_back({"fitted bound", rep.t, bound});
      std::ofstream svg(out / "stability.svg");
      bbm::write_svg_plot(plot, svg);
    }
    log_line(g, "stability: C_fit = " + fmt(rep.C_fit) + ", margin = " + fmt(rep.margin));
  }

  const int code = bbm::exit_code(o.result.reason);
  std::string line = "termination: " + bbm::to_string(o.result.reason) + " at t = " + fmt(o.result.t) +
                     " after " + std::to_string(o.result.steps) + " steps";
  if (o.t_star.crossed) line += ", T* = " + fmt(o.t_star.time);
  if (!o.result.message.empty()) line += " (" + o.result.message + ")";
  log_line(g, line);
  log_line(g, "outputs written to " + out.string());
  return code;
}

std::vector<double> parse_list(const std::string& text, const char* field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw bbm::ConfigError("not a number: '" + item + "'", field);
    }
  }
  return out;
}

int cmd_sweep(const Globals& g, const std::string& eps_text, const std::string& horizon) {
  const bbm::RunConfig cfg = require_config(g);
  if (horizon != "inverse-eps" && horizon != "config") {
    throw bbm::ConfigError("expected inverse-eps or config", "horizon");
  }
  const auto mode = horizon == "config" ? bbm::HorizonMode::config : bbm::HorizonMode::inverse_eps;
  const std::vector<double> eps = bbm::validate_sweep_values(parse_list(eps_text, "sweep.eps"));
  const int threads = g.threads > 0 ? g.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  log_line(g, "sweep-eps: " + std::to_string(eps.size()) + " runs on " + std::to_string(threads) + " threads");
  const bbm::SweepResult res = bbm::sweep_eps(cfg, eps, threads, mode);

  const fs::path out = g.out;
  fs::create_directories(out);
  std::ofstream csv(out / "sweep.csv");
  csv << "eps,horizon,crossed,t_star,margin,termination\n";
  json points = json::array();
  for (const bbm::SweepPoint& p : res.points) {
    csv << fmt(p.eps) << ',' << fmt(p.horizon) << ',' << (p.crossed ? 1 : 0) << ',' << fmt(p.t_star) << ','
        << fmt(p.margin) << ',' << bbm::to_string(p.reason) << '\n';
    points.push_back({{"eps", p.eps},
                      {"horizon", p.horizon},
                      {"crossed", p.crossed},
                      {"t_star", p.t_star},
                      {"margin", p.margin},
                      {"termination", bbm::to_string(p.reason)}});
    char name[64];
    std::snprintf(name, sizeof name, "ledger_eps_%g.csv", p.eps);
    std::ofstream led(out / name);
    p.ledger.write_csv(led);
  }
  json fit = res.fit.available ? json{{"slope", res.fit.slope}, {"intercept", res.fit.intercept}, {"used", res.fit.used}}
                               : json("n/a");
  json record = {{"schema_version", bbm::kRecordSchemaVersion},
                 {"version", bbm::version_string()},
                 {"config", cfg.echo},
                 {"horizon", horizon},
                 {"points", points},
                 {"fit", fit}};
  std::ofstream(out / "sweep.json") << record.dump(2) << '\n';

  if (cfg.output.svg) {
    bbm::PlotSpec plot{"Threshold crossing time against 1/eps", "1/eps", "T*", true, true, {}, {}, {}};
    bbm::PlotSeries crossed{"T* (crossed)", {}, {}, true};
    bbm::PlotSeries horizons{"horizon (no crossing)", {}, {}, true};
    for (const bbm::SweepPoint& p : res.points) {
      (p.crossed ? crossed : horizons).x.push_back(1.0 / p.eps);
      (p.crossed ? crossed : horizons).y.push_back(p.t_star);
    }
    plot.series.push_back(crossed);
    plot.series.push_back(horizons);
    std::ofstream svg(out / "sweep.svg");
    bbm::write_svg_plot(plot, svg);
  }

  if (!g.quiet) {
    std::printf("%-12s %-10s %-8s %-14s %-10s %s\n", "eps", "horizon", "crossed", "T*", "margin", "termination");
    for (const bbm::SweepPoint& p : res.points) {
      std::printf("%-12.6g %-10.4g %-8s %-14.8g %-10.4g %s\n", p.eps, p.horizon, p.crossed ? "yes" : "no", p.t_star,
                  p.margin, bbm::to_string(p.reason).c_str());
    }
    if (res.fit.available) {
      std::printf("fit: log T* = %.6g + %.6g log(1/eps) over %d runs\n", res.fit.intercept, res.fit.slope, res.fit.used);
    } else {
      std::printf("fit: n/a (fewer than two crossings)\n");
    }
  }
  return 0;
}

void write_convergence(const Globals& g, const std::string& stem, const std::string& param,
                       const std::vector<bbm::ConvergenceRow>& rows, bool svg) {
  const fs::path out = g.out;
  fs::create_directories(out);
  std::ofstream csv(out / (stem + ".csv"));
  csv << param << ",error,order\n";
  bbm::PlotSeries s{"relative error", {}, {}, true};
  for (const auto& r : rows) {
    csv << fmt(r.parameter) << ',' << fmt(r.error) << ',' << fmt(r.order) << '\n';
    s.x.push_back(r.parameter);
    s.y.push_back(r.error);
    if (!g.quiet) std::printf("%s = %-12.6g error = %-14.6e order = %.3f\n", param.c_str(), r.parameter, r.error, r.order);
  }
  if (svg) {
    bbm::PlotSpec plot{"Convergence in " + param, param, "relative L2 error", true, true, {std::move(s)}, {}, {}};
    std::ofstream os(out / (stem + ".svg"));
    bbm::write_svg_plot(plot, os);
  }
}

int cmd_conv_dt(const Globals& g, const std::string& dts, double reference) {
  const bbm::RunConfig cfg = require_config(g);
  const auto rows = bbm::dt_convergence(cfg, parse_list(dts, "conv.dt"),
                                        reference > 0.0 ? std::optional<double>(reference) : std::nullopt);
  write_convergence(g, "conv_dt", "dt", rows, cfg.output.svg);
  return 0;
}

int cmd_conv_m(const Globals& g, const std::string& ms) {
  const bbm::RunConfig cfg = require_config(g);
  std::vector<double> m;
  if (ms.empty()) {
    const double k = bbm::max_wavenumber(cfg.grid);
    m = {k / 8.0, k / 4.0, k / 2.0};
  } else {
    m = parse_list(ms, "conv.m");
  }
  write_convergence(g, "conv_m", "m", bbm::friedrichs_convergence(cfg, m), cfg.output.svg);
  return 0;
}

struct NormArgs {
  std::string field;
  std::vector<std::string> velocity;
  std::string quantity = "besov";
  double s = 0.0;
  std::string p = "2";
  std::string r = "2";
  double eps = 1.0;
  double b = 0.0;
  double d = 0.0;
};

double parse_exponent(const std::string& text, const char* field) {
  if (text == "inf") return bbm::kInf;
  const auto v = parse_list(text, field);
  if (v.size() != 1) throw bbm::ConfigError("expected one number or inf", field);
  return v.front();
}

int cmd_norms(const Globals& g, const NormArgs& a) {
  if (a.field.empty()) throw bbm::ConfigError("norms needs --field");
  const bbm::Field eta = bbm::load_field(a.field);
  const bbm::DyadicPartition part = bbm::build_partition(eta.grid());
  const double p = parse_exponent(a.p, "norms.p");
  const double r = parse_exponent(a.r, "norms.r");
  bbm::NormResult res;
  if (a.quantity == "besov") {
    const bbm::BesovSpec spec{a.s, p, r};
    spec.validate();
    res = bbm::besov_norm(eta, spec, part);
  } else if (a.quantity == "stacked" || a.quantity == "e_norm") {
    bbm::State st{eta, {}};
    for (const std::string& f : a.velocity) st.velocity.push_back(bbm::load_field(f));
    while (static_cast<int>(st.velocity.size()) < eta.grid().dim) st.velocity.emplace_back(eta.grid());
    bbm::validate_state(st, "norms");
    const bbm::EnergyWeights w{a.b, a.d, a.eps, a.s};
    if (a.quantity == "stacked") {
      res = bbm::stacked_norm(st, w, part, r);
    } else {
      res.value = bbm::e_norm(st, w, part, r);
    }
  } else {
    throw bbm::ConfigError("expected besov, stacked or e_norm", "norms.quantity");
  }
  const json record = {{"quantity", a.quantity},
                       {"s", a.s},
                       {"p", std::isinf(p) ? json("inf") : json(p)},
                       {"r", std::isinf(r) ? json("inf") : json(r)},
                       {"eps", a.eps},
                       {"b", a.b},
                       {"d", a.d},
                       {"value", res.value},
                       {"tail_estimate", res.tail_estimate}};
  fs::create_directories(g.out);
  std::ofstream(fs::path(g.out) / "norms.json") << record.dump(2) << '\n';
  std::cout << record.dump(2) << '\n';
  return 0;
}

int cmd_verify(const Globals& g, const std::vector<std::string>& inject) {
  const auto checks = bbm::run_verify({inject.begin(), inject.end()});
  const json report = bbm::verify_report(checks);
  std::cout << report.dump(2) << '\n';
  if (!g.out.empty() && g.out != "out") {
    fs::create_directories(g.out);
    std::ofstream(fs::path(g.out) / "verify.json") << report.dump(2) << '\n';
  }
  return report.at("pass").get<bool>() ? 0 : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bbmlab: pseudospectral laboratory for BBM-type Boussinesq systems with bore data"};
  app.set_version_flag("--version", bbm::version_string());
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "Run configuration (TOML, or JSON by extension)");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads for sweeps (default: hardware concurrency)");
  app.add_option("--seed", g.seed, "Seed for perturbation noise")->capture_default_str();
  app.add_flag("--quiet", g.quiet, "Suppress progress and tables");

  double stability_noise = 0.0;
  auto* run = app.add_subcommand("run", "Run the configured pipeline and write the record, ledger and plots");
  run->add_option("--stability", stability_noise,
                  "Also evolve a copy perturbed by seeded noise of this size and report the difference growth");

  std::string eps_list;
  std::string horizon = "inverse-eps";
  auto* sweep = app.add_subcommand("sweep-eps", "Threshold crossing time T* across eps values");
  sweep->add_option("--eps", eps_list, "Comma-separated eps values (at least three)")->required();
  sweep->add_option("--horizon", horizon, "Run length: inverse-eps (t_end = 1/eps) or config")->capture_default_str();

  std::string dt_list;
  double reference_dt = 0.0;
  auto* conv_dt = app.add_subcommand("conv-dt", "Time-step convergence against a fine reference");
  conv_dt->add_option("--dt", dt_list, "Comma-separated step sizes")->required();
  conv_dt->add_option("--reference-dt", reference_dt, "Reference step (default: smallest / 16)");

  std::string m_list;
  auto* conv_m = app.add_subcommand("conv-m", "Friedrichs cutoff convergence, solution(m) vs solution(2m)");
  conv_m->add_option("--m", m_list, "Comma-separated cutoffs (default: kmax/8, kmax/4, kmax/2)");

  NormArgs na;
  auto* norms = app.add_subcommand("norms", "Besov, stacked energy or E-norm of a field file");
  norms->add_option("--field", na.field, "Field file (.csv text or binary)")->required();
  norms->add_option("--velocity", na.velocity, "Velocity component files (stacked and e_norm)");
  norms->add_option("--quantity", na.quantity, "besov, stacked or e_norm")->capture_default_str();
  norms->add_option("--s", na.s, "Regularity index")->capture_default_str();
  norms->add_option("--p", na.p, "Lebesgue exponent: 2 or inf")->capture_default_str();
  norms->add_option("--r", na.r, "Summation exponent (number or inf)")->capture_default_str();
  norms->add_option("--eps", na.eps, "Weight eps")->capture_default_str();
  norms->add_option("--b", na.b, "Dispersion b")->capture_default_str();
  norms->add_option("--d", na.d, "Dispersion d")->capture_default_str();

  std::vector<std::string> inject;
  auto* verify = app.add_subcommand("verify", "Run the self-check suite and print a JSON report");
  verify->add_option("--inject", inject, "Inject a fault into the named check (testing aid)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) return cmd_run(g, stability_noise);
    if (*sweep) return cmd_sweep(g, eps_list, horizon);
    if (*conv_dt) return cmd_conv_dt(g, dt_list, reference_dt);
    if (*conv_m) return cmd_conv_m(g, m_list);
    if (*norms) return cmd_norms(g, na);
    if (*verify) return cmd_verify(g, inject);
  } catch (const bbm::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const bbm::DomainTooSmallError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const bbm::DegenerateGridError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
