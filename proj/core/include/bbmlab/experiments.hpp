#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bbmlab/bootstrap.hpp"
#include "bbmlab/config.hpp"
#include "bbmlab/pipelines.hpp"

namespace bbm {

inline constexpr int kRecordSchemaVersion = 1;

/// Library version with the source revision, e.g. "0.3.0-g1a2b3c4".
std::string version_string();

/// Initial data of a run, ready for the selected pipeline.
struct InitialData {
  State total;                            // composed initial solution on the run grid
  std::optional<Field> eta_line;          // bore pipelines: 1D profile along x
  std::optional<Field> u_line;
  std::optional<ComposedState> composed;  // 2d-bore pipeline
  BufferZone buffer;
};

InitialData build_initial(const RunConfig& config);

/// int (I - eps b Lap) eta over the torus; the Laplacian integrates to zero.
double mass_integral(const Field& eta);

struct RunOutcome {
  PipelineResult result;
  State initial_total;
  double wall_seconds = 0.0;
  double mass_drift = 0.0;  // |M(t) - M(0)| / ||eta(0)||
  TStar t_star;
  double C_inequality = 0.0;
  double C_time_derivative = 0.0;
  InequalityReport inequality;
};

/// Runs the pipeline named by the config. `on_record` sees the composed
/// solution at every ledger sample.
RunOutcome execute(const RunConfig& config,
                   const std::function<void(double, const State&)>& on_record = {});

/// Self-describing record of one run.
nlohmann::json run_record(const RunConfig& config, const RunOutcome& outcome);

/// Numeric leaves of `golden` that differ from `record` beyond
/// atol + rtol |golden|. Keys listed in `ignore` (e.g. wall time) are skipped.
std::vector<std::string> compare_records(const nlohmann::json& golden, const nlohmann::json& record,
                                         double rtol, double atol,
                                         const std::set<std::string>& ignore);

/// Writes ledger.csv, diagnostics.csv, record.json and, if enabled, SVG plots
/// and final field snapshots into `dir`.
void write_run_outputs(const RunConfig& config, const RunOutcome& outcome,
                       const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Sweeps and convergence studies

enum class HorizonMode { config, inverse_eps };

struct SweepPoint {
  double eps = 0.0;
  double horizon = 0.0;
  bool crossed = false;
  double t_star = 0.0;    // crossing time, or horizon when not crossed
  double margin = 0.0;    // sup_t U_s(t) / U_s(0)
  Termination reason = Termination::horizon;
  std::string message;
  EnergyLedger ledger;
};

struct SweepFit {
  bool available = false;  // needs two crossed, non-blow-up runs
  double slope = 0.0;      // d log T* / d log(1/eps)
  double intercept = 0.0;
  int used = 0;
};

struct SweepResult {
  std::vector<SweepPoint> points;  // ordered by decreasing eps
  SweepFit fit;
};

/// Validates a sweep axis: at least three positive, distinct values.
/// Returns them sorted in decreasing order.
std::vector<double> validate_sweep_values(std::vector<double> eps);

/// One independent run per eps; `threads` workers, each owning its solver.
/// Results do not depend on the number of threads.
SweepResult sweep_eps(const RunConfig& base, const std::vector<double>& eps, int threads,
                      HorizonMode mode = HorizonMode::inverse_eps);

SweepFit fit_log_log(const std::vector<SweepPoint>& points);

struct ConvergenceRow {
  double parameter = 0.0;  // dt, or the Friedrichs cutoff m
  double error = 0.0;      // relative L2 distance
  double order = 0.0;      // observed order against the previous row (NaN for the first)
};

/// Final-time error of `solve(dt)` against `solve(reference_dt)` for each dt.
std::vector<ConvergenceRow> dt_convergence(const std::function<State(double dt)>& solve,
                                           const std::vector<double>& dts, double reference_dt);

/// Uses the config's pipeline; the reference step is min(dts) / 16 unless given.
std::vector<ConvergenceRow> dt_convergence(const RunConfig& config, const std::vector<double>& dts,
                                           std::optional<double> reference_dt = std::nullopt);

/// ||solution(m) - solution(2m)|| / ||solution(2m)|| at t_end for each m.
std::vector<ConvergenceRow> friedrichs_convergence(const std::function<State(double m)>& solve,
                                                   const std::vector<double>& ms);
std::vector<ConvergenceRow> friedrichs_convergence(const RunConfig& config, const std::vector<double>& ms);

/// Largest lattice |k| of a grid.
double max_wavenumber(const GridSpec& grid);

// ---------------------------------------------------------------------------
// Stability of the perturbation problem and 2D decomposition consistency

struct StabilityReport {
  std::vector<double> t;
  std::vector<double> delta_U;
  std::vector<double> kappa0;
  std::vector<double> kappa_integral;
  double C_fit = 0.0;       // calibrated on the first half of the window
  double margin = 0.0;      // max_t delta_U(t) / (delta_U(0) exp(C/2 int kappa0))
  double margin_unit_C = 0.0;
};

/// Two 1D bore perturbation solutions differing by seeded band-limited noise
/// of sup-norm `noise`, driven by the same background.
StabilityReport stability_experiment(const RunConfig& config, double noise, std::uint64_t seed);

struct DecompositionReport {
  double relative_error = 0.0;  // ||composed - direct|| / ||direct|| at t_end
  double composed_seconds = 0.0;
  double direct_seconds = 0.0;
  PipelineResult composed;
};

/// Composed 2D bore pipeline against a direct periodic solve of the full
/// system from the same composed initial data.
DecompositionReport decomposition_consistency(const RunConfig& config);

// ---------------------------------------------------------------------------
// Self-check suite

struct VerifyCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Names of the static self-check suite, in execution order.
const std::vector<std::string>& verify_suite_names();

/// Runs every check; names in `inject` get an artificial fault added to
/// their measured quantity.
std::vector<VerifyCheck> run_verify(const std::set<std::string>& inject = {});

nlohmann::json verify_report(const std::vector<VerifyCheck>& checks);

}  // namespace bbm
