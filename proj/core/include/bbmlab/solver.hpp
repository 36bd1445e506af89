#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bbmlab/field.hpp"
#include "bbmlab/state.hpp"

namespace bbm {

/// (b, d, eps, beta) of the generalized BBM system
///   (I - eps b Lap) d_t eta + div V + eps div(eta W1 + h V + beta eta V) = eps f
///   (I - eps d Lap) d_t V + grad eta + eps (W2 + beta V).grad V + eps V.grad W3 = eps g
struct ModelParams {
  double b = 0.0;
  double d = 0.0;
  double eps = 0.0;
  double beta = 1.0;
  /// Require b + d = 1/3 (the BBM instance of the abcd family).
  bool enforce_bbm_sum = false;

  /// eps = 0 is accepted: it selects the linear acoustic limit.
  void validate() const;
};

/// Coefficient fields evaluated at one instant. Absent entries are zero.
struct CoefficientFields {
  std::optional<Field> h;
  std::optional<Field> dt_h;
  std::optional<std::vector<Field>> w1;
  std::optional<std::vector<Field>> w2;
  std::optional<std::vector<Field>> w3;
  std::optional<Field> f;
  std::optional<std::vector<Field>> g;
};

/// A scalar coefficient as a function of time: identically zero, a fixed
/// field, a sampled series (linear in t between samples), or a rule of (t, x, y).
class TimeField {
 public:
  using Rule = std::function<double(double t, double x, double y)>;
  using Provider = std::function<Field(double t)>;

  TimeField() = default;  // zero
  static TimeField constant(Field f);
  static TimeField series(std::vector<double> times, std::vector<Field> samples);
  static TimeField rule(GridSpec grid, Rule fn);
  static TimeField provider(Provider fn);

  bool is_zero() const noexcept { return kind_ == Kind::zero; }
  Field at(double t) const;

 private:
  enum class Kind { zero, constant, series, rule, provider };
  Kind kind_ = Kind::zero;
  GridSpec grid_;
  std::vector<double> times_;
  std::vector<Field> samples_;
  Rule rule_;
  Provider provider_;
};

/// Time-dependent coefficients. Vector entries hold one TimeField per axis, or
/// are empty for the zero field.
struct CoefficientSet {
  TimeField h;
  TimeField dt_h;
  std::vector<TimeField> w1;
  std::vector<TimeField> w2;
  std::vector<TimeField> w3;
  TimeField f;
  std::vector<TimeField> g;

  CoefficientFields at(double t) const;
};

struct SolverConfig {
  double dt = 1e-2;
  double t_end = 1.0;
  std::optional<long> max_steps;
  std::optional<double> friedrichs_m;
  bool dealias = true;

  /// Throws ConfigError for dt <= 0, t_end < 0, m <= 0, or when eps b = 0 or
  /// eps d = 0 and dt exceeds the advective cap 0.5 * spacing.
  void validate(const ModelParams& params, const GridSpec& grid) const;
  /// Largest stable multiplier frequency of the linearized system; dt * this
  /// above ~2.8 is outside the RK4 stability region.
  static double max_linear_frequency(const ModelParams& params, const GridSpec& grid);
};

/// Evaluates (d_t eta, d_t V) = (F_m, G_m) with cached multiplier tables. One
/// instance per thread.
class RhsEvaluator {
 public:
  RhsEvaluator(const GridSpec& grid, const ModelParams& params, const SolverConfig& config);

  /// Throws BlowUpError(t) when the result is not finite.
  State operator()(const State& state, double t, const CoefficientFields& coeffs) const;

  const GridSpec& grid() const noexcept { return grid_; }
  const ModelParams& params() const noexcept { return params_; }

 private:
  GridSpec grid_;
  ModelParams params_;
  bool dealias_;
  std::vector<double> band_;       // 2/3 mask (all ones without dealiasing)
  std::vector<double> helm_b_;     // E_m (I - eps b Lap)^-1
  std::vector<double> helm_d_;     // E_m (I - eps d Lap)^-1
  std::vector<std::vector<double>> k_;  // derivative wavenumbers per axis, Nyquist 0
};

State rhs_eval(const State& state, double t, const ModelParams& params,
               const CoefficientFields& coeffs, const SolverConfig& config);

/// A list of states advanced together (e.g. a 1D and a 2D perturbation).
using Bundle = std::vector<State>;
using BundleRhs = std::function<Bundle(double t, const Bundle& y)>;

Bundle& axpy(Bundle& y, double c, const Bundle& x);

/// One classical four-stage Runge-Kutta step.
Bundle rk4_step(const BundleRhs& rhs, const Bundle& y, double t, double dt);
State rk4_step(const std::function<State(double, const State&)>& rhs, const State& y, double t,
               double dt);

enum class Termination { horizon, threshold, blowup, contamination, step_budget };
std::string to_string(Termination t);
/// Process exit code of the command-line tool for a termination reason.
int exit_code(Termination t);

struct IntegrationResult {
  Bundle final_state;
  double t = 0.0;
  long steps = 0;
  Termination reason = Termination::horizon;
  std::string message;
};

/// Called at t = 0, every `record_every` steps and at the final time; a
/// returned reason stops the run.
using Observer = std::function<std::optional<Termination>(double t, const Bundle& y, long step)>;

/// Steps from 0 to config.t_end (last step shortened to land on t_end),
/// stopping early on blow-up, an observer request, or the step budget.
IntegrationResult integrate(Bundle y0, const BundleRhs& rhs, const SolverConfig& config,
                            long record_every, const Observer& observer);

/// Record interval in steps: the largest whole number of steps not exceeding stride.
long record_interval(double stride, double dt);

}  // namespace bbm
