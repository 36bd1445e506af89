#pragma once

#include <cmath>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bbmlab/bore_data.hpp"
#include "bbmlab/littlewood_paley.hpp"
#include "bbmlab/solver.hpp"

namespace bbm {

/// 1 + e sqrt(7): the bootstrap threshold factor.
inline const double kThresholdFactor = 1.0 + std::exp(1.0) * std::sqrt(7.0);

struct LedgerSettings {
  double stride = 0.05;
  double s = 2.0;
  double r = 2.0;
  /// Blocks written to diagnostics.csv; empty means all.
  std::vector<int> blocks;
  double threshold_factor = kThresholdFactor;
  bool halt_on_threshold = false;
  bool abort_on_leak = true;
  double leak_tolerance = 1e-4;

  void validate() const;
};

struct LedgerSample {
  double t = 0.0;
  double U_s = 0.0;
  double max_eta = 0.0;
  double dt_eta_inf = 0.0;
  double blowup_integral = 0.0;
  double buffer_leak = 0.0;

  double U_inf = 0.0;           // ||(eta, grad eta, V, grad V)||_inf
  double mass = 0.0;            // integral of (I - eps b Lap) eta
  double e_norm_total = NAN;    // composed solution, bore pipelines only
  double W_s = 0.0;
  double F_s = 0.0;
  bool window_ok = true;        // eps ||eta + h||_inf < 3/4
  std::vector<double> U_j;      // j = -1 .. j_max
  std::vector<double> N_j;
};

/// The main CSV columns, in order.
inline constexpr const char* kLedgerHeader = "t,U_s,max_eta,dt_eta_inf,blowup_integral,buffer_leak";

struct EnergyLedger {
  std::vector<LedgerSample> samples;
  double threshold = 0.0;                 // threshold_factor * U_s(0)
  std::optional<double> crossing_time;    // interpolated first crossing
  std::optional<double> blowup_flag_time;
  int window_violations = 0;

  void write_csv(std::ostream& os) const;
  /// Block-resolved and auxiliary series.
  void write_diagnostics_csv(std::ostream& os, const std::vector<int>& blocks) const;
  /// Reads the main CSV columns (auxiliary fields stay default).
  static EnergyLedger read_csv(std::istream& is);
};

/// %.17g formatting shared by every CSV writer.
std::string format_double(double v);

/// Per-block modified energy with the nonlinear weight 1 + eps (eta + h):
///   N_j^2 = ||eta_j||^2 + eps b ||grad eta_j||^2 + int (1 + eps(eta + h)) (|V_j|^2 + eps d |grad V_j|^2)
struct ModifiedEnergy {
  std::vector<double> N_j;  // j = -1 .. j_max
  double weight_min = 1.0;
  double weight_max = 1.0;
  bool window_ok = true;  // eps ||eta + h||_inf < 3/4
};
ModifiedEnergy modified_energy(const State& state, const ModelParams& params, const Field* h,
                               const DyadicPartition& part);
double modified_energy(const State& state, int j, const ModelParams& params, const Field* h,
                       const DyadicPartition& part);

/// ||(eta, grad eta, V, grad V)||_inf.
double sup_norm_with_gradients(const State& state);

/// Trapezoidal accumulation of U(t) with an early-warning flag: the running
/// integral doubling within the last 5% of elapsed time.
class BlowupMonitor {
 public:
  void add(double t, double u);
  double integral() const noexcept { return integral_.empty() ? 0.0 : integral_.back(); }
  std::optional<double> flag_time() const noexcept { return flag_; }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
  std::vector<double> integral_;
  std::optional<double> flag_;
};

struct BlowupStatus {
  double integral = 0.0;
  bool flagged = false;
  double flag_time = 0.0;
};
BlowupStatus blowup_monitor(const std::vector<double>& times, const std::vector<double>& u);

/// W_s = ||h||_inf + ||grad h||_{B^s_{2,r}} + ||d_t h||_inf
///       + sum_i (||W_i||_inf + ||grad W_i||_{B^s_{2,r}})
double coefficient_norm(const CoefficientFields& c, double s, double r, const DyadicPartition& part);
/// F_s = ||(f, g)||_{B^s_{2,r}}.
double forcing_norm(const CoefficientFields& c, double s, double r, const DyadicPartition& part);

/// Relative contamination of the buffer zone: max over buffer nodes of
/// |p(t) - p(0)| over the interior maximum of |p(t)| (all components).
double buffer_monitor(const State& now, const State& initial, const BufferZone& zone);

/// Builds the ledger sample by sample and decides on early termination.
class LedgerRecorder {
 public:
  LedgerRecorder(LedgerSettings settings, const ModelParams& params, const DyadicPartition& part,
                 BufferZone buffer, State initial);

  struct Observation {
    double t;
    const State& state;
    const State& rate;
    const CoefficientFields& coeffs;
    double e_norm_total = NAN;
  };
  std::optional<Termination> record(const Observation& obs);

  const EnergyLedger& ledger() const noexcept { return ledger_; }
  EnergyLedger take() { return std::move(ledger_); }
  const LedgerSettings& settings() const noexcept { return settings_; }

 private:
  LedgerSettings settings_;
  ModelParams params_;
  EnergyWeights weights_;
  const DyadicPartition* part_;
  BufferZone buffer_;
  State initial_;
  BlowupMonitor blowup_;
  EnergyLedger ledger_;
};

/// Right-hand side of the per-block energy inequality divided by C, with the
/// sequence c_j bounded by 1.
double inequality_rhs_unit(const LedgerSample& s, int j, double eps, double beta, double sobolev_s);

struct InequalityReport {
  double C = 0.0;
  long checked = 0;
  long holding = 0;
  double fraction = 1.0;
  double worst_residual = 0.0;  // min over samples of RHS - LHS (negative when violated)
};
/// Smallest C making the inequality hold at every audited (sample, block) of a
/// calibration ledger; LHS is the centred difference of N_j^2.
double fit_inequality_constant(const EnergyLedger& ledger, double eps, double beta, double s);
InequalityReport inequality_audit(const EnergyLedger& ledger, double C, double eps, double beta,
                                  double s, double stride);

/// max_t ||d_t eta||_inf / (U_s + eps F_s + eps U_s (W_s + beta U_s)).
double fit_time_derivative_constant(const EnergyLedger& ledger, double eps, double beta);

/// delta U^2 = ||(d eta, d V)||^2 + ||(b grad d eta, d grad d V)||^2.
double difference_energy(const State& a, const State& b, const ModelParams& params);

/// Growth rate kappa_0 (coefficient of delta U^2 per unit C, sup norms) between a
/// reference solution 1 and solution 2 driven by the same coefficients:
///   eps ||div W1~|| + eps ||div W2~|| + eps ||grad W3~|| + sqrt(eps)(||h~|| + ||grad h~||) / max(sqrt b, sqrt d)
/// with W1~ = W2~ = W1 + beta V^1, W3~ = W3 + beta V^2, h~ = h + beta eta^2.
double stability_rate(const State& sol1, const State& sol2, const CoefficientFields& coeffs,
                      const ModelParams& params);

}  // namespace bbm
