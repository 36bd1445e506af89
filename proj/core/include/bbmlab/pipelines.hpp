#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <string>

#include "bbmlab/bore_data.hpp"
#include "bbmlab/diagnostics.hpp"
#include "bbmlab/linear_waves.hpp"
#include "bbmlab/solver.hpp"

namespace bbm {

struct PipelineOptions {
  ModelParams params;
  SolverConfig solver;
  LedgerSettings ledger;
  /// Invoked at every ledger sample with the full (composed) solution.
  std::function<void(double t, const State& total)> on_record;
};

struct PipelineResult {
  State final_total;          // composed solution on the run grid
  State final_perturbation;   // the state the ledger tracks
  std::optional<State> final_line;  // 2D pipeline: 1D composed background
  EnergyLedger ledger;
  double t = 0.0;
  long steps = 0;
  Termination reason = Termination::horizon;
  std::string message;
};

/// Direct periodic solve of the generalized system (default: zero coefficients).
PipelineResult solve_direct(const State& initial, const CoefficientSet& coeffs,
                            const PipelineOptions& opts, const BufferZone& buffer = {});

/// Bore-background pipeline in 1D: splits (eta0, u0) at block -1, carries the
/// low part exactly by d'Alembert and solves the perturbation with
/// h = eta_L, W1 = W2 = W3 = u_L, beta = 1, forcings f_L, g_L. Returns the
/// composed solution; the ledger tracks the perturbation.
PipelineResult solve_1d_bore(const Field& eta0, const Field& u0, const PipelineOptions& opts,
                             const BufferZone& buffer = {});

/// Bore-background pipeline in 2D: evolves the 1D bore perturbation jointly
/// with the 2D perturbation, whose coefficients are the y-extended 1D solution
/// (h = eta^1D, W1 = W2 = W3 = (u^1D, 0), beta = 1, zero forcing).
PipelineResult solve_2d_bore(const ComposedState& data, const PipelineOptions& opts,
                             const BufferZone& buffer = {});

/// Coefficient fields of the 1D perturbation problem at one time.
struct BoreBackgroundFields {
  Field eta_l;
  Field u_l;
  CoefficientFields coeffs;
};
BoreBackgroundFields bore_background(const WaveBackground& bg, double t, double b, double d);

/// Memoizes the last few background evaluations: the RK stages of one step
/// share three distinct times.
class BoreBackgroundCache {
 public:
  BoreBackgroundCache(const WaveBackground& bg, double b, double d) : bg_(bg), b_(b), d_(d) {}
  const BoreBackgroundFields& at(double t);

 private:
  const WaveBackground& bg_;
  double b_;
  double d_;
  std::deque<std::pair<double, BoreBackgroundFields>> entries_;
};

}  // namespace bbm
