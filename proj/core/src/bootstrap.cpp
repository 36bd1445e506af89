#include "bbmlab/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bbmlab/errors.hpp"

namespace bbm {

BootstrapConstants bootstrap_constants(const BootstrapInputs& in) {
  const std::pair<const char*, double> checks[] = {
      {"R0_1", in.R0_1}, {"R0_0", in.R0_0}, {"sup_h", in.sup_h}, {"sup_W", in.sup_W},
      {"sup_F", in.sup_F}, {"C", in.C}, {"C1", in.C1}};
  for (const auto& [name, v] : checks) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError(std::string("bootstrap input ") + name + " must be positive");
    }
  }
  const double factor = 1.0 + std::exp(1.0) * std::sqrt(7.0);
  BootstrapConstants out;
  out.inputs = in;
  out.eps0_candidates = {
      3.0 / (4.0 * in.C1 * factor * in.R0_1 + 4.0 * in.sup_h),
      1.0 / (2.0 * factor * in.R0_1 + 2.0 * in.sup_W),
      (factor * in.R0_0 + in.sup_W) / (2.0 * in.sup_F),
      1.0 / (2.0 * factor * in.R0_1 + 2.0 * in.sup_W),
  };
  out.eps0 = *std::min_element(out.eps0_candidates.begin(), out.eps0_candidates.end());
  out.c_tilde_candidates = {
      in.R0_0 / (3.0 * std::exp(1.0) * in.C * in.sup_F),
      1.0 / (16.0 * in.C * factor * in.R0_1),
      1.0 / (16.0 * in.C * in.sup_W),
  };
  out.c_tilde = *std::min_element(out.c_tilde_candidates.begin(), out.c_tilde_candidates.end());
  return out;
}

TStar t_star_measure(const std::vector<double>& times, const std::vector<double>& values, double R0,
                     double factor) {
  if (times.empty() || times.size() != values.size()) {
    throw ConfigError("t_star_measure needs a nonempty ledger with one value per time");
  }
  if (!std::is_sorted(times.begin(), times.end())) {
    throw ConfigError("t_star_measure: ledger times must be increasing");
  }
  TStar out;
  out.threshold = factor * R0;
  out.time = times.back();
  if (!(out.threshold > 0.0)) return out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (values[i] <= out.threshold) continue;
    out.crossed = true;
    if (i == 0) {
      out.time = times[0];
    } else {
      const double frac = (out.threshold - values[i - 1]) / (values[i] - values[i - 1]);
      out.time = times[i - 1] + frac * (times[i] - times[i - 1]);
    }
    break;
  }
  return out;
}

}  // namespace bbm
