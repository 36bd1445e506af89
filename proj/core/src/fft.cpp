#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "bbmlab/errors.hpp"

namespace bbm::detail {
namespace {

using PlanKey = std::tuple<std::size_t, std::size_t, int>;

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const GridSpec& grid, int sign) {
    const PlanKey key{grid.nx(), grid.ny(), sign};
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    // The planner only needs representative arrays; execution uses the
    // new-array interface, so plans are created unaligned.
    std::vector<std::complex<double>> scratch(grid.size());
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = nullptr;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (grid.dim == 1) {
      plan = fftw_plan_dft_1d(static_cast<int>(grid.nx()), buf, buf, sign, flags);
    } else {
      plan = fftw_plan_dft_2d(static_cast<int>(grid.nx()), static_cast<int>(grid.ny()), buf, buf,
                              sign, flags);
    }
    if (plan == nullptr) throw Error("FFTW failed to create a plan for " + grid.describe());
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(const GridSpec& grid, std::span<std::complex<double>> data, int sign) {
  if (data.size() != grid.size()) {
    throw ConfigError("FFT buffer size " + std::to_string(data.size()) +
                      " does not match grid " + grid.describe());
  }
  fftw_plan plan = cache().get(grid, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void fft_forward(const GridSpec& grid, std::span<std::complex<double>> data) {
  execute(grid, data, FFTW_FORWARD);
}

void fft_backward(const GridSpec& grid, std::span<std::complex<double>> data) {
  execute(grid, data, FFTW_BACKWARD);
}

}  // namespace bbm::detail
