#pragma once

#include <complex>
#include <span>

#include "bbmlab/grid.hpp"

namespace bbm::detail {

// In-place complex FFT over the full lattice of `grid` (FFTW sign conventions,
// no normalization). Plans are cached per shape; execution is thread-safe.
void fft_forward(const GridSpec& grid, std::span<std::complex<double>> data);
void fft_backward(const GridSpec& grid, std::span<std::complex<double>> data);

}  // namespace bbm::detail
