#pragma once

#include <complex>
#include <vector>

#include "fjko/grid.hpp"

namespace fjko {

using Complex = std::complex<double>;
using Spectrum = std::vector<Complex>;

/// Forward DFT with Fourier-series normalization:
///   u(x) = sum_k c_k exp(i 2*pi k.x / L),  c_k returned in FFT index order.
/// Plans are cached and guarded by a mutex; execution is serialized, so the
/// transforms are safe to call from any thread.
Spectrum fft_forward(const Grid& grid, const Field& values);

/// Inverse of fft_forward; returns the real part.
Field fft_inverse(const Grid& grid, const Spectrum& coeffs);

/// signed integer frequency for FFT index k on an n-point axis
inline int signed_index(int k, int n) { return k < n - n / 2 ? k : k - n; }

}  // namespace fjko
