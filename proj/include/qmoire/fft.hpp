#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qmoire::detail {

/// Unnormalized forward DFT, any length. Thread-safe (planning is serialized).
void fft_forward(std::vector<std::complex<double>>& data);

/// Inverse DFT normalized by 1/n.
void fft_inverse(std::vector<std::complex<double>>& data);

/// Frequencies (cycles per unit) matching FFT bin order for sample spacing `pitch`.
std::vector<double> fft_frequencies(std::size_t n, double pitch);

}  // namespace qmoire::detail
