#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace qhd::fft {

// Unnormalized complex DFT of length span.size(), in place.
// Backed by FFTW; plans are cached per length and execution is thread-safe.
void forward(std::span<std::complex<double>> data);
void inverse(std::span<std::complex<double>> data);  // no 1/N scaling

}  // namespace qhd::fft
