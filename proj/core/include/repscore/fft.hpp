#pragma once

#include <complex>
#include <span>
#include <vector>

namespace repscore {

// Thin wrapper over FFTW (double precision, FFTW_ESTIMATE plans, cached per
// size behind a mutex). Safe to call from multiple threads.

/// One-sided DFT of a real signal; result has n/2 + 1 bins.
std::vector<std::complex<double>> rfft(std::span<const double> x);

/// Inverse of rfft. `n` is the original (time-domain) length; output is
/// scaled by 1/n so irfft(rfft(x), n) == x up to rounding.
std::vector<double> irfft(std::span<const std::complex<double>> spectrum, std::size_t n);

}  // namespace repscore
