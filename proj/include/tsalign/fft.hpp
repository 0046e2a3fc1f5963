#pragma once

#include <complex>
#include <span>
#include <vector>

namespace tsalign::fft {

/// Unnormalized forward DFT of a real series, all L bins:
///   X_k = sum_t x_t * exp(-2*pi*i*k*t / L).
/// Radix-2 Cooley-Tukey for power-of-two lengths, Bluestein otherwise, so any
/// L (primes included) is exact to near machine precision.
std::vector<std::complex<double>> forward(std::span<const double> series);

/// |X_k| for the one-sided spectrum k = 0 .. floor(L/2).
std::vector<double> one_sided_magnitudes(std::span<const double> series);

/// sum_k |X_k|^2 over all L bins; equals L * sum_t x_t^2 up to rounding.
double spectrum_energy(std::span<const double> series);

}  // namespace tsalign::fft
