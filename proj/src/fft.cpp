#include "tsalign/fft.hpp"

#include <cmath>
#include <cstdint>

namespace tsalign::fft {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

using Complex = std::complex<double>;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// In-place iterative radix-2 transform. size must be a power of two.
/// invert=true computes the unnormalized inverse (conjugate twiddles).
void radix2(std::vector<Complex>& a, bool invert) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = (invert ? kTau : -kTau) / static_cast<double>(len);
    const std::size_t half = len / 2;
    std::vector<Complex> twiddle(half);
    for (std::size_t j = 0; j < half; ++j) {
      twiddle[j] = std::polar(1.0, angle * static_cast<double>(j));
    }
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const Complex u = a[start + j];
        const Complex v = a[start + j + half] * twiddle[j];
        a[start + j] = u + v;
        a[start + j + half] = u - v;
      }
    }
  }
}

/// Arbitrary-length DFT as a chirp-z convolution of power-of-two size.
std::vector<Complex> bluestein(std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t conv_size = next_power_of_two(2 * n - 1);

  // exp(-i*pi*t^2/n) is periodic in t^2 with period 2n; reducing the square
  // modulo 2n keeps the polar argument small and accurate for large t.
  std::vector<Complex> chirp(n);
  const std::uint64_t period = 2 * static_cast<std::uint64_t>(n);
  for (std::size_t t = 0; t < n; ++t) {
    const std::uint64_t sq = (static_cast<std::uint64_t>(t) * t) % period;
    chirp[t] = std::polar(1.0, -kTau * 0.5 * static_cast<double>(sq) / static_cast<double>(n));
  }

  std::vector<Complex> a(conv_size, Complex{});
  for (std::size_t t = 0; t < n; ++t) a[t] = x[t] * chirp[t];

  std::vector<Complex> b(conv_size, Complex{});
  b[0] = std::conj(chirp[0]);
  for (std::size_t t = 1; t < n; ++t) {
    b[t] = std::conj(chirp[t]);
    b[conv_size - t] = b[t];
  }

  radix2(a, false);
  radix2(b, false);
  for (std::size_t i = 0; i < conv_size; ++i) a[i] *= b[i];
  radix2(a, true);

  const double scale = 1.0 / static_cast<double>(conv_size);
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * scale * chirp[k];
  return out;
}

}  // namespace

std::vector<Complex> forward(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n == 0) return {};
  if (n == 1) return {Complex{series[0], 0.0}};
  if (is_power_of_two(n)) {
    std::vector<Complex> a(n);
    for (std::size_t t = 0; t < n; ++t) a[t] = Complex{series[t], 0.0};
    radix2(a, false);
    return a;
  }
  return bluestein(series);
}

std::vector<double> one_sided_magnitudes(std::span<const double> series) {
  const auto spectrum = forward(series);
  const std::size_t bins = series.size() / 2 + 1;
  std::vector<double> magnitudes(bins);
  for (std::size_t k = 0; k < bins; ++k) magnitudes[k] = std::abs(spectrum[k]);
  return magnitudes;
}

double spectrum_energy(std::span<const double> series) {
  double energy = 0.0;
  for (const auto& bin : forward(series)) energy += std::norm(bin);
  return energy;
}

}  // namespace tsalign::fft
