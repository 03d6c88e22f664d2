#include <algorithm>
#include <cmath>
#include <numbers>

#include "phosphene/errors.hpp"
#include "phosphene/spectral.hpp"

namespace phosphene {

namespace {

using cd = std::complex<double>;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 transform with sign -1 (forward) or +1.
void fft_pow2(std::vector<cd>& a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  // Roots computed directly rather than by repeated multiplication.
  std::vector<cd> roots(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    roots[k] = {std::cos(angle), std::sin(angle)};
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cd u = a[i + k];
        const cd v = a[i + k + len / 2] * roots[k * stride];
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

// Bluestein's algorithm: an arbitrary-length DFT as a power-of-two
// convolution.
void fft_bluestein(std::vector<cd>& a, int sign) {
  const std::size_t n = a.size();
  std::size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;

  std::vector<cd> chirp(n);
  const std::size_t two_n = 2 * n;
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the angle small and exact.
    const auto k2 = static_cast<std::size_t>((static_cast<unsigned long long>(k) * k) % two_n);
    const double angle = sign * std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
    chirp[k] = {std::cos(angle), std::sin(angle)};
  }
  std::vector<cd> x(m), y(m);
  for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
  y[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) y[k] = y[m - k] = std::conj(chirp[k]);
  fft_pow2(x, -1);
  fft_pow2(y, -1);
  for (std::size_t k = 0; k < m; ++k) x[k] *= y[k];
  fft_pow2(x, +1);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * scale * chirp[k];
}

void transform(std::vector<cd>& a, int sign) {
  if (a.size() <= 1) return;
  if (is_pow2(a.size())) {
    fft_pow2(a, sign);
  } else {
    fft_bluestein(a, sign);
  }
}

}  // namespace

Spectrum dft(std::span<const double> samples) {
  if (samples.size() < 2) throw ArgumentError("dft: need at least two samples");
  std::vector<cd> a(samples.begin(), samples.end());
  transform(a, -1);
  return a;
}

Spectrum inverse_dft(std::span<const std::complex<double>> spectrum) {
  if (spectrum.empty()) throw ArgumentError("inverse_dft: empty spectrum");
  std::vector<cd> a(spectrum.begin(), spectrum.end());
  transform(a, +1);
  const double scale = 1.0 / static_cast<double>(a.size());
  for (cd& v : a) v *= scale;
  return a;
}

std::vector<SpectrumComponent> top_m_components(std::span<const std::complex<double>> spectrum,
                                                int m, double dt) {
  const std::size_t n = spectrum.size();
  const std::size_t bins = n / 2;
  if (m < 1 || static_cast<std::size_t>(m) > bins) {
    throw ArgumentError("top_m_components: m must be in [1, " + std::to_string(bins) + "]");
  }
  if (!(dt > 0.0)) throw ArgumentError("top_m_components: dt must be > 0");

  std::vector<std::size_t> order(bins);
  for (std::size_t i = 0; i < bins; ++i) order[i] = i + 1;
  // stable_sort keeps ascending bin order among equal magnitudes.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(spectrum[a]) > std::abs(spectrum[b]);
  });

  std::vector<SpectrumComponent> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const std::size_t k = order[static_cast<std::size_t>(i)];
    const bool nyquist = (n % 2 == 0) && k == n / 2;
    const double scale = (nyquist ? 1.0 : 2.0) / static_cast<double>(n);
    double phase = std::arg(spectrum[k]);
    if (phase >= std::numbers::pi) phase -= 2.0 * std::numbers::pi;
    out.push_back({static_cast<double>(k) / (static_cast<double>(n) * dt),
                   scale * std::abs(spectrum[k]), phase});
  }
  return out;
}

}  // namespace phosphene
