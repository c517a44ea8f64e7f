#include "eegkit/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace eegkit {

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const size_t n = a.size();
  if (n == 0) return;
  if ((n & (n - 1)) != 0) throw std::runtime_error("fft_inplace: length must be a power of two");

  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  const double pi = 3.14159265358979323846;
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }

  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& v : a) v *= inv;
  }
}

std::vector<double> fft_convolve(const std::vector<double>& x, const std::vector<double>& taps) {
  if (x.empty() || taps.empty()) return {};
  const size_t out_len = x.size() + taps.size() - 1;
  const size_t nfft = next_pow2(out_len);

  std::vector<std::complex<double>> fx(nfft), ft(nfft);
  for (size_t i = 0; i < x.size(); ++i) fx[i] = x[i];
  for (size_t i = 0; i < taps.size(); ++i) ft[i] = taps[i];
  fft_inplace(fx, false);
  fft_inplace(ft, false);
  for (size_t i = 0; i < nfft; ++i) fx[i] *= ft[i];
  fft_inplace(fx, true);

  std::vector<double> out(out_len);
  for (size_t i = 0; i < out_len; ++i) out[i] = fx[i].real();
  return out;
}

} // namespace eegkit
