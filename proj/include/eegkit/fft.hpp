#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace eegkit {

inline size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// In-place iterative radix-2 FFT. Length must be a power of two.
// inverse=true applies the 1/n scaling.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

// Linear convolution of x with taps via FFT, full length x.size()+taps.size()-1.
std::vector<double> fft_convolve(const std::vector<double>& x,
                                 const std::vector<double>& taps);

} // namespace eegkit
