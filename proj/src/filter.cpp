#include "eegkit/filter.hpp"

#include "eegkit/fft.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eegkit {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Hamming-window transition width is ~3.3/N of the sample rate.
size_t taps_for_transition(double transition_hz, double rate) {
  size_t n = static_cast<size_t>(std::ceil(3.3 * rate / transition_hz));
  if (n % 2 == 0) ++n;
  return n;
}

// Unit-DC-gain windowed-sinc low-pass, -6 dB at cutoff_hz, odd length.
std::vector<double> lowpass_taps(double cutoff_hz, double transition_hz, double rate) {
  const size_t n = taps_for_transition(transition_hz, rate);
  const double fc = cutoff_hz / rate;  // cycles per sample
  const auto m = static_cast<double>(n - 1) / 2.0;
  std::vector<double> h(n);
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) - m;
    const double sinc = t == 0.0 ? 2.0 * fc : std::sin(2.0 * kPi * fc * t) / (kPi * t);
    const double w = 0.54 - 0.46 * std::cos(2.0 * kPi * i / (n - 1));
    h[i] = sinc * w;
    sum += h[i];
  }
  for (auto& v : h) v /= sum;
  return h;
}

} // namespace

void FilterSpec::validate(double rate) const {
  if (rate <= 0.0) throw std::runtime_error("bandpass: rate must be positive");
  if (!(low_hz > 0.0 && low_hz < high_hz && high_hz < rate / 2.0))
    throw std::runtime_error("bandpass: need 0 < low < high < rate/2");
  if (transition_low_hz <= 0.0 || transition_high_hz <= 0.0)
    throw std::runtime_error("bandpass: transition widths must be positive");
  if (low_hz - transition_low_hz / 2.0 < 0.0)
    throw std::runtime_error("bandpass: low-edge transition reaches below 0 Hz");
  if (high_hz + transition_high_hz / 2.0 >= rate / 2.0)
    throw std::runtime_error("bandpass: high-edge transition reaches Nyquist");
}

std::vector<double> design_bandpass_taps(const FilterSpec& spec, double rate) {
  spec.validate(rate);
  // High-pass by spectral inversion of a low-pass at the low cutoff; the
  // inverted filter has exactly zero DC gain.
  auto hp = lowpass_taps(spec.low_hz, spec.transition_low_hz, rate);
  for (auto& v : hp) v = -v;
  hp[(hp.size() - 1) / 2] += 1.0;

  const auto lp = lowpass_taps(spec.high_hz, spec.transition_high_hz, rate);
  auto band = fft_convolve(hp, lp);

  // Convolving two symmetric responses keeps symmetry up to FFT rounding;
  // restore it exactly so the zero-phase slice is exact.
  const size_t n = band.size();
  for (size_t i = 0; i < n / 2; ++i) {
    const double v = 0.5 * (band[i] + band[n - 1 - i]);
    band[i] = v;
    band[n - 1 - i] = v;
  }
  return band;
}

double filter_response_db(const std::vector<double>& taps, double freq_hz, double rate) {
  double re = 0.0, im = 0.0;
  const double w = 2.0 * kPi * freq_hz / rate;
  for (size_t k = 0; k < taps.size(); ++k) {
    re += taps[k] * std::cos(w * static_cast<double>(k));
    im -= taps[k] * std::sin(w * static_cast<double>(k));
  }
  const double mag = std::sqrt(re * re + im * im);
  return 20.0 * std::log10(std::max(mag, 1e-30));
}

std::vector<double> filter_zero_phase(const std::vector<double>& x,
                                      const std::vector<double>& taps) {
  if (taps.size() % 2 != 1)
    throw std::runtime_error("filter_zero_phase: taps length must be odd");
  const size_t t_len = x.size();
  if (t_len == 0) return {};
  const size_t delay = (taps.size() - 1) / 2;
  const size_t pad = delay;

  // Reflect across the first/last sample so the filter never sees a step
  // at the recording edges.
  std::vector<double> padded;
  padded.reserve(t_len + 2 * pad);
  for (size_t d = pad; d >= 1; --d) padded.push_back(x[std::min(d, t_len - 1)]);
  padded.insert(padded.end(), x.begin(), x.end());
  for (size_t d = 1; d <= pad; ++d)
    padded.push_back(x[t_len - 1 - std::min(d, t_len - 1)]);

  const auto conv = fft_convolve(padded, taps);
  std::vector<double> out(t_len);
  for (size_t t = 0; t < t_len; ++t) out[t] = conv[t + pad + delay];
  return out;
}

Recording bandpass(const Recording& rec, const FilterSpec& spec) {
  const auto taps = design_bandpass_taps(spec, rec.rate);
  Recording out = rec;
  const auto n_ch = static_cast<long>(rec.n_channels());
#pragma omp parallel for schedule(dynamic)
  for (long c = 0; c < n_ch; ++c) {
    std::vector<double> x(rec.data[c].begin(), rec.data[c].end());
    const auto y = filter_zero_phase(x, taps);
    for (size_t t = 0; t < y.size(); ++t) out.data[c][t] = static_cast<float>(y[t]);
  }
  return out;
}

} // namespace eegkit
