#include "eegkit/psd.hpp"

#include <cmath>
#include <stdexcept>

namespace eegkit {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

} // namespace

ChannelPsd welch_psd_channel(const std::vector<double>& x, double rate,
                             double window_s, double overlap, double max_freq) {
  if (rate <= 0.0) throw std::runtime_error("welch_psd: rate must be positive");
  if (window_s <= 0.0) throw std::runtime_error("welch_psd: window must be positive");
  if (overlap < 0.0 || overlap >= 1.0)
    throw std::runtime_error("welch_psd: overlap must lie in [0, 1)");
  const size_t nper = static_cast<size_t>(std::llround(window_s * rate));
  if (nper < 2 || x.size() < nper)
    throw std::runtime_error("welch_psd: segment shorter than one window");

  const size_t hop = std::max<size_t>(1, static_cast<size_t>(
                                             std::llround(nper * (1.0 - overlap))));
  const size_t n_segments = 1 + (x.size() - nper) / hop;

  // Periodic Hann window; U = sum of squares for density normalization.
  std::vector<double> w(nper);
  double u = 0.0;
  for (size_t i = 0; i < nper; ++i) {
    w[i] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(i) / nper));
    u += w[i] * w[i];
  }

  ChannelPsd out;
  const auto max_bin = static_cast<size_t>(std::floor(max_freq * window_s + 1e-9));
  const size_t n_bins = std::min(max_bin, nper / 2) + 1;
  out.freqs.resize(n_bins);
  out.power.assign(n_bins, 0.0);
  for (size_t k = 0; k < n_bins; ++k) out.freqs[k] = static_cast<double>(k) / window_s;

  // The window length is rarely a power of two, so the bins of interest are
  // evaluated directly against precomputed cos/sin tables; the 0-30 Hz grid
  // is far smaller than a full transform anyway.
  std::vector<double> cos_tab(n_bins * nper), sin_tab(n_bins * nper);
  for (size_t k = 0; k < n_bins; ++k)
    for (size_t i = 0; i < nper; ++i) {
      const double a = kTwoPi * static_cast<double>(k) * static_cast<double>(i) /
                       static_cast<double>(nper);
      cos_tab[k * nper + i] = std::cos(a);
      sin_tab[k * nper + i] = std::sin(a);
    }

  std::vector<double> seg(nper);
  for (size_t s = 0; s < n_segments; ++s) {
    const double* xs = x.data() + s * hop;
    for (size_t i = 0; i < nper; ++i) seg[i] = xs[i] * w[i];
    for (size_t k = 0; k < n_bins; ++k) {
      double re = 0.0, im = 0.0;
      const double* ct = cos_tab.data() + k * nper;
      const double* st = sin_tab.data() + k * nper;
      for (size_t i = 0; i < nper; ++i) {
        re += seg[i] * ct[i];
        im -= seg[i] * st[i];
      }
      out.power[k] += re * re + im * im;
    }
  }

  const double scale = 1.0 / (rate * u * static_cast<double>(n_segments));
  for (size_t k = 0; k < n_bins; ++k) {
    // one-sided: double everything except DC and (when present) Nyquist
    const bool edge = k == 0 || 2 * k == nper;
    out.power[k] *= scale * (edge ? 1.0 : 2.0);
  }
  return out;
}

PsdResult welch_psd(const Recording& rec, size_t start, size_t end,
                    double window_s, double overlap, double max_freq) {
  if (end > rec.n_samples() || start >= end)
    throw std::runtime_error("welch_psd: bad span");
  PsdResult out;
  out.channels = rec.channels;
  for (size_t c = 0; c < rec.n_channels(); ++c) {
    std::vector<double> x(rec.data[c].begin() + static_cast<long>(start),
                          rec.data[c].begin() + static_cast<long>(end));
    auto ch = welch_psd_channel(x, rec.rate, window_s, overlap, max_freq);
    if (c == 0) out.freqs = ch.freqs;
    out.power.push_back(std::move(ch.power));
  }
  return out;
}

std::vector<double> band_power(const PsdResult& psd, double lo_hz, double hi_hz) {
  if (lo_hz > hi_hz) throw std::runtime_error("band_power: lo > hi");
  size_t first = psd.freqs.size(), last = 0;
  for (size_t k = 0; k < psd.freqs.size(); ++k) {
    if (psd.freqs[k] >= lo_hz - 1e-9 && first == psd.freqs.size()) first = k;
    if (psd.freqs[k] <= hi_hz + 1e-9) last = k;
  }
  if (first >= psd.freqs.size() || last < first)
    throw std::runtime_error("band_power: band contains no frequency bins");

  std::vector<double> out(psd.power.size(), 0.0);
  for (size_t c = 0; c < psd.power.size(); ++c) {
    double acc = 0.0;
    for (size_t k = first; k < last; ++k)
      acc += 0.5 * (psd.power[c][k] + psd.power[c][k + 1]) *
             (psd.freqs[k + 1] - psd.freqs[k]);
    out[c] = acc;
  }
  return out;
}

} // namespace eegkit
