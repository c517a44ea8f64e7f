#pragma once

#include "eegkit/recording.hpp"

#include <string>
#include <vector>

namespace eegkit {

struct ChannelPsd {
  std::vector<double> freqs;  // Hz, ascending from 0
  std::vector<double> power;  // uV^2/Hz
};

struct PsdResult {
  std::vector<double> freqs;
  std::vector<std::vector<double>> power;  // channel x freq, uV^2/Hz
  std::string condition;
  std::vector<std::string> channels;
};

// Welch estimate for one raw channel: Hann-windowed overlapping segments,
// one-sided density scaling, frequency grid k/window_s for
// 0 <= k/window_s <= max_freq. Throws when x is shorter than one window.
ChannelPsd welch_psd_channel(const std::vector<double>& x, double rate,
                             double window_s = 2.0, double overlap = 0.5,
                             double max_freq = 30.0);

// Welch over every channel of a recording span [start, end).
PsdResult welch_psd(const Recording& rec, size_t start, size_t end,
                    double window_s = 2.0, double overlap = 0.5,
                    double max_freq = 30.0);

// Trapezoidal integral of the density over [lo_hz, hi_hz], per channel.
// Throws when the band contains no grid point.
std::vector<double> band_power(const PsdResult& psd, double lo_hz = 8.0,
                               double hi_hz = 12.0);

} // namespace eegkit
