#pragma once

#include "eegkit/recording.hpp"

#include <vector>

namespace eegkit {

// Hamming windowed-sinc band-pass, -6 dB at the two cutoffs. Transition
// widths are per edge: the low edge needs a much narrower (longer) filter
// than the high edge, so they are specified independently.
struct FilterSpec {
  double low_hz{0.3};
  double high_hz{30.0};
  double transition_low_hz{0.3};
  double transition_high_hz{7.5};

  void validate(double rate) const;  // throws when the band is infeasible
};

// Symmetric FIR taps: a windowed-sinc high-pass (spectral inversion, exact
// zero at DC) convolved with a windowed-sinc low-pass. Odd length.
std::vector<double> design_bandpass_taps(const FilterSpec& spec, double rate);

// |H(f)| of an FIR filter in dB (0 dB = unit gain).
double filter_response_db(const std::vector<double>& taps, double freq_hz, double rate);

// Zero-phase filtering: reflection-padded FFT convolution with the group
// delay removed, so output length equals input length and a pass-band sine
// comes back with zero lag. Markers are untouched. Channels run in parallel.
Recording bandpass(const Recording& rec, const FilterSpec& spec);

// Same operation on one raw channel; the building block bandpass() maps
// over channels (kept public as the serial reference for tests).
std::vector<double> filter_zero_phase(const std::vector<double>& x,
                                      const std::vector<double>& taps);

} // namespace eegkit
