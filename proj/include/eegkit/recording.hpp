#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace eegkit {

// Fixed marker codes so files on disk stay self-describing.
inline constexpr uint16_t kMarkerStandard = 1;
inline constexpr uint16_t kMarkerDeviant = 2;
inline constexpr uint16_t kMarkerEyesOpen = 10;
inline constexpr uint16_t kMarkerEyesClosed = 11;
inline constexpr uint16_t kMarkerBlockBase = 100;  // block b start = 100 + b (b from 1)

struct EventMarker {
  uint64_t sample{0};
  uint16_t code{0};
  std::string label;

  friend bool operator==(const EventMarker&, const EventMarker&) = default;
};

// Multichannel time series in microvolts plus event markers. Samples are
// stored as one contiguous float row per channel. Immutable by convention
// once built: pipeline stages take a Recording and return a new one.
struct Recording {
  double rate{0.0};  // Hz
  std::vector<std::string> channels;
  std::vector<std::vector<float>> data;  // [channel][sample], uV
  std::vector<EventMarker> markers;
  std::map<std::string, std::string> meta;

  size_t n_channels() const { return channels.size(); }
  size_t n_samples() const { return data.empty() ? 0 : data.front().size(); }
  double duration_s() const { return rate > 0.0 ? static_cast<double>(n_samples()) / rate : 0.0; }

  // Index of a channel label, -1 when absent.
  int channel_index(const std::string& label) const;

  // Throws std::runtime_error naming the first violated invariant:
  // positive rate, unique labels, equal row lengths, markers sorted and
  // in range.
  void validate() const;

  friend bool operator==(const Recording&, const Recording&) = default;
};

} // namespace eegkit
