#include "eegkit/recording.hpp"

#include <set>
#include <stdexcept>

namespace eegkit {

int Recording::channel_index(const std::string& label) const {
  for (size_t i = 0; i < channels.size(); ++i)
    if (channels[i] == label) return static_cast<int>(i);
  return -1;
}

void Recording::validate() const {
  if (!(rate > 0.0)) throw std::runtime_error("recording: rate must be > 0");
  if (channels.size() != data.size())
    throw std::runtime_error("recording: channel label count does not match data rows");

  std::set<std::string> seen;
  for (const auto& ch : channels) {
    if (ch.empty()) throw std::runtime_error("recording: empty channel label");
    if (!seen.insert(ch).second)
      throw std::runtime_error("recording: duplicate channel label '" + ch + "'");
  }

  const size_t n = n_samples();
  for (size_t c = 0; c < data.size(); ++c)
    if (data[c].size() != n)
      throw std::runtime_error("recording: channel '" + channels[c] + "' has ragged sample count");

  uint64_t prev = 0;
  bool first = true;
  for (const auto& m : markers) {
    if (!first && m.sample < prev)
      throw std::runtime_error("recording: markers not sorted by sample index");
    if (m.sample >= n)
      throw std::runtime_error("recording: marker out of range (sample " +
                               std::to_string(m.sample) + " >= " + std::to_string(n) + ")");
    prev = m.sample;
    first = false;
  }
}

} // namespace eegkit
