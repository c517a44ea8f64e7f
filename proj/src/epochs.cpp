#include "eegkit/epochs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eegkit {

size_t Epochs::n_times() const {
  const auto lo = static_cast<long>(std::llround(t_min_s * rate));
  const auto hi = static_cast<long>(std::llround(t_max_s * rate));
  return hi > lo ? static_cast<size_t>(hi - lo) : 0;
}

std::vector<double> Epochs::times_ms() const {
  const auto lo = static_cast<long>(std::llround(t_min_s * rate));
  std::vector<double> t(n_times());
  for (size_t i = 0; i < t.size(); ++i)
    t[i] = 1000.0 * static_cast<double>(lo + static_cast<long>(i)) / rate;
  return t;
}

size_t Epochs::n_trials(const std::string& condition) const {
  const auto it = conditions.find(condition);
  return it == conditions.end() ? 0 : it->second.size();
}

Epochs epoch(const Recording& rec,
             const std::map<std::string, std::vector<uint16_t>>& code_map,
             double t_min_s, double t_max_s, double b_min_s, double b_max_s) {
  if (t_min_s >= t_max_s) throw std::runtime_error("epoch: empty window");
  if (b_min_s < t_min_s || b_max_s > t_max_s)
    throw std::runtime_error("epoch: baseline outside the epoch window");
  if (code_map.empty()) throw std::runtime_error("epoch: empty condition map");

  Epochs ep;
  ep.t_min_s = t_min_s;
  ep.t_max_s = t_max_s;
  ep.b_min_s = b_min_s;
  ep.b_max_s = b_max_s;
  ep.rate = rec.rate;
  ep.channels = rec.channels;

  const auto lo = static_cast<long>(std::llround(t_min_s * rec.rate));
  const auto hi = static_cast<long>(std::llround(t_max_s * rec.rate));
  const auto b_lo = static_cast<long>(std::llround(b_min_s * rec.rate));
  const auto b_hi = static_cast<long>(std::llround(b_max_s * rec.rate));
  const size_t n_times = static_cast<size_t>(hi - lo);
  const auto n_total = static_cast<long>(rec.n_samples());

  for (const auto& [label, codes] : code_map) {
    auto& trials = ep.conditions[label];
    size_t skipped = 0;
    for (const auto& m : rec.markers) {
      if (std::find(codes.begin(), codes.end(), m.code) == codes.end()) continue;
      const long onset = static_cast<long>(m.sample);
      if (onset + lo < 0 || onset + hi > n_total) {
        ++skipped;
        continue;
      }
      std::vector<std::vector<float>> trial(rec.n_channels(),
                                            std::vector<float>(n_times));
      for (size_t c = 0; c < rec.n_channels(); ++c) {
        const auto& row = rec.data[c];
        double base = 0.0;
        if (b_hi > b_lo) {
          for (long s = b_lo; s < b_hi; ++s) base += row[static_cast<size_t>(onset + s)];
          base /= static_cast<double>(b_hi - b_lo);
        }
        for (size_t i = 0; i < n_times; ++i)
          trial[c][i] = static_cast<float>(
              static_cast<double>(row[static_cast<size_t>(onset + lo) + i]) - base);
      }
      trials.push_back(std::move(trial));
    }
    ep.skipped_boundary[label] = skipped;
    if (trials.empty())
      throw std::runtime_error("epoch: no extractable trials for condition '" + label + "'");
  }
  return ep;
}

Epochs reject_epochs(const Epochs& ep, double threshold_uv) {
  if (threshold_uv <= 0.0)
    throw std::runtime_error("reject_epochs: threshold must be positive");
  Epochs out = ep;
  for (auto& [label, trials] : out.conditions) {
    std::vector<std::vector<std::vector<float>>> kept;
    kept.reserve(trials.size());
    size_t dropped = 0;
    for (auto& trial : trials) {
      bool ok = true;
      for (const auto& ch : trial) {
        for (float v : ch)
          if (std::abs(static_cast<double>(v)) > threshold_uv) {
            ok = false;
            break;
          }
        if (!ok) break;
      }
      if (ok)
        kept.push_back(std::move(trial));
      else
        ++dropped;
    }
    if (kept.empty())
      throw std::runtime_error("reject_epochs: all trials rejected for condition '" +
                               label + "'");
    trials = std::move(kept);
    out.rejected[label] += dropped;
  }
  return out;
}

ErpResult erp_average(const Epochs& ep, const std::string& condition) {
  const auto it = ep.conditions.find(condition);
  if (it == ep.conditions.end() || it->second.empty())
    throw std::runtime_error("erp_average: missing condition '" + condition + "'");
  const auto& trials = it->second;
  const size_t n_ch = trials.front().size();
  const size_t n_t = trials.front().front().size();

  ErpResult out;
  out.times_ms = ep.times_ms();
  out.condition = condition;
  out.channels = ep.channels;
  out.n_trials = trials.size();
  out.mean.assign(n_ch, std::vector<double>(n_t, 0.0));
  out.sd.assign(n_ch, std::vector<double>(n_t, 0.0));

  for (const auto& trial : trials)
    for (size_t c = 0; c < n_ch; ++c)
      for (size_t t = 0; t < n_t; ++t) out.mean[c][t] += trial[c][t];
  const double inv_n = 1.0 / static_cast<double>(trials.size());
  for (size_t c = 0; c < n_ch; ++c)
    for (size_t t = 0; t < n_t; ++t) out.mean[c][t] *= inv_n;

  if (trials.size() > 1) {
    for (const auto& trial : trials)
      for (size_t c = 0; c < n_ch; ++c)
        for (size_t t = 0; t < n_t; ++t) {
          const double d = trial[c][t] - out.mean[c][t];
          out.sd[c][t] += d * d;
        }
    for (size_t c = 0; c < n_ch; ++c)
      for (size_t t = 0; t < n_t; ++t)
        out.sd[c][t] = std::sqrt(out.sd[c][t] / static_cast<double>(trials.size() - 1));
  }
  return out;
}

} // namespace eegkit
