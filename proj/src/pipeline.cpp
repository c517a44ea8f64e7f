#include "eegkit/pipeline.hpp"

#include "eegkit/lof.hpp"
#include "eegkit/montage.hpp"
#include "eegkit/spline_interp.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eegkit {

Recording rereference(const Recording& rec, const std::string& ref) {
  const int ref_idx = rec.channel_index(ref);
  if (ref_idx < 0)
    throw std::runtime_error("rereference: unknown reference channel " + ref);
  Recording out = rec;
  const auto& ref_row = rec.data[static_cast<size_t>(ref_idx)];
  const size_t n = rec.n_samples();
  for (size_t c = 0; c < rec.n_channels(); ++c)
    for (size_t i = 0; i < n; ++i) out.data[c][i] = rec.data[c][i] - ref_row[i];
  return out;
}

IntervalRejection reject_intervals(const Recording& rec, double auto_threshold_uv,
                                   double window_s,
                                   const std::vector<std::pair<double, double>>& manual) {
  if (window_s <= 0.0)
    throw std::runtime_error("reject_intervals: window must be positive");
  const size_t n = rec.n_samples();
  std::vector<uint8_t> drop(n, 0);

  const auto win = static_cast<size_t>(std::llround(window_s * rec.rate));
  if (std::isfinite(auto_threshold_uv) && win > 0) {
    for (size_t start = 0; start < n; start += win) {
      const size_t end = std::min(n, start + win);
      bool exceeded = false;
      for (size_t c = 0; c < rec.n_channels() && !exceeded; ++c) {
        float lo = rec.data[c][start], hi = lo;
        for (size_t i = start; i < end; ++i) {
          lo = std::min(lo, rec.data[c][i]);
          hi = std::max(hi, rec.data[c][i]);
        }
        exceeded = (hi - lo) > auto_threshold_uv;
      }
      if (exceeded) std::fill(drop.begin() + start, drop.begin() + end, 1);
    }
  }
  for (const auto& [a, b] : manual) {
    if (a < 0.0 || b < a || a * rec.rate > static_cast<double>(n))
      throw std::runtime_error("reject_intervals: manual interval out of bounds");
    const auto lo = static_cast<size_t>(std::llround(a * rec.rate));
    const auto hi = std::min(n, static_cast<size_t>(std::llround(b * rec.rate)));
    std::fill(drop.begin() + lo, drop.begin() + hi, 1);
  }

  IntervalRejection out;
  out.rec.rate = rec.rate;
  out.rec.channels = rec.channels;
  out.rec.meta = rec.meta;

  // contiguous cut ranges, for the log
  for (size_t i = 0; i < n;) {
    if (!drop[i]) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < n && drop[j]) ++j;
    out.cut.emplace_back(i, j);
    i = j;
  }

  size_t kept = 0;
  std::vector<size_t> new_index(n, 0);
  for (size_t i = 0; i < n; ++i) {
    new_index[i] = kept;
    if (!drop[i]) ++kept;
  }
  if (kept == 0) throw std::runtime_error("reject_intervals: no data remaining");

  out.rec.data.assign(rec.n_channels(), {});
  for (size_t c = 0; c < rec.n_channels(); ++c) {
    out.rec.data[c].reserve(kept);
    for (size_t i = 0; i < n; ++i)
      if (!drop[i]) out.rec.data[c].push_back(rec.data[c][i]);
  }
  for (const auto& m : rec.markers) {
    if (m.sample < n && drop[m.sample]) {
      ++out.markers_dropped;
      continue;
    }
    EventMarker moved = m;
    moved.sample = m.sample < n ? new_index[m.sample] : kept;
    if (moved.sample >= kept) {
      ++out.markers_dropped;
      continue;
    }
    out.rec.markers.push_back(moved);
  }
  return out;
}

std::string PipelineReport::to_json() const {
  nlohmann::json j;
  j["bad_channels"] = bad_channels;
  j["intervals_rejected"] = intervals_rejected;
  j["seconds_rejected"] = seconds_rejected;
  j["markers_dropped"] = markers_dropped;
  j["ica_removed"] = ica_removed;
  j["ica_reasons"] = ica_reasons;
  j["ica_converged"] = ica_converged;
  j["ica_iterations"] = ica_iterations;
  j["trials_kept"] = trials_kept;
  j["trials_rejected"] = trials_rejected;
  j["trials_skipped"] = trials_skipped;
  return j.dump(2);
}

namespace {

template <typename F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("pipeline stage ") + name + ": " + e.what());
  }
}

} // namespace

PipelineResult run_pipeline(const Recording& rec, const PipelineConfig& cfg) {
  PipelineResult result;
  Recording cur = rec;

  if (cfg.do_filter)
    cur = stage("bandpass", [&] { return bandpass(cur, cfg.filter); });

  if (cfg.do_interval_reject) {
    auto rej = stage("reject_intervals", [&] {
      return reject_intervals(cur, cfg.interval_threshold_uv, cfg.interval_window_s,
                              cfg.manual_reject_intervals);
    });
    result.report.intervals_rejected = rej.cut.size();
    size_t cut_samples = 0;
    for (const auto& [a, b] : rej.cut) cut_samples += b - a;
    result.report.seconds_rejected = static_cast<double>(cut_samples) / cur.rate;
    result.report.markers_dropped = rej.markers_dropped;
    cur = std::move(rej.rec);
  }

  if (cfg.do_detect_bad)
    result.report.bad_channels = stage("detect_bad_channels", [&] {
      return detect_bad_channels(cur, cfg.lof_k, cfg.lof_threshold);
    });

  if (cfg.do_ica) {
    const auto model = stage("ica_fit", [&] { return ica_fit(cur, cfg.ica); });
    result.report.ica_converged = model.converged;
    result.report.ica_iterations = model.iterations;
    const auto flags =
        stage("ica_flag_components", [&] { return ica_flag_components(model, cur); });
    for (const auto& f : flags) {
      result.report.ica_removed.push_back(f.index);
      result.report.ica_reasons.push_back(f.reason);
    }
    if (!flags.empty())
      cur = stage("ica_remove",
                  [&] { return ica_remove(cur, model, result.report.ica_removed); });
  }

  if (cfg.do_interpolate && !result.report.bad_channels.empty()) {
    const auto montage = standard_montage();
    cur = stage("interpolate",
                [&] { return interpolate(cur, montage, result.report.bad_channels); });
  }

  if (cfg.do_rereference)
    cur = stage("rereference", [&] { return rereference(cur, cfg.reference); });

  // Oddball recordings epoch on standard/deviant; the resting task has no
  // trial structure, so its cleaned continuous data is the product.
  auto code_map = cfg.code_map;
  if (code_map.empty()) {
    const auto task = cur.meta.count("task") ? cur.meta.at("task") : "";
    if (task == "auditory" || task == "visual" || task.empty()) {
      bool has_std = false, has_dev = false;
      for (const auto& m : cur.markers) {
        has_std |= m.code == kMarkerStandard;
        has_dev |= m.code == kMarkerDeviant;
      }
      if (has_std) code_map["standard"] = {kMarkerStandard};
      if (has_dev) code_map["deviant"] = {kMarkerDeviant};
    }
  }

  if (!code_map.empty()) {
    auto ep = stage("epoch", [&] {
      return epoch(cur, code_map, cfg.epoch_t_min_s, cfg.epoch_t_max_s,
                   cfg.baseline_min_s, cfg.baseline_max_s);
    });
    ep = stage("reject_epochs", [&] { return reject_epochs(ep, cfg.epoch_reject_uv); });
    for (const auto& [label, trials] : ep.conditions) {
      result.report.trials_kept[label] = trials.size();
      result.report.trials_rejected[label] = ep.rejected.count(label) ? ep.rejected.at(label) : 0;
      result.report.trials_skipped[label] =
          ep.skipped_boundary.count(label) ? ep.skipped_boundary.at(label) : 0;
    }
    result.epochs = std::move(ep);
  }

  result.cleaned = std::move(cur);
  return result;
}

} // namespace eegkit
