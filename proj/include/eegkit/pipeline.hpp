#pragma once

#include "eegkit/epochs.hpp"
#include "eegkit/filter.hpp"
#include "eegkit/ica.hpp"
#include "eegkit/recording.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace eegkit {

// Every channel minus the reference channel's signal; the reference stays
// in the montage and becomes identically zero.
Recording rereference(const Recording& rec, const std::string& ref);

struct IntervalRejection {
  Recording rec;
  std::vector<std::pair<size_t, size_t>> cut;  // excised [start, end) sample ranges
  size_t markers_dropped{0};
};

// Excises fixed windows whose peak-to-peak on any channel exceeds the
// threshold, plus any manually listed [start_s, end_s) spans. Markers inside
// a cut are dropped; surviving markers are shifted to the stitched indices.
// An infinite/huge threshold and empty manual list is the identity.
IntervalRejection reject_intervals(
    const Recording& rec, double auto_threshold_uv, double window_s = 1.0,
    const std::vector<std::pair<double, double>>& manual = {});

struct PipelineConfig {
  FilterSpec filter{};
  bool do_filter{true};

  bool do_interval_reject{true};
  double interval_threshold_uv{250.0};
  double interval_window_s{1.0};
  std::vector<std::pair<double, double>> manual_reject_intervals;

  bool do_detect_bad{true};
  int lof_k{3};
  double lof_threshold{2.5};

  bool do_ica{true};
  IcaOptions ica{};

  bool do_interpolate{true};

  bool do_rereference{true};
  std::string reference{"Fz"};

  // Empty map: derived from the recording's task metadata (standard/deviant
  // for oddball tasks, no epoching for the resting task).
  std::map<std::string, std::vector<uint16_t>> code_map;
  double epoch_t_min_s{-0.1};
  double epoch_t_max_s{0.5};
  double baseline_min_s{-0.1};
  double baseline_max_s{0.0};
  double epoch_reject_uv{100.0};
};

struct PipelineReport {
  std::vector<std::string> bad_channels;
  size_t intervals_rejected{0};
  double seconds_rejected{0.0};
  size_t markers_dropped{0};
  std::vector<int> ica_removed;
  std::vector<std::string> ica_reasons;
  bool ica_converged{true};
  int ica_iterations{0};
  std::map<std::string, size_t> trials_kept;
  std::map<std::string, size_t> trials_rejected;
  std::map<std::string, size_t> trials_skipped;

  std::string to_json() const;  // stable key order, no timestamps
};

struct PipelineResult {
  Recording cleaned;  // continuous data after all channel-level stages
  Epochs epochs;      // empty for the resting task
  PipelineReport report;
};

// Filter -> interval rejection -> bad-channel detection -> ICA fit/flag/
// remove -> interpolation -> re-referencing -> epoching -> epoch rejection.
// Stage failures are rethrown with the stage name prefixed.
PipelineResult run_pipeline(const Recording& rec, const PipelineConfig& cfg);

} // namespace eegkit
