#pragma once

#include "eegkit/recording.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace eegkit {

// Stimulus-locked trials cut from a continuous recording. Window and
// baseline are half-open in samples: [round(t_min*rate), round(t_max*rate)).
struct Epochs {
  // condition -> trial x channel x time, uV, baseline-corrected
  std::map<std::string, std::vector<std::vector<std::vector<float>>>> conditions;
  double t_min_s{-0.1};
  double t_max_s{0.5};
  double b_min_s{-0.1};
  double b_max_s{0.0};
  double rate{0.0};
  std::vector<std::string> channels;
  std::map<std::string, size_t> skipped_boundary;  // trials lost at the edges
  std::map<std::string, size_t> rejected;          // trials dropped by amplitude

  size_t n_times() const;
  std::vector<double> times_ms() const;  // time of each sample re stimulus onset
  size_t n_trials(const std::string& condition) const;
};

// Cuts one epoch per marker whose code appears in the condition's code
// list, subtracts the per-channel baseline mean, skips (and counts) trials
// that would cross the recording bounds. Throws when a condition ends up
// with zero extractable trials.
Epochs epoch(const Recording& rec,
             const std::map<std::string, std::vector<uint16_t>>& code_map,
             double t_min_s = -0.1, double t_max_s = 0.5,
             double b_min_s = -0.1, double b_max_s = 0.0);

// Drops trials where any channel exceeds the threshold in absolute value
// (strictly greater; a trial peaking exactly at the threshold is kept).
// Throws when a condition loses every trial.
Epochs reject_epochs(const Epochs& ep, double threshold_uv = 100.0);

struct ErpResult {
  std::vector<double> times_ms;
  std::vector<std::vector<double>> mean;  // channel x time, uV
  std::vector<std::vector<double>> sd;    // channel x time, uV
  size_t n_trials{0};
  std::string condition;
  std::vector<std::string> channels;
};

// Pointwise mean and (n-1) SD across a condition's trials.
ErpResult erp_average(const Epochs& ep, const std::string& condition);

} // namespace eegkit
