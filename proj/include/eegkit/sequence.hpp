#pragma once

#include "eegkit/recording.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace eegkit {

enum class TaskKind { eyes, auditory, visual };

std::string task_name(TaskKind t);
TaskKind task_from_name(const std::string& name);  // throws on unknown name

struct OddballConfig {
  int n_trials{360};
  int n_blocks{4};
  double deviant_fraction{0.20};
  double stim_duration_ms{100.0};
  double isi_min_ms{500.0};
  double isi_max_ms{600.0};
  TaskKind modality{TaskKind::auditory};
  std::string std_descriptor;
  std::string dev_descriptor;

  // Throws naming the violated field: block divisibility, fraction range,
  // ISI ordering, integer per-block deviant count.
  void validate() const;
};

OddballConfig auditory_config();  // 360 trials, 4 blocks, 20% 900Hz deviants
OddballConfig visual_config();    // 360 images, 4 blocks, 20% face deviants

struct Trial {
  double onset_ms{0.0};
  bool deviant{false};
  int block{0};  // 1-based
};

struct TrialSchedule {
  std::vector<Trial> trials;  // onsets strictly increasing
  double total_duration_ms{0.0};
};

// Block-randomized schedule: each block holds exactly
// deviant_fraction * block_size deviants, order shuffled per seed, ISIs
// (stimulus offset to next onset) uniform on [isi_min, isi_max].
TrialSchedule gen_schedule(const OddballConfig& cfg, uint64_t seed);

// Resting-state task: eyes-open marker at t=0, eyes-closed at t=open_s.
std::vector<EventMarker> eyes_schedule(double open_s, double closed_s, double rate);

// One marker per trial (code 1 standard / 2 deviant) plus a block-start
// marker (code 100+b) at each block's first-trial onset.
std::vector<EventMarker> schedule_to_markers(const TrialSchedule& sched, double rate);

} // namespace eegkit
