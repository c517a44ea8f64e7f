#include "eegkit/sequence.hpp"

#include "eegkit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eegkit {

std::string task_name(TaskKind t) {
  switch (t) {
    case TaskKind::eyes: return "eyes";
    case TaskKind::auditory: return "auditory";
    case TaskKind::visual: return "visual";
  }
  throw std::runtime_error("task_name: invalid task kind");
}

TaskKind task_from_name(const std::string& name) {
  if (name == "eyes") return TaskKind::eyes;
  if (name == "auditory") return TaskKind::auditory;
  if (name == "visual") return TaskKind::visual;
  throw std::runtime_error("task_from_name: unknown task '" + name + "'");
}

void OddballConfig::validate() const {
  if (n_trials <= 0 || n_blocks <= 0)
    throw std::runtime_error("OddballConfig: n_trials and n_blocks must be positive");
  if (n_trials % n_blocks != 0)
    throw std::runtime_error("OddballConfig: n_trials not divisible by n_blocks");
  if (!(deviant_fraction > 0.0 && deviant_fraction < 1.0))
    throw std::runtime_error("OddballConfig: deviant_fraction must lie in (0, 1)");
  if (stim_duration_ms <= 0.0)
    throw std::runtime_error("OddballConfig: stim_duration_ms must be positive");
  if (isi_min_ms < 0.0 || isi_min_ms > isi_max_ms)
    throw std::runtime_error("OddballConfig: need 0 <= isi_min_ms <= isi_max_ms");
  const double per_block = deviant_fraction * (n_trials / n_blocks);
  if (std::abs(per_block - std::round(per_block)) > 1e-9)
    throw std::runtime_error(
        "OddballConfig: deviant_fraction * block size is not an integer");
}

OddballConfig auditory_config() {
  OddballConfig cfg;
  cfg.n_trials = 360;
  cfg.n_blocks = 4;
  cfg.deviant_fraction = 0.20;
  cfg.stim_duration_ms = 100.0;
  cfg.isi_min_ms = 500.0;
  cfg.isi_max_ms = 600.0;
  cfg.modality = TaskKind::auditory;
  cfg.std_descriptor = "600Hz";
  cfg.dev_descriptor = "900Hz";
  return cfg;
}

OddballConfig visual_config() {
  OddballConfig cfg;
  cfg.n_trials = 360;
  cfg.n_blocks = 4;
  cfg.deviant_fraction = 0.20;
  cfg.stim_duration_ms = 300.0;
  cfg.isi_min_ms = 250.0;
  cfg.isi_max_ms = 350.0;
  cfg.modality = TaskKind::visual;
  cfg.std_descriptor = "object";
  cfg.dev_descriptor = "face";
  return cfg;
}

TrialSchedule gen_schedule(const OddballConfig& cfg, uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  const int block_size = cfg.n_trials / cfg.n_blocks;
  const int deviants_per_block =
      static_cast<int>(std::llround(cfg.deviant_fraction * block_size));

  TrialSchedule sched;
  sched.trials.reserve(cfg.n_trials);
  double t = 0.0;
  for (int b = 0; b < cfg.n_blocks; ++b) {
    // exact per-block deviant count, uniformly shuffled (Fisher-Yates)
    std::vector<bool> kinds(block_size, false);
    std::fill(kinds.begin(), kinds.begin() + deviants_per_block, true);
    for (int i = block_size - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(i) + 1));
      std::swap(kinds[i], kinds[j]);
    }
    for (int i = 0; i < block_size; ++i) {
      sched.trials.push_back({t, kinds[i], b + 1});
      t += cfg.stim_duration_ms + rng.uniform(cfg.isi_min_ms, cfg.isi_max_ms);
    }
  }
  sched.total_duration_ms = t;
  return sched;
}

std::vector<EventMarker> eyes_schedule(double open_s, double closed_s, double rate) {
  if (open_s <= 0.0 || closed_s <= 0.0)
    throw std::runtime_error("eyes_schedule: durations must be positive");
  if (rate <= 0.0) throw std::runtime_error("eyes_schedule: rate must be positive");
  std::vector<EventMarker> markers;
  markers.push_back({0, kMarkerEyesOpen, "eyes_open"});
  markers.push_back({static_cast<uint64_t>(std::llround(open_s * rate)),
                     kMarkerEyesClosed, "eyes_closed"});
  return markers;
}

std::vector<EventMarker> schedule_to_markers(const TrialSchedule& sched, double rate) {
  if (rate <= 0.0)
    throw std::runtime_error("schedule_to_markers: rate must be positive");
  std::vector<EventMarker> markers;
  markers.reserve(sched.trials.size() + 8);
  int current_block = 0;
  for (const auto& trial : sched.trials) {
    const auto sample = static_cast<uint64_t>(std::llround(trial.onset_ms * rate / 1000.0));
    if (trial.block != current_block) {
      current_block = trial.block;
      markers.push_back({sample, static_cast<uint16_t>(kMarkerBlockBase + trial.block),
                         "block_start"});
    }
    markers.push_back({sample, trial.deviant ? kMarkerDeviant : kMarkerStandard,
                       trial.deviant ? "deviant" : "standard"});
  }
  return markers;
}

} // namespace eegkit
