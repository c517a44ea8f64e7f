#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eegkit/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

using namespace eegkit;

TEST_CASE("oddball config validation") {
  OddballConfig cfg = auditory_config();
  CHECK_NOTHROW(cfg.validate());

  cfg.n_trials = 361;  // not divisible into 4 blocks
  CHECK_THROWS_AS(cfg.validate(), std::runtime_error);

  cfg = auditory_config();
  cfg.deviant_fraction = 0.15;  // 0.15 * 90 = 13.5 deviants per block
  CHECK_THROWS_AS(cfg.validate(), std::runtime_error);

  cfg = auditory_config();
  cfg.isi_min_ms = 700.0;  // min > max
  CHECK_THROWS_AS(cfg.validate(), std::runtime_error);

  cfg = auditory_config();
  cfg.deviant_fraction = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::runtime_error);
}

// The composition every generated schedule must have, regardless of seed.
static void check_schedule(const TrialSchedule& s, const OddballConfig& cfg) {
  REQUIRE(static_cast<int>(s.trials.size()) == cfg.n_trials);

  const int block_size = cfg.n_trials / cfg.n_blocks;
  const int dev_per_block =
      static_cast<int>(std::lround(cfg.deviant_fraction * block_size));

  int total_dev = 0;
  std::vector<int> block_dev(cfg.n_blocks, 0);
  double prev_onset = -1.0;
  for (size_t i = 0; i < s.trials.size(); ++i) {
    const auto& tr = s.trials[i];
    REQUIRE(tr.block == static_cast<int>(i) / block_size + 1);
    REQUIRE(tr.onset_ms > prev_onset);
    if (i > 0) {
      // gap between consecutive onsets = stimulus duration + ISI
      const double gap = tr.onset_ms - s.trials[i - 1].onset_ms;
      REQUIRE(gap >= cfg.stim_duration_ms + cfg.isi_min_ms - 1e-9);
      REQUIRE(gap <= cfg.stim_duration_ms + cfg.isi_max_ms + 1e-9);
    }
    prev_onset = tr.onset_ms;
    if (tr.deviant) {
      ++total_dev;
      ++block_dev[tr.block - 1];
    }
  }
  REQUIRE(total_dev == static_cast<int>(std::lround(cfg.deviant_fraction * cfg.n_trials)));
  for (int b = 0; b < cfg.n_blocks; ++b) REQUIRE(block_dev[b] == dev_per_block);
  REQUIRE(s.total_duration_ms >= s.trials.back().onset_ms + cfg.stim_duration_ms);
}

TEST_CASE("auditory and visual schedules keep exact composition over 1000 seeds") {
  const auto aud = auditory_config();
  const auto vis = visual_config();
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    check_schedule(gen_schedule(aud, seed), aud);
    check_schedule(gen_schedule(vis, seed), vis);
  }
}

TEST_CASE("schedules are deterministic per seed and differ across seeds") {
  const auto cfg = auditory_config();
  const auto a = gen_schedule(cfg, 5);
  const auto b = gen_schedule(cfg, 5);
  const auto c = gen_schedule(cfg, 6);
  REQUIRE(a.trials.size() == b.trials.size());
  bool same_ab = true, same_ac = true;
  for (size_t i = 0; i < a.trials.size(); ++i) {
    same_ab = same_ab && a.trials[i].onset_ms == b.trials[i].onset_ms &&
              a.trials[i].deviant == b.trials[i].deviant;
    same_ac = same_ac && a.trials[i].deviant == c.trials[i].deviant;
  }
  CHECK(same_ab);
  CHECK_FALSE(same_ac);
}

TEST_CASE("deviant positions are uniform within blocks across seeds") {
  // Chi-square over the 90 within-block slots, pooled over many seeds.
  const auto cfg = auditory_config();
  const int block_size = cfg.n_trials / cfg.n_blocks;
  std::vector<int> slot_counts(block_size, 0);
  int total = 0;
  for (uint64_t seed = 0; seed < 250; ++seed) {
    const auto s = gen_schedule(cfg, seed);
    for (size_t i = 0; i < s.trials.size(); ++i)
      if (s.trials[i].deviant) {
        ++slot_counts[i % block_size];
        ++total;
      }
  }
  const double expected = static_cast<double>(total) / block_size;
  double chi2 = 0.0;
  for (int c : slot_counts) chi2 += (c - expected) * (c - expected) / expected;
  // df = 89; 99.9% quantile ~ 135. Uniform shuffles should sit far below.
  CHECK(chi2 < 135.0);
}

TEST_CASE("mean onset gap approaches stimulus + mean ISI") {
  const auto cfg = auditory_config();
  double sum = 0.0;
  int count = 0;
  for (uint64_t seed = 0; seed < 30; ++seed) {
    const auto s = gen_schedule(cfg, seed);
    for (size_t i = 1; i < s.trials.size(); ++i) {
      sum += s.trials[i].onset_ms - s.trials[i - 1].onset_ms;
      ++count;
    }
  }
  const double expected = cfg.stim_duration_ms + 0.5 * (cfg.isi_min_ms + cfg.isi_max_ms);
  CHECK(sum / count == doctest::Approx(expected).epsilon(0.005));
}

TEST_CASE("eyes schedule and marker conversion") {
  const auto markers = eyes_schedule(60.0, 60.0, 500.0);
  REQUIRE(markers.size() == 2);
  CHECK(markers[0].sample == 0);
  CHECK(markers[0].code == kMarkerEyesOpen);
  CHECK(markers[1].sample == 30000);
  CHECK(markers[1].code == kMarkerEyesClosed);

  const auto cfg = auditory_config();
  const auto sched = gen_schedule(cfg, 3);
  const auto evs = schedule_to_markers(sched, 500.0);
  // one marker per trial plus one block-start marker per block
  REQUIRE(evs.size() == sched.trials.size() + static_cast<size_t>(cfg.n_blocks));

  size_t blocks_seen = 0, std_seen = 0, dev_seen = 0;
  for (const auto& ev : evs) {
    if (ev.code >= kMarkerBlockBase) {
      ++blocks_seen;
      CHECK(ev.label == "block_start");
    } else if (ev.code == kMarkerStandard) {
      ++std_seen;
    } else if (ev.code == kMarkerDeviant) {
      ++dev_seen;
    }
  }
  CHECK(blocks_seen == 4);
  CHECK(std_seen == 288);
  CHECK(dev_seen == 72);

  // samples are the rounded onset times
  const auto& first = sched.trials.front();
  bool found = false;
  for (const auto& ev : evs)
    if (ev.code < kMarkerBlockBase &&
        ev.sample == static_cast<uint64_t>(std::llround(first.onset_ms * 0.5))) {
      found = true;
      break;
    }
  CHECK(found);

  // markers arrive sorted
  for (size_t i = 1; i < evs.size(); ++i) CHECK(evs[i - 1].sample <= evs[i].sample);
}
