#pragma once

#include "eegkit/recording.hpp"
#include "eegkit/sequence.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace eegkit {

enum class NoiseKind { white, pink };

struct NoiseSpec {
  NoiseKind kind{NoiseKind::pink};
  double sigma{10.0};  // uV
  uint64_t seed{0};
};

// Channel gain maps: an empty map means gain 1 everywhere; otherwise
// channels absent from the map get gain 0.
struct AlphaSpec {
  double freq{10.0};  // Hz
  double amplitude_open{4.0};    // uV
  double amplitude_closed{8.0};  // uV
  std::map<std::string, double> channel_gains;
};

enum class ErpKind { p300, n170 };

struct ErpTemplate {
  ErpKind kind{ErpKind::p300};
  double latency_peak_ms{450.0};
  double width_ms{60.0};
  double amplitude{5.0};  // uV, signed (n170 negative)
  std::map<std::string, double> channel_gains;
};

struct ArtifactSpec {
  double blink_rate_per_min{0.0};
  double blink_amplitude{80.0};  // uV at full-gain channels
  std::vector<std::string> blink_channels;
  std::vector<std::string> bad_channels;
  double bad_noise_sigma{60.0};  // uV, replaces bad channel content
};

// Channel gains used when planting effects on the headband montage.
std::map<std::string, double> temporal_gains(double frontal_gain);  // T*/TP* 1.0, FP* given, Fz 0

AlphaSpec default_alpha();        // 10 Hz, 4 uV open / 8 uV closed, temporal-dominant
ErpTemplate default_p300();       // +5 uV, peak 450 ms, width 60 ms
ErpTemplate default_n170();       // -5 uV, peak 170 ms, width 25 ms
ArtifactSpec default_artifacts(); // 12 blinks/min at 80 uV + one bad channel (TP8) at 60 uV

// Background noise, independent per channel, deterministic per seed.
// Pink noise is white noise spectrally shaped to a 1/f power slope and
// rescaled so each channel's sample SD equals sigma exactly.
Recording gen_noise(const std::vector<std::string>& channels, double duration_s,
                    double rate, const NoiseSpec& spec);

// Adds a continuous-phase sinusoid whose amplitude switches between
// amplitude_open and amplitude_closed inside the given [start_s, end_s)
// intervals. Throws on overlapping or out-of-range intervals.
Recording inject_alpha(const Recording& rec, const AlphaSpec& spec,
                       const std::vector<std::pair<double, double>>& closed_intervals);

// Gaussian bump sampled on [0, 0.5] s: peak = amplitude at latency_peak_ms,
// negligible (<1% of amplitude) outside peak +- 2*width_ms.
std::vector<double> erp_waveform(const ErpTemplate& tpl, double rate);

// Adds the template waveform starting at every marker with the target code.
Recording inject_erp(const Recording& rec, const ErpTemplate& tpl,
                     const std::vector<EventMarker>& markers, uint16_t target_code);

// Blink transients (400 ms biphasic raised cosine, full amplitude on FP*
// channels, 0.15 gain elsewhere) at Poisson times on blink_channels, then
// bad_channels replaced with white noise. Throws on unknown channels.
Recording inject_artifacts(const Recording& rec, const ArtifactSpec& spec, uint64_t seed);

// Everything needed to assemble one synthetic subject.
struct SubjectParams {
  double rate{500.0};
  std::vector<std::string> channels;  // empty = headband + Fz reference
  double lead_in_s{2.0};              // quiet span before the first stimulus
  double tail_s{1.0};
  NoiseSpec noise{};
  AlphaSpec alpha{default_alpha()};
  ErpTemplate p300{default_p300()};
  ErpTemplate n170{default_n170()};
  ArtifactSpec artifacts{default_artifacts()};
  OddballConfig auditory{auditory_config()};
  OddballConfig visual{visual_config()};
  double eyes_open_s{60.0};
  double eyes_closed_s{60.0};
  double amplitude_jitter{0.0};  // +-fraction scaling of planted effects per subject
  std::optional<uint64_t> sequence_seed;  // set = identical trial order across subjects
};

// One fully assembled subject: noise + task markers + planted effect +
// artifacts. Deterministic per (params, seed); effect/noise/artifact
// randomness comes from independent sub-streams of `seed`.
Recording make_subject(TaskKind task, const SubjectParams& params, uint64_t seed);

} // namespace eegkit
