#include "eegkit/synth.hpp"

#include "eegkit/fft.hpp"
#include "eegkit/montage.hpp"
#include "eegkit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eegkit {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Sub-stream indices for make_subject, so the per-part RNGs stay
// independent of each other and of channel count.
enum : uint64_t { kStreamNoise = 1, kStreamSequence = 2, kStreamArtifacts = 3, kStreamJitter = 4 };

double gain_for(const std::map<std::string, double>& gains, const std::string& label) {
  if (gains.empty()) return 1.0;
  const auto it = gains.find(label);
  return it == gains.end() ? 0.0 : it->second;
}

std::vector<double> pink_channel(size_t n, double rate, Rng& rng) {
  const size_t m = next_pow2(std::max<size_t>(n, 2));
  std::vector<std::complex<double>> spec(m);
  for (auto& v : spec) v = {rng.normal(), 0.0};
  fft_inplace(spec, false);
  spec[0] = 0.0;  // no DC
  for (size_t k = 1; k < m; ++k) {
    const size_t kf = std::min(k, m - k);
    const double f = static_cast<double>(kf) * rate / static_cast<double>(m);
    spec[k] *= 1.0 / std::sqrt(f);
  }
  fft_inplace(spec, true);
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = spec[i].real();
  return out;
}

} // namespace

std::map<std::string, double> temporal_gains(double frontal_gain) {
  return {{"TP7", 1.0}, {"T7", 1.0}, {"T8", 1.0}, {"TP8", 1.0},
          {"FP1", frontal_gain}, {"FP2", frontal_gain}, {"Fz", 0.0}};
}

AlphaSpec default_alpha() {
  AlphaSpec a;
  a.freq = 10.0;
  a.amplitude_open = 4.0;
  a.amplitude_closed = 8.0;
  a.channel_gains = temporal_gains(0.3);
  return a;
}

ErpTemplate default_p300() {
  ErpTemplate t;
  t.kind = ErpKind::p300;
  t.latency_peak_ms = 450.0;
  t.width_ms = 60.0;
  t.amplitude = 5.0;
  t.channel_gains = temporal_gains(0.6);
  return t;
}

ErpTemplate default_n170() {
  ErpTemplate t;
  t.kind = ErpKind::n170;
  t.latency_peak_ms = 170.0;
  t.width_ms = 25.0;
  t.amplitude = -5.0;
  t.channel_gains = temporal_gains(0.3);
  return t;
}

ArtifactSpec default_artifacts() {
  ArtifactSpec a;
  a.blink_rate_per_min = 12.0;
  a.blink_amplitude = 80.0;
  a.blink_channels = headband_channels_with_ref();
  a.bad_channels = {"TP8"};
  a.bad_noise_sigma = 60.0;
  return a;
}

Recording gen_noise(const std::vector<std::string>& channels, double duration_s,
                    double rate, const NoiseSpec& spec) {
  if (duration_s <= 0.0) throw std::runtime_error("gen_noise: duration_s must be positive");
  if (rate <= 0.0) throw std::runtime_error("gen_noise: rate must be positive");
  if (spec.sigma < 0.0) throw std::runtime_error("gen_noise: sigma must be >= 0");

  Recording rec;
  rec.rate = rate;
  rec.channels = channels;
  const size_t n = static_cast<size_t>(std::llround(duration_s * rate));
  rec.data.assign(channels.size(), std::vector<float>(n, 0.0f));
  if (spec.sigma == 0.0) return rec;

  for (size_t c = 0; c < channels.size(); ++c) {
    Rng rng(derive_seed(spec.seed, c));
    if (spec.kind == NoiseKind::white) {
      for (size_t i = 0; i < n; ++i)
        rec.data[c][i] = static_cast<float>(spec.sigma * rng.normal());
    } else {
      auto x = pink_channel(n, rate, rng);
      double ss = 0.0;
      for (double v : x) ss += v * v;
      const double sd = std::sqrt(ss / static_cast<double>(n));
      const double scale = sd > 0.0 ? spec.sigma / sd : 0.0;
      for (size_t i = 0; i < n; ++i)
        rec.data[c][i] = static_cast<float>(x[i] * scale);
    }
  }
  return rec;
}

Recording inject_alpha(const Recording& rec, const AlphaSpec& spec,
                       const std::vector<std::pair<double, double>>& closed_intervals) {
  auto intervals = closed_intervals;
  std::sort(intervals.begin(), intervals.end());
  const double dur = rec.duration_s();
  for (size_t i = 0; i < intervals.size(); ++i) {
    if (intervals[i].first < 0.0 || intervals[i].second > dur + 1e-9 ||
        intervals[i].first > intervals[i].second)
      throw std::runtime_error("inject_alpha: interval outside recording");
    if (i > 0 && intervals[i].first < intervals[i - 1].second)
      throw std::runtime_error("inject_alpha: overlapping intervals");
  }

  Recording out = rec;
  const size_t n = rec.n_samples();
  // Amplitude per sample; the sinusoid itself never resets, so phase is
  // continuous across open/closed boundaries.
  std::vector<double> amp(n, spec.amplitude_open);
  for (const auto& [a, b] : intervals) {
    const size_t lo = static_cast<size_t>(std::llround(a * rec.rate));
    const size_t hi = std::min(n, static_cast<size_t>(std::llround(b * rec.rate)));
    for (size_t i = lo; i < hi; ++i) amp[i] = spec.amplitude_closed;
  }
  for (size_t c = 0; c < rec.n_channels(); ++c) {
    const double g = gain_for(spec.channel_gains, rec.channels[c]);
    if (g == 0.0) continue;
    for (size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / rec.rate;
      out.data[c][i] = static_cast<float>(
          static_cast<double>(out.data[c][i]) + amp[i] * g * std::sin(kTwoPi * spec.freq * t));
    }
  }
  return out;
}

std::vector<double> erp_waveform(const ErpTemplate& tpl, double rate) {
  if (rate <= 0.0) throw std::runtime_error("erp_waveform: rate must be positive");
  if (tpl.width_ms <= 0.0) throw std::runtime_error("erp_waveform: width must be positive");
  const size_t n = static_cast<size_t>(std::llround(0.5 * rate)) + 1;
  std::vector<double> w(n);
  // sigma = width/2 keeps the bump below 1% of peak outside peak +- 2*width
  const double sigma_s = tpl.width_ms / 2000.0;
  const double peak_s = tpl.latency_peak_ms / 1000.0;
  for (size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    const double z = (t - peak_s) / sigma_s;
    w[i] = tpl.amplitude * std::exp(-0.5 * z * z);
  }
  return w;
}

Recording inject_erp(const Recording& rec, const ErpTemplate& tpl,
                     const std::vector<EventMarker>& markers, uint16_t target_code) {
  Recording out = rec;
  const auto wave = erp_waveform(tpl, rec.rate);
  const size_t n = rec.n_samples();
  for (const auto& m : markers) {
    if (m.code != target_code) continue;
    if (m.sample >= n) throw std::runtime_error("inject_erp: marker outside recording");
    for (size_t c = 0; c < rec.n_channels(); ++c) {
      const double g = gain_for(tpl.channel_gains, rec.channels[c]);
      if (g == 0.0) continue;
      auto& row = out.data[c];
      for (size_t i = 0; i < wave.size() && m.sample + i < n; ++i)
        row[m.sample + i] =
            static_cast<float>(static_cast<double>(row[m.sample + i]) + g * wave[i]);
    }
  }
  return out;
}

Recording inject_artifacts(const Recording& rec, const ArtifactSpec& spec, uint64_t seed) {
  for (const auto& ch : spec.blink_channels)
    if (rec.channel_index(ch) < 0)
      throw std::runtime_error("inject_artifacts: unknown blink channel " + ch);
  for (const auto& ch : spec.bad_channels)
    if (rec.channel_index(ch) < 0)
      throw std::runtime_error("inject_artifacts: unknown bad channel " + ch);

  Recording out = rec;
  const size_t n = rec.n_samples();

  if (spec.blink_rate_per_min > 0.0 && !spec.blink_channels.empty()) {
    // 400 ms biphasic bump: 250 ms raised-cosine lobe, then a 150 ms
    // rebound of opposite sign at 30% amplitude.
    const size_t lobe1 = static_cast<size_t>(std::llround(0.25 * rec.rate));
    const size_t lobe2 = static_cast<size_t>(std::llround(0.15 * rec.rate));
    std::vector<double> blink(lobe1 + lobe2);
    for (size_t i = 0; i < lobe1; ++i)
      blink[i] = 0.5 * (1.0 - std::cos(kTwoPi * i / lobe1));
    for (size_t i = 0; i < lobe2; ++i)
      blink[lobe1 + i] = -0.3 * 0.5 * (1.0 - std::cos(kTwoPi * i / lobe2));

    Rng rng(derive_seed(seed, 0));
    const double mean_gap_s = 60.0 / spec.blink_rate_per_min;
    double t = rng.exponential(mean_gap_s);
    while (t * rec.rate < static_cast<double>(n)) {
      const size_t start = static_cast<size_t>(t * rec.rate);
      for (const auto& ch : spec.blink_channels) {
        const size_t c = static_cast<size_t>(rec.channel_index(ch));
        const double g = ch.rfind("FP", 0) == 0 ? 1.0 : 0.15;
        auto& row = out.data[c];
        for (size_t i = 0; i < blink.size() && start + i < n; ++i)
          row[start + i] = static_cast<float>(static_cast<double>(row[start + i]) +
                                              spec.blink_amplitude * g * blink[i]);
      }
      t += rng.exponential(mean_gap_s);
    }
  }

  for (size_t b = 0; b < spec.bad_channels.size(); ++b) {
    const size_t c = static_cast<size_t>(rec.channel_index(spec.bad_channels[b]));
    Rng rng(derive_seed(seed, 1000 + b));
    for (size_t i = 0; i < n; ++i)
      out.data[c][i] = static_cast<float>(spec.bad_noise_sigma * rng.normal());
  }
  return out;
}

Recording make_subject(TaskKind task, const SubjectParams& params, uint64_t seed) {
  const auto& channels =
      params.channels.empty() ? headband_channels_with_ref() : params.channels;

  double jitter_scale = 1.0;
  if (params.amplitude_jitter > 0.0) {
    Rng rng(derive_seed(seed, kStreamJitter));
    jitter_scale = 1.0 + params.amplitude_jitter * rng.uniform(-1.0, 1.0);
  }

  double duration_s = 0.0;
  std::vector<EventMarker> markers;
  std::vector<std::pair<double, double>> closed_intervals;
  const ErpTemplate* erp = nullptr;
  if (task == TaskKind::eyes) {
    duration_s = params.eyes_open_s + params.eyes_closed_s;
    markers = eyes_schedule(params.eyes_open_s, params.eyes_closed_s, params.rate);
    closed_intervals = {{params.eyes_open_s, params.eyes_open_s + params.eyes_closed_s}};
  } else {
    const auto& cfg = task == TaskKind::auditory ? params.auditory : params.visual;
    const uint64_t seq_seed =
        params.sequence_seed ? *params.sequence_seed : derive_seed(seed, kStreamSequence);
    auto sched = gen_schedule(cfg, seq_seed);
    for (auto& trial : sched.trials) trial.onset_ms += params.lead_in_s * 1000.0;
    markers = schedule_to_markers(sched, params.rate);
    duration_s = params.lead_in_s + sched.total_duration_ms / 1000.0 + params.tail_s;
    erp = task == TaskKind::auditory ? &params.p300 : &params.n170;
  }

  NoiseSpec noise = params.noise;
  noise.seed = derive_seed(seed, kStreamNoise);
  Recording rec = gen_noise(channels, duration_s, params.rate, noise);
  rec.markers = markers;

  if (task == TaskKind::eyes) {
    AlphaSpec alpha = params.alpha;
    alpha.amplitude_open *= jitter_scale;
    alpha.amplitude_closed *= jitter_scale;
    rec = inject_alpha(rec, alpha, closed_intervals);
  } else {
    ErpTemplate tpl = *erp;
    tpl.amplitude *= jitter_scale;
    rec = inject_erp(rec, tpl, rec.markers, kMarkerDeviant);
  }

  rec = inject_artifacts(rec, params.artifacts, derive_seed(seed, kStreamArtifacts));

  rec.meta["task"] = task_name(task);
  rec.meta["seed"] = std::to_string(seed);
  rec.validate();
  return rec;
}

} // namespace eegkit
