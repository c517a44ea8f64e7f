#include "eegkit/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eegkit {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Splits "a, b, c" respecting quoted strings.
std::vector<std::string> split_items(const std::string& body, int line,
                                     const std::string& origin) {
  std::vector<std::string> items;
  std::string cur;
  bool in_quote = false;
  for (char ch : body) {
    if (ch == '"') in_quote = !in_quote;
    if (ch == ',' && !in_quote) {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (in_quote)
    throw std::runtime_error(origin + " line " + std::to_string(line) +
                             ": unterminated string");
  const auto tail = trim(cur);
  if (!tail.empty()) items.push_back(tail);
  return items;
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

} // namespace

ConfigTree ConfigTree::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path.string());
}

ConfigTree ConfigTree::parse_string(const std::string& text, const std::string& origin) {
  ConfigTree tree;
  tree.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    // strip comments outside quotes
    std::string line;
    bool in_quote = false;
    for (char ch : raw) {
      if (ch == '"') in_quote = !in_quote;
      if (ch == '#' && !in_quote) break;
      line += ch;
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error(origin + " line " + std::to_string(line_no) +
                                 ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw std::runtime_error(origin + " line " + std::to_string(line_no) +
                                 ": empty section name");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(origin + " line " + std::to_string(line_no) +
                               ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::runtime_error(origin + " line " + std::to_string(line_no) +
                               ": empty key or value");

    Entry e;
    e.line = line_no;
    if (value.front() == '[') {
      if (value.back() != ']')
        throw std::runtime_error(origin + " line " + std::to_string(line_no) +
                                 ": unterminated array");
      e.is_array = true;
      e.items = split_items(value.substr(1, value.size() - 2), line_no, origin);
    } else {
      if (value.front() == '"' && (value.size() < 2 || value.back() != '"'))
        throw std::runtime_error(origin + " line " + std::to_string(line_no) +
                                 ": unterminated string");
      e.items = {value};
    }
    const std::string full = section.empty() ? key : section + "." + key;
    if (!tree.values_.emplace(full, std::move(e)).second)
      throw std::runtime_error(origin + " line " + std::to_string(line_no) +
                               ": duplicate key '" + full + "'");
  }
  return tree;
}

const ConfigTree::Entry* ConfigTree::find(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return nullptr;
  it->second.used = true;
  return &it->second;
}

void ConfigTree::fail(const Entry& e, const std::string& key,
                      const std::string& what) const {
  throw std::runtime_error(origin_ + " line " + std::to_string(e.line) + ": key '" +
                           key + "' " + what);
}

double ConfigTree::number(const std::string& key, double fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  if (e->is_array) fail(*e, key, "expects a single number, got an array");
  const std::string& s = e->items[0];
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    fail(*e, key, "is not a number: '" + s + "'");
  return v;
}

int64_t ConfigTree::integer(const std::string& key, int64_t fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  if (e->is_array) fail(*e, key, "expects a single integer, got an array");
  const std::string& s = e->items[0];
  int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    fail(*e, key, "is not an integer: '" + s + "'");
  return v;
}

bool ConfigTree::boolean(const std::string& key, bool fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  if (e->is_array) fail(*e, key, "expects true/false, got an array");
  if (e->items[0] == "true") return true;
  if (e->items[0] == "false") return false;
  fail(*e, key, "is not true/false: '" + e->items[0] + "'");
}

std::string ConfigTree::str(const std::string& key, const std::string& fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  if (e->is_array) fail(*e, key, "expects a single string, got an array");
  return unquote(e->items[0]);
}

std::vector<double> ConfigTree::number_list(const std::string& key,
                                            const std::vector<double>& fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  std::vector<double> out;
  for (const auto& s : e->items) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
      fail(*e, key, "has a non-numeric element: '" + s + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> ConfigTree::string_list(
    const std::string& key, const std::vector<std::string>& fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  std::vector<std::string> out;
  for (const auto& s : e->items) out.push_back(unquote(s));
  return out;
}

std::vector<std::string> ConfigTree::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [key, e] : values_)
    if (!e.used) out.push_back(key);
  return out;
}

void StudyConfig::validate() const {
  if (n_subjects < 2)
    throw std::runtime_error("config: study.n_subjects must be >= 2 for group statistics");
  for (const auto& t : tasks) task_from_name(t);
  if (subject.rate <= 0.0) throw std::runtime_error("config: synth.rate must be positive");
  subject.auditory.validate();
  subject.visual.validate();
  if (!(alpha_band_lo >= 0.0 && alpha_band_lo < alpha_band_hi))
    throw std::runtime_error("config: stats.alpha_band must satisfy 0 <= lo < hi");
  if (stats.n_permutations < 1)
    throw std::runtime_error("config: stats.n_permutations must be >= 1");
  if (!(adjacency_max_angle > 0.0 && adjacency_max_angle < 3.141592653589793))
    throw std::runtime_error("config: stats.adjacency_max_angle must lie in (0, pi)");
}

StudyConfig config_from_tree(const ConfigTree& tree) {
  StudyConfig cfg;

  cfg.n_subjects = static_cast<int>(tree.integer("study.n_subjects", cfg.n_subjects));
  cfg.seed = static_cast<uint64_t>(tree.integer("study.seed", static_cast<int64_t>(cfg.seed)));
  cfg.tasks = tree.string_list("study.tasks", cfg.tasks);
  cfg.out_dir = tree.str("study.out_dir", cfg.out_dir);

  auto& sp = cfg.subject;
  sp.rate = tree.number("synth.rate", sp.rate);
  const std::string noise_kind = tree.str("synth.noise_kind", "pink");
  if (noise_kind == "white")
    sp.noise.kind = NoiseKind::white;
  else if (noise_kind == "pink")
    sp.noise.kind = NoiseKind::pink;
  else
    throw std::runtime_error("config: synth.noise_kind must be \"white\" or \"pink\"");
  sp.noise.sigma = tree.number("synth.noise_sigma", sp.noise.sigma);
  sp.lead_in_s = tree.number("synth.lead_in_s", sp.lead_in_s);
  sp.eyes_open_s = tree.number("synth.eyes_open_s", sp.eyes_open_s);
  sp.eyes_closed_s = tree.number("synth.eyes_closed_s", sp.eyes_closed_s);
  sp.amplitude_jitter = tree.number("synth.amplitude_jitter", sp.amplitude_jitter);

  sp.alpha.freq = tree.number("synth.alpha_freq", sp.alpha.freq);
  sp.alpha.amplitude_open = tree.number("synth.alpha_open", sp.alpha.amplitude_open);
  sp.alpha.amplitude_closed = tree.number("synth.alpha_closed", sp.alpha.amplitude_closed);

  sp.p300.amplitude = tree.number("synth.p300_amplitude", sp.p300.amplitude);
  sp.p300.latency_peak_ms = tree.number("synth.p300_latency_ms", sp.p300.latency_peak_ms);
  sp.p300.width_ms = tree.number("synth.p300_width_ms", sp.p300.width_ms);
  sp.n170.amplitude = tree.number("synth.n170_amplitude", sp.n170.amplitude);
  sp.n170.latency_peak_ms = tree.number("synth.n170_latency_ms", sp.n170.latency_peak_ms);
  sp.n170.width_ms = tree.number("synth.n170_width_ms", sp.n170.width_ms);

  sp.artifacts.blink_rate_per_min =
      tree.number("synth.blink_rate_per_min", sp.artifacts.blink_rate_per_min);
  sp.artifacts.blink_amplitude =
      tree.number("synth.blink_amplitude", sp.artifacts.blink_amplitude);
  sp.artifacts.bad_channels =
      tree.string_list("synth.bad_channels", sp.artifacts.bad_channels);
  sp.artifacts.bad_noise_sigma =
      tree.number("synth.bad_noise_sigma", sp.artifacts.bad_noise_sigma);

  auto& pl = cfg.pipeline;
  pl.do_filter = tree.boolean("pipeline.filter", pl.do_filter);
  pl.filter.low_hz = tree.number("pipeline.filter_low_hz", pl.filter.low_hz);
  pl.filter.high_hz = tree.number("pipeline.filter_high_hz", pl.filter.high_hz);
  pl.filter.transition_low_hz =
      tree.number("pipeline.transition_low_hz", pl.filter.transition_low_hz);
  pl.filter.transition_high_hz =
      tree.number("pipeline.transition_high_hz", pl.filter.transition_high_hz);
  pl.do_interval_reject = tree.boolean("pipeline.interval_reject", pl.do_interval_reject);
  pl.interval_threshold_uv =
      tree.number("pipeline.interval_threshold_uv", pl.interval_threshold_uv);
  pl.interval_window_s = tree.number("pipeline.interval_window_s", pl.interval_window_s);
  pl.do_detect_bad = tree.boolean("pipeline.detect_bad", pl.do_detect_bad);
  pl.lof_k = static_cast<int>(tree.integer("pipeline.lof_k", pl.lof_k));
  pl.lof_threshold = tree.number("pipeline.lof_threshold", pl.lof_threshold);
  pl.do_ica = tree.boolean("pipeline.ica", pl.do_ica);
  pl.ica.n_components =
      static_cast<int>(tree.integer("pipeline.ica_components", pl.ica.n_components));
  pl.ica.max_iter = static_cast<int>(tree.integer("pipeline.ica_max_iter", pl.ica.max_iter));
  pl.ica.tol = tree.number("pipeline.ica_tol", pl.ica.tol);
  pl.ica.max_samples = static_cast<size_t>(
      tree.integer("pipeline.ica_max_samples", static_cast<int64_t>(pl.ica.max_samples)));
  pl.do_interpolate = tree.boolean("pipeline.interpolate", pl.do_interpolate);
  pl.do_rereference = tree.boolean("pipeline.rereference", pl.do_rereference);
  pl.reference = tree.str("pipeline.reference", pl.reference);
  const auto window =
      tree.number_list("pipeline.epoch_window_s", {pl.epoch_t_min_s, pl.epoch_t_max_s});
  const auto baseline =
      tree.number_list("pipeline.baseline_s", {pl.baseline_min_s, pl.baseline_max_s});
  if (window.size() != 2 || baseline.size() != 2)
    throw std::runtime_error("config: epoch_window_s and baseline_s take [start, end]");
  pl.epoch_t_min_s = window[0];
  pl.epoch_t_max_s = window[1];
  pl.baseline_min_s = baseline[0];
  pl.baseline_max_s = baseline[1];
  pl.epoch_reject_uv = tree.number("pipeline.epoch_reject_uv", pl.epoch_reject_uv);

  cfg.stats.point_alpha = tree.number("stats.point_alpha", cfg.stats.point_alpha);
  cfg.stats.cluster_alpha = tree.number("stats.cluster_alpha", cfg.stats.cluster_alpha);
  cfg.stats.n_permutations =
      static_cast<int>(tree.integer("stats.n_permutations", cfg.stats.n_permutations));
  cfg.stats.exact_when_feasible =
      tree.boolean("stats.exact_when_feasible", cfg.stats.exact_when_feasible);
  cfg.adjacency_max_angle =
      tree.number("stats.adjacency_max_angle", cfg.adjacency_max_angle);
  const auto band = tree.number_list("stats.alpha_band", {cfg.alpha_band_lo, cfg.alpha_band_hi});
  if (band.size() != 2) throw std::runtime_error("config: stats.alpha_band takes [lo, hi]");
  cfg.alpha_band_lo = band[0];
  cfg.alpha_band_hi = band[1];
  cfg.psd_window_s = tree.number("stats.psd_window_s", cfg.psd_window_s);
  cfg.psd_overlap = tree.number("stats.psd_overlap", cfg.psd_overlap);
  cfg.psd_max_freq = tree.number("stats.psd_max_freq", cfg.psd_max_freq);
  const auto latency = tree.number_list("stats.erp_latency_ms",
                                        {cfg.erp_latency_min_ms, cfg.erp_latency_max_ms});
  if (latency.size() != 2)
    throw std::runtime_error("config: stats.erp_latency_ms takes [min, max]");
  cfg.erp_latency_min_ms = latency[0];
  cfg.erp_latency_max_ms = latency[1];

  cfg.stream_loopback = tree.boolean("stream.loopback", cfg.stream_loopback);
  cfg.endpoint = tree.str("stream.endpoint", cfg.endpoint);
  cfg.realtime_factor = tree.number("stream.factor", cfg.realtime_factor);
  cfg.chunk_samples = static_cast<size_t>(
      tree.integer("stream.chunk_samples", static_cast<int64_t>(cfg.chunk_samples)));

  const auto unused = tree.unused_keys();
  if (!unused.empty()) {
    std::string msg = "config: unknown key(s):";
    for (const auto& k : unused) msg += " " + k;
    throw std::runtime_error(msg);
  }

  cfg.validate();
  return cfg;
}

StudyConfig load_config(const std::filesystem::path& path) {
  return config_from_tree(ConfigTree::parse_file(path));
}

std::string default_config_text() {
  return R"([study]
n_subjects = 10
seed = 42
tasks = ["eyes", "auditory", "visual"]
out_dir = "study_out"

[synth]
rate = 500                 # Hz
noise_kind = "pink"        # "pink" or "white"
noise_sigma = 10           # uV
lead_in_s = 2
eyes_open_s = 60
eyes_closed_s = 60
amplitude_jitter = 0       # +-fraction per-subject effect scaling
alpha_freq = 10            # Hz
alpha_open = 4             # uV, eyes-open amplitude
alpha_closed = 8           # uV, eyes-closed amplitude
p300_amplitude = 5         # uV, planted on deviant trials (auditory)
p300_latency_ms = 450
p300_width_ms = 60
n170_amplitude = -5        # uV, planted on deviant trials (visual)
n170_latency_ms = 170
n170_width_ms = 25
blink_rate_per_min = 12
blink_amplitude = 80       # uV at frontal channels
bad_channels = ["TP8"]     # replaced with white noise
bad_noise_sigma = 60       # uV

[pipeline]
filter = true
filter_low_hz = 0.3
filter_high_hz = 30
transition_low_hz = 0.3
transition_high_hz = 7.5
interval_reject = true
interval_threshold_uv = 250  # peak-to-peak per window
interval_window_s = 1
detect_bad = true
lof_k = 3
lof_threshold = 2.5
ica = true
ica_components = -1        # -1 = channels - 1
ica_max_iter = 200
ica_tol = 1e-4
ica_max_samples = 20000
interpolate = true
rereference = true
reference = "Fz"
epoch_window_s = [-0.1, 0.5]
baseline_s = [-0.1, 0]
epoch_reject_uv = 100

[stats]
point_alpha = 0.05
cluster_alpha = 0.05
n_permutations = 1000
exact_when_feasible = true # enumerate all sign flips when 2^n <= 4096
adjacency_max_angle = 0.7  # rad
alpha_band = [8, 12]       # Hz
psd_window_s = 2
psd_overlap = 0.5
psd_max_freq = 30
erp_latency_ms = [-100, 500]

[stream]
loopback = true            # serve/record each recording over localhost
endpoint = ""              # empty = EEGKIT_ENDPOINT or 127.0.0.1:8372
factor = 0                 # 0 = as fast as possible
chunk_samples = 100
)";
}

} // namespace eegkit
