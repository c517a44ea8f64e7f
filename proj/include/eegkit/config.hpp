#pragma once

#include "eegkit/cluster.hpp"
#include "eegkit/pipeline.hpp"
#include "eegkit/sequence.hpp"
#include "eegkit/synth.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace eegkit {

// Minimal TOML-style reader: [section] headers, key = value lines, values
// are numbers, booleans, "strings", or flat [arrays]; # starts a comment.
// Keys are reported as "section.key". Errors carry the line number.
class ConfigTree {
public:
  static ConfigTree parse_file(const std::filesystem::path& path);
  static ConfigTree parse_string(const std::string& text, const std::string& origin);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  double number(const std::string& key, double fallback) const;
  int64_t integer(const std::string& key, int64_t fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string str(const std::string& key, const std::string& fallback) const;
  std::vector<double> number_list(const std::string& key,
                                  const std::vector<double>& fallback) const;
  std::vector<std::string> string_list(const std::string& key,
                                       const std::vector<std::string>& fallback) const;

  // Unknown-key detection: every key that was parsed but never queried.
  std::vector<std::string> unused_keys() const;

private:
  struct Entry {
    std::vector<std::string> items;  // scalar = single item
    bool is_array{false};
    int line{0};
    mutable bool used{false};
  };
  std::map<std::string, Entry> values_;
  std::string origin_;

  const Entry* find(const std::string& key) const;
  [[noreturn]] void fail(const Entry& e, const std::string& key,
                         const std::string& what) const;
};

// Everything one study run needs, every field defaulted.
struct StudyConfig {
  // study
  int n_subjects{10};
  uint64_t seed{42};
  std::vector<std::string> tasks{"eyes", "auditory", "visual"};
  std::string out_dir{"study_out"};

  // synthesis
  SubjectParams subject{};

  // preprocessing
  PipelineConfig pipeline{};

  // statistics
  ClusterTestConfig stats{};
  double adjacency_max_angle{kDefaultAdjacencyAngle};
  double alpha_band_lo{8.0};
  double alpha_band_hi{12.0};
  double psd_window_s{2.0};
  double psd_overlap{0.5};
  double psd_max_freq{30.0};
  double erp_latency_min_ms{-100.0};
  double erp_latency_max_ms{500.0};

  // streaming loopback inside `study`
  bool stream_loopback{true};
  std::string endpoint;  // empty = env var or default
  double realtime_factor{0.0};
  size_t chunk_samples{100};

  void validate() const;  // throws on nested invariant violations
};

// Defaults overlaid with whatever the file sets; unknown keys are an error
// (listing them), so typos never silently revert to defaults.
StudyConfig load_config(const std::filesystem::path& path);
StudyConfig config_from_tree(const ConfigTree& tree);

// The complete commented default file, suitable for `config --default`.
std::string default_config_text();

} // namespace eegkit
