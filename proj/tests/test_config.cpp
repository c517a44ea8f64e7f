// Configuration: the line-oriented parser (sections, arrays, comments,
// errors with line numbers), typo detection via unknown-key rejection, and
// the guarantee that the shipped default file reproduces the built-in
// defaults exactly.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "eegkit/config.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

using namespace eegkit;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

} // namespace

TEST_CASE("parser handles sections, scalars, arrays, and comments") {
  const auto tree = ConfigTree::parse_string(R"(
top = 1
[study]
n_subjects = 12    # trailing comment
name = "with # inside"  # quoted hash survives
tasks = ["eyes", "auditory"]
band = [8, 12]
flag = true
)",
                                             "test");
  CHECK(tree.integer("top", 0) == 1);
  CHECK(tree.integer("study.n_subjects", 0) == 12);
  CHECK(tree.str("study.name", "") == "with # inside");
  CHECK(tree.string_list("study.tasks", {}) ==
        std::vector<std::string>{"eyes", "auditory"});
  CHECK(tree.number_list("study.band", {}) == std::vector<double>{8.0, 12.0});
  CHECK(tree.boolean("study.flag", false));
  CHECK(tree.has("study.flag"));
  CHECK(!tree.has("study.absent"));
  CHECK(tree.number("study.absent", 3.5) == 3.5);  // fallback path
}

TEST_CASE("parse errors carry the file name and line number") {
  const auto check_error = [](const char* text, const char* needle, int line) {
    const std::string msg =
        error_of([&] { ConfigTree::parse_string(text, "bad.toml"); });
    CAPTURE(text);
    CHECK(msg.find("bad.toml") != std::string::npos);
    CHECK(msg.find("line " + std::to_string(line)) != std::string::npos);
    CHECK(msg.find(needle) != std::string::npos);
  };
  check_error("a = 1\nnonsense\n", "key = value", 2);
  check_error("[study\nx = 1\n", "section", 1);
  check_error("a = 1\na = 2\n", "duplicate", 2);
  check_error("\n\nlist = [1, 2\n", "unterminated array", 3);
  check_error("s = \"open\n", "unterminated string", 1);
  check_error("= 5\n", "empty key", 1);
}

TEST_CASE("typed accessors reject mismatched values with context") {
  const auto tree = ConfigTree::parse_string(
      "x = hello\narr = [1, 2]\nnum = 4.5\n", "t");
  CHECK(error_of([&] { tree.number("x", 0.0); }).find("not a number") !=
        std::string::npos);
  CHECK(error_of([&] { tree.integer("num", 0); }).find("not an integer") !=
        std::string::npos);
  CHECK(error_of([&] { tree.boolean("x", false); }).find("true/false") !=
        std::string::npos);
  CHECK(error_of([&] { tree.number("arr", 0.0); }).find("array") !=
        std::string::npos);
  CHECK(error_of([&] { tree.number_list("num", {}); }).empty());  // scalar promotes
  CHECK(error_of([&] { tree.number_list("arr", {}); }).empty());
  CHECK(error_of([&] { tree.number_list("x", {}); }).find("non-numeric") !=
        std::string::npos);
}

TEST_CASE("unknown keys are an error that names them") {
  const auto tree = ConfigTree::parse_string(R"(
[study]
n_subjects = 5
[pipeline]
filter_lo_hz = 0.5
)",
                                             "typo.toml");
  const std::string msg = error_of([&] { config_from_tree(tree); });
  CHECK(msg.find("unknown key") != std::string::npos);
  CHECK(msg.find("pipeline.filter_lo_hz") != std::string::npos);
}

TEST_CASE("unused_keys reflects what was never queried") {
  const auto tree = ConfigTree::parse_string("a = 1\nb = 2\n", "t");
  tree.integer("a", 0);
  CHECK(tree.unused_keys() == std::vector<std::string>{"b"});
}

TEST_CASE("the default config text reproduces the built-in defaults") {
  const auto tree = ConfigTree::parse_string(default_config_text(), "default");
  const StudyConfig parsed = config_from_tree(tree);  // also proves no unknown keys
  const StudyConfig builtin;

  CHECK(parsed.n_subjects == builtin.n_subjects);
  CHECK(parsed.seed == builtin.seed);
  CHECK(parsed.tasks == builtin.tasks);
  CHECK(parsed.out_dir == builtin.out_dir);

  CHECK(parsed.subject.rate == builtin.subject.rate);
  CHECK(parsed.subject.noise.sigma == builtin.subject.noise.sigma);
  CHECK(parsed.subject.lead_in_s == builtin.subject.lead_in_s);
  CHECK(parsed.subject.eyes_open_s == builtin.subject.eyes_open_s);
  CHECK(parsed.subject.alpha.freq == builtin.subject.alpha.freq);
  CHECK(parsed.subject.alpha.amplitude_open == builtin.subject.alpha.amplitude_open);
  CHECK(parsed.subject.alpha.amplitude_closed == builtin.subject.alpha.amplitude_closed);
  CHECK(parsed.subject.p300.amplitude == builtin.subject.p300.amplitude);
  CHECK(parsed.subject.p300.latency_peak_ms == builtin.subject.p300.latency_peak_ms);
  CHECK(parsed.subject.p300.width_ms == builtin.subject.p300.width_ms);
  CHECK(parsed.subject.n170.amplitude == builtin.subject.n170.amplitude);
  CHECK(parsed.subject.artifacts.blink_rate_per_min ==
        builtin.subject.artifacts.blink_rate_per_min);
  CHECK(parsed.subject.artifacts.bad_channels ==
        builtin.subject.artifacts.bad_channels);

  CHECK(parsed.pipeline.filter.low_hz == builtin.pipeline.filter.low_hz);
  CHECK(parsed.pipeline.filter.high_hz == builtin.pipeline.filter.high_hz);
  CHECK(parsed.pipeline.interval_threshold_uv ==
        builtin.pipeline.interval_threshold_uv);
  CHECK(parsed.pipeline.lof_k == builtin.pipeline.lof_k);
  CHECK(parsed.pipeline.lof_threshold == builtin.pipeline.lof_threshold);
  CHECK(parsed.pipeline.ica.n_components == builtin.pipeline.ica.n_components);
  CHECK(parsed.pipeline.ica.max_samples == builtin.pipeline.ica.max_samples);
  CHECK(parsed.pipeline.reference == builtin.pipeline.reference);
  CHECK(parsed.pipeline.epoch_t_min_s == builtin.pipeline.epoch_t_min_s);
  CHECK(parsed.pipeline.epoch_t_max_s == builtin.pipeline.epoch_t_max_s);
  CHECK(parsed.pipeline.epoch_reject_uv == builtin.pipeline.epoch_reject_uv);

  CHECK(parsed.stats.point_alpha == builtin.stats.point_alpha);
  CHECK(parsed.stats.cluster_alpha == builtin.stats.cluster_alpha);
  CHECK(parsed.stats.n_permutations == builtin.stats.n_permutations);
  CHECK(parsed.stats.exact_when_feasible == builtin.stats.exact_when_feasible);
  CHECK(parsed.adjacency_max_angle == builtin.adjacency_max_angle);
  CHECK(parsed.alpha_band_lo == builtin.alpha_band_lo);
  CHECK(parsed.alpha_band_hi == builtin.alpha_band_hi);
  CHECK(parsed.psd_window_s == builtin.psd_window_s);
  CHECK(parsed.erp_latency_min_ms == builtin.erp_latency_min_ms);
  CHECK(parsed.erp_latency_max_ms == builtin.erp_latency_max_ms);

  CHECK(parsed.stream_loopback == builtin.stream_loopback);
  CHECK(parsed.endpoint == builtin.endpoint);
  CHECK(parsed.realtime_factor == builtin.realtime_factor);
  CHECK(parsed.chunk_samples == builtin.chunk_samples);
}

TEST_CASE("file values override defaults field by field") {
  const auto tree = ConfigTree::parse_string(R"(
[study]
n_subjects = 4
seed = 7
tasks = ["auditory"]
[synth]
noise_sigma = 5
noise_kind = "white"
p300_amplitude = 2.5
[pipeline]
ica = false
epoch_window_s = [-0.2, 0.6]
[stats]
alpha_band = [7, 13]
n_permutations = 250
[stream]
loopback = false
)",
                                             "t");
  const StudyConfig cfg = config_from_tree(tree);
  CHECK(cfg.n_subjects == 4);
  CHECK(cfg.seed == 7);
  CHECK(cfg.tasks == std::vector<std::string>{"auditory"});
  CHECK(cfg.subject.noise.sigma == 5.0);
  CHECK(cfg.subject.noise.kind == NoiseKind::white);
  CHECK(cfg.subject.p300.amplitude == 2.5);
  CHECK(!cfg.pipeline.do_ica);
  CHECK(cfg.pipeline.epoch_t_min_s == -0.2);
  CHECK(cfg.pipeline.epoch_t_max_s == 0.6);
  CHECK(cfg.alpha_band_lo == 7.0);
  CHECK(cfg.alpha_band_hi == 13.0);
  CHECK(cfg.stats.n_permutations == 250);
  CHECK(!cfg.stream_loopback);
  // untouched fields keep defaults
  CHECK(cfg.pipeline.epoch_reject_uv == 100.0);
  CHECK(cfg.subject.alpha.freq == 10.0);
}

TEST_CASE("config validation rejects unusable studies") {
  const auto broken = [](const char* text) {
    return error_of([&] { config_from_tree(ConfigTree::parse_string(text, "t")); });
  };
  CHECK(broken("[study]\nn_subjects = 1\n").find("n_subjects") != std::string::npos);
  CHECK(!broken("[study]\ntasks = [\"juggling\"]\n").empty());
  CHECK(broken("[stats]\nalpha_band = [12, 8]\n").find("alpha_band") != std::string::npos);
  CHECK(!broken("[stats]\nalpha_band = [8]\n").empty());
  CHECK(broken("[stats]\nn_permutations = 0\n").find("permutations") != std::string::npos);
  CHECK(!broken("[stats]\nadjacency_max_angle = 0\n").empty());
  CHECK(!broken("[synth]\nnoise_kind = \"brown\"\n").empty());
  CHECK(!broken("[synth]\nrate = 0\n").empty());
}

TEST_CASE("loading from a real file, and failing on a missing one") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "eegkit_config_test";
  fs::create_directories(dir);
  const fs::path file = dir / "cfg.toml";
  {
    std::ofstream out(file);
    out << "[study]\nn_subjects = 3\nseed = 99\n";
  }
  const StudyConfig cfg = load_config(file);
  CHECK(cfg.n_subjects == 3);
  CHECK(cfg.seed == 99);
  fs::remove_all(dir);

  CHECK_THROWS(load_config(dir / "nope.toml"));
}
