// eegkit: synthesize EEG studies, stream them like a device would, run the
// preprocessing pipeline, and test the planted effects.
//
// Exit codes: 0 success, 1 usage/config error, 2 runtime failure,
// 3 study completed but a planted effect was not detected.

#include "eegkit/config.hpp"
#include "eegkit/parallel.hpp"
#include "eegkit/recording_io.hpp"
#include "eegkit/stream.hpp"
#include "eegkit/study.hpp"

#include <climits>
#include <cstdint>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

namespace {

using namespace eegkit;

// Config/flag problems exit 1; anything thrown later exits 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::optional<uint64_t> seed;
  int jobs{0};
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_out = true) {
  cmd->add_option("--config", f.config_path, "Config file (defaults are built in)");
  if (with_out) cmd->add_option("--out", f.out_dir, "Output root (overrides the config)");
  cmd->add_option("--seed", f.seed, "Study seed (overrides the config)");
  cmd->add_option("--jobs", f.jobs, "Worker threads (0 = library default)")
      ->check(CLI::NonNegativeNumber);
}

StudyConfig build_config(const CommonFlags& f) {
  StudyConfig cfg;
  try {
    if (!f.config_path.empty()) cfg = load_config(f.config_path);
    if (f.seed) cfg.seed = *f.seed;
    if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
    cfg.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (f.jobs > 0) set_max_threads(f.jobs);
  return cfg;
}

int cmd_simulate(const CommonFlags& f) {
  const StudyConfig cfg = build_config(f);
  const auto refs = simulate_study(cfg, cfg.out_dir);
  std::cout << "wrote " << refs.size() << " recordings under "
            << (std::filesystem::path(cfg.out_dir) / "recordings").string() << "\n";
  return 0;
}

int cmd_serve(const std::string& dir, const std::string& endpoint_flag, double factor,
              int sessions, size_t chunk) {
  const Recording rec = load_recording(dir);
  ServeOptions opt;
  opt.endpoint = resolve_endpoint(endpoint_flag);
  opt.realtime_factor = factor;
  opt.chunk_samples = chunk;
  opt.max_sessions = sessions;
  StreamServer server(rec, opt);
  server.start();
  std::cout << "serving " << dir << " on port " << server.port() << " (factor " << factor
            << ", " << (sessions > 0 ? std::to_string(sessions) : std::string("unlimited"))
            << " sessions)\n"
            << std::flush;
  server.wait_for_sessions(sessions > 0 ? sessions : INT_MAX);
  server.stop();
  std::cout << "served " << server.sessions_served() << " session(s)\n";
  return 0;
}

int cmd_record(const std::string& endpoint_flag, const std::string& out_dir) {
  const std::string endpoint = resolve_endpoint(endpoint_flag);
  std::cout << "recording from " << endpoint << "\n" << std::flush;
  const RecordResult got = record_stream(endpoint);
  save_recording(got.rec, out_dir);
  std::cout << "saved " << got.rec.n_channels() << " channels x " << got.rec.n_samples()
            << " samples, " << got.rec.markers.size() << " markers -> " << out_dir << "\n";
  if (!got.complete)
    std::cerr << "warning: stream ended without an end frame; recording flagged incomplete\n";
  return 0;
}

int cmd_preprocess(const CommonFlags& f) {
  const StudyConfig cfg = build_config(f);
  const std::filesystem::path root = cfg.out_dir;
  const auto outcome = preprocess_study(cfg, root / "recordings", root / "preprocessed");
  for (const auto& ref : outcome.ok)
    std::cout << "ok: " << ref.task << " subject " << ref.subject << "\n";
  for (const auto& [ref, why] : outcome.failed)
    std::cerr << "failed: " << ref.task << " subject " << ref.subject << ": " << why << "\n";
  std::cout << outcome.ok.size() << " succeeded, " << outcome.failed.size() << " failed\n";
  return outcome.failed.empty() ? 0 : 2;
}

int cmd_analyze(const CommonFlags& f) {
  const StudyConfig cfg = build_config(f);
  const std::filesystem::path root = cfg.out_dir;
  const StudySummary summary = analyze_study(cfg, root / "preprocessed", root / "analysis");
  for (const auto& [task, tr] : summary.tasks) {
    double min_p = 1.0;
    for (const auto& cl : tr.test.clusters) min_p = std::min(min_p, cl.p_value);
    std::cout << task << ": " << tr.test.clusters.size() << " cluster(s)";
    if (!tr.test.clusters.empty()) std::cout << ", min p = " << min_p;
    std::cout << (tr.detected ? " [effect detected]" : " [effect not detected]") << "\n";
  }
  std::cout << "wrote " << (root / "analysis" / "summary.json").string() << "\n";
  return 0;
}

int cmd_report(const CommonFlags& f) {
  const StudyConfig cfg = build_config(f);
  const std::filesystem::path root = cfg.out_dir;
  // Contrasts are recomputed from the preprocessed reductions; the rerun is
  // deterministic, so analysis files are rewritten byte-identically.
  const StudySummary summary = analyze_study(cfg, root / "preprocessed", root / "analysis");
  write_report(cfg, root / "preprocessed", summary, root / "report");
  std::cout << "wrote figures + summary.md under " << (root / "report").string() << "\n";
  return 0;
}

int cmd_study(const CommonFlags& f) {
  const StudyConfig cfg = build_config(f);
  const int rc = run_study(cfg, nullptr, &std::cout);
  if (rc != 0) std::cerr << "study finished, but not every planted effect was detected\n";
  return rc;
}

int cmd_config(const std::string& config_path, bool print_default) {
  if (print_default || config_path.empty()) {
    std::cout << default_config_text();
    return 0;
  }
  StudyConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  std::cout << "config OK: " << cfg.n_subjects << " subjects, tasks [";
  for (size_t i = 0; i < cfg.tasks.size(); ++i)
    std::cout << (i ? " " : "") << cfg.tasks[i];
  std::cout << "], seed " << cfg.seed << ", out_dir " << cfg.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic EEG study toolkit: simulate, stream, preprocess, analyze"};
  app.require_subcommand(1);

  CommonFlags sim_f, pre_f, ana_f, rep_f, study_f;
  std::string serve_dir, serve_endpoint;
  double serve_factor = 1.0;
  int serve_sessions = 1;
  size_t serve_chunk = 100;
  std::string record_endpoint, record_out = "recorded";
  std::string config_path;
  bool config_default = false;

  auto* sim = app.add_subcommand("simulate", "Generate the study's synthetic recordings");
  add_common(sim, sim_f);

  auto* serve = app.add_subcommand("serve", "Replay a recording directory over TCP");
  serve->add_option("dir", serve_dir, "Recording directory")->required();
  serve->add_option("--endpoint", serve_endpoint,
                    "host:port (default EEGKIT_ENDPOINT or 127.0.0.1:8372; port 0 = ephemeral)");
  serve->add_option("--factor", serve_factor, "Realtime pacing factor; 0 = as fast as possible");
  serve->add_option("--sessions", serve_sessions, "Sessions to serve before exiting; 0 = forever");
  serve->add_option("--chunk", serve_chunk, "Samples per data frame");

  auto* record = app.add_subcommand("record", "Connect to a server and save the stream");
  record->add_option("--endpoint", record_endpoint,
                     "host:port (default EEGKIT_ENDPOINT or 127.0.0.1:8372)");
  record->add_option("--out", record_out, "Directory to write the recording into");

  auto* pre = app.add_subcommand("preprocess", "Run the cleaning pipeline on a study's recordings");
  add_common(pre, pre_f);

  auto* ana = app.add_subcommand("analyze", "Cluster permutation contrasts per task");
  add_common(ana, ana_f);

  auto* rep = app.add_subcommand("report", "Render SVG figures and a markdown summary");
  add_common(rep, rep_f);

  auto* study = app.add_subcommand("study", "simulate -> stream -> preprocess -> analyze -> report");
  add_common(study, study_f);

  auto* conf = app.add_subcommand("config", "Print the default config, or validate one");
  conf->add_option("--config", config_path, "Config file to validate");
  conf->add_flag("--default", config_default, "Print the built-in default config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_f);
    if (serve->parsed())
      return cmd_serve(serve_dir, serve_endpoint, serve_factor, serve_sessions, serve_chunk);
    if (record->parsed()) return cmd_record(record_endpoint, record_out);
    if (pre->parsed()) return cmd_preprocess(pre_f);
    if (ana->parsed()) return cmd_analyze(ana_f);
    if (rep->parsed()) return cmd_report(rep_f);
    if (study->parsed()) return cmd_study(study_f);
    if (conf->parsed()) return cmd_config(config_path, config_default);
  } catch (const UsageError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
