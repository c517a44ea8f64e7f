// The command-line binary, driven as a subprocess: exit codes, the default
// config contract, byte-identical re-simulation, a serve/record round trip
// over a real socket, and equality between `study` and running its stages
// one command at a time.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "eegkit/config.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code{-1};
  std::string out;  // stdout + stderr combined
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(EEGKIT_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Two subjects, one short resting task, no artifacts: enough to exercise
// every command without burning minutes.
void write_small_config(const fs::path& file, int n_subjects, uint64_t seed) {
  std::ofstream out(file);
  out << "[study]\n"
      << "n_subjects = " << n_subjects << "\n"
      << "seed = " << seed << "\n"
      << "tasks = [\"eyes\"]\n"
      << "[synth]\n"
      << "eyes_open_s = 10\n"
      << "eyes_closed_s = 10\n"
      << "blink_rate_per_min = 0\n"
      << "bad_channels = []\n"
      << "[pipeline]\n"
      << "ica = false\n";
}

} // namespace

TEST_CASE("bad invocations exit 1, help exits 0") {
  CHECK(run("").code == 1);                  // a subcommand is required
  CHECK(run("frobnicate").code == 1);
  CHECK(run("simulate --no-such-flag").code == 1);
  CHECK(run("simulate --jobs -2 --out /tmp/x").code == 1);
  CHECK(run("--help").code == 0);
  CHECK(run("serve").code == 1);             // missing required dir
}

TEST_CASE("config --default prints the exact built-in defaults") {
  const RunResult r = run("config --default");
  CHECK(r.code == 0);
  CHECK(r.out == eegkit::default_config_text());
  // bare `config` behaves the same
  CHECK(run("config").out == r.out);
}

TEST_CASE("config validation: ok file vs unknown key vs missing file") {
  const fs::path dir = fresh_dir("eegkit_cli_cfg");
  write_small_config(dir / "good.toml", 3, 5);
  const RunResult good = run("config --config " + (dir / "good.toml").string());
  CHECK(good.code == 0);
  CHECK(good.out.find("config OK") != std::string::npos);
  CHECK(good.out.find("3 subjects") != std::string::npos);

  {
    std::ofstream out(dir / "typo.toml");
    out << "[study]\nn_subjcts = 5\n";
  }
  const RunResult bad = run("config --config " + (dir / "typo.toml").string());
  CHECK(bad.code == 1);
  CHECK(bad.out.find("n_subjcts") != std::string::npos);

  CHECK(run("config --config " + (dir / "nope.toml").string()).code == 1);
  fs::remove_all(dir);
}

TEST_CASE("record against a dead endpoint is a runtime failure") {
  const RunResult r = run("record --endpoint 127.0.0.1:1 --out /tmp/eegkit_cli_dead");
  CHECK(r.code == 2);
  CHECK(r.out.find("connect") != std::string::npos);
}

TEST_CASE("simulate twice writes byte-identical recordings") {
  const fs::path dir = fresh_dir("eegkit_cli_sim");
  write_small_config(dir / "cfg.toml", 2, 99);
  const std::string cfg = " --config " + (dir / "cfg.toml").string();

  CHECK(run("simulate" + cfg + " --out " + (dir / "a").string()).code == 0);
  CHECK(run("simulate" + cfg + " --out " + (dir / "b").string()).code == 0);

  for (const char* sub : {"sub-01", "sub-02"}) {
    for (const char* file : {"signals.csv", "meta.json", "markers.csv"}) {
      CAPTURE(sub);
      CAPTURE(file);
      CHECK(slurp(dir / "a" / "recordings" / "eyes" / sub / file) ==
            slurp(dir / "b" / "recordings" / "eyes" / sub / file));
    }
  }

  // A different seed changes the data.
  CHECK(run("simulate" + cfg + " --seed 100 --out " + (dir / "c").string()).code == 0);
  CHECK(slurp(dir / "a" / "recordings" / "eyes" / "sub-01" / "signals.csv") !=
        slurp(dir / "c" / "recordings" / "eyes" / "sub-01" / "signals.csv"));
  fs::remove_all(dir);
}

TEST_CASE("serve and record round-trip through the real binary") {
  const fs::path dir = fresh_dir("eegkit_cli_stream");
  write_small_config(dir / "cfg.toml", 2, 7);
  REQUIRE(run("simulate --config " + (dir / "cfg.toml").string() + " --out " +
              dir.string()).code == 0);
  const fs::path rec_dir = dir / "recordings" / "eyes" / "sub-01";

  // Launch the server concurrently; it exits after one session.
  const std::string serve_cmd = std::string(EEGKIT_BIN) + " serve " + rec_dir.string() +
                                " --endpoint 127.0.0.1:18372 --factor 0 --sessions 1" +
                                " > /dev/null 2>&1";
  FILE* server = popen(serve_cmd.c_str(), "r");
  REQUIRE(server != nullptr);

  // The client may race the bind; retry briefly.
  RunResult rec;
  for (int attempt = 0; attempt < 50; ++attempt) {
    rec = run("record --endpoint 127.0.0.1:18372 --out " + (dir / "copy").string());
    if (rec.code == 0) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  pclose(server);
  REQUIRE(rec.code == 0);
  CHECK(rec.out.find("warning") == std::string::npos);  // complete stream

  CHECK(slurp(rec_dir / "signals.csv") == slurp(dir / "copy" / "signals.csv"));
  CHECK(slurp(rec_dir / "markers.csv") == slurp(dir / "copy" / "markers.csv"));
  fs::remove_all(dir);
}

TEST_CASE("study equals its stages run as separate commands") {
  const fs::path dir = fresh_dir("eegkit_cli_study");
  write_small_config(dir / "cfg.toml", 3, 21);
  const std::string cfg = " --config " + (dir / "cfg.toml").string();
  const fs::path one = dir / "oneshot";
  const fs::path step = dir / "stepwise";

  // Three subjects cannot reach p <= 0.05 (min exact p = 1/8), so the study
  // completes but reports the effect undetected: exit 3 by contract.
  const RunResult study = run("study" + cfg + " --out " + one.string());
  CHECK(study.code == 3);
  CHECK(study.out.find("not every planted effect") != std::string::npos);

  CHECK(run("simulate" + cfg + " --out " + step.string()).code == 0);
  const RunResult pre = run("preprocess" + cfg + " --out " + step.string());
  CHECK(pre.code == 0);
  CHECK(pre.out.find("3 succeeded, 0 failed") != std::string::npos);
  const RunResult ana = run("analyze" + cfg + " --out " + step.string());
  CHECK(ana.code == 0);
  CHECK(ana.out.find("effect not detected") != std::string::npos);
  CHECK(run("report" + cfg + " --out " + step.string()).code == 0);

  // Same inputs, same bytes, whichever way the stages were driven.
  for (const char* rel : {"analysis/summary.json", "analysis/clusters.csv",
                          "report/eyes.svg", "report/summary.md"}) {
    CAPTURE(rel);
    CHECK(slurp(one / rel) == slurp(step / rel));
  }
  CHECK(slurp(one / "preprocessed" / "eyes" / "sub-02" / "psd_closed.csv") ==
        slurp(step / "preprocessed" / "eyes" / "sub-02" / "psd_closed.csv"));
  fs::remove_all(dir);
}
