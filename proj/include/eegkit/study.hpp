#pragma once

#include "eegkit/cluster.hpp"
#include "eegkit/config.hpp"
#include "eegkit/pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace eegkit {

// On-disk study layout (all under the configured output root):
//   recordings/<task>/sub-NN/      eeg-core recording directories
//   preprocessed/<task>/sub-NN/    report.json + per-condition reductions
//     psd_open.csv, psd_closed.csv    (eyes)   channel x frequency density
//     erp_standard.csv, erp_deviant.csv (oddball) channel x time mean, uV
//   analysis/summary.json, analysis/clusters.csv
//   report/<task>.svg, report/summary.md

struct SubjectRef {
  int subject{0};  // 1-based
  std::string task;
  std::filesystem::path dir;
};

// One recording directory per subject per task; deterministic per config.
std::vector<SubjectRef> simulate_study(const StudyConfig& cfg,
                                       const std::filesystem::path& out_root);

// Serves each recording over a loopback socket, records it back, and
// verifies the copy matches bit-for-bit; throws on any mismatch.
void loopback_verify(const StudyConfig& cfg, const std::vector<SubjectRef>& recordings);

struct PreprocessOutcome {
  std::vector<SubjectRef> ok;
  std::vector<std::pair<SubjectRef, std::string>> failed;  // subject, reason
};

// Runs the pipeline per subject, writing report.json plus the reduced
// per-condition tables. Per-subject failures are isolated: the batch
// continues and failures are listed in the outcome.
PreprocessOutcome preprocess_study(const StudyConfig& cfg,
                                   const std::filesystem::path& recordings_root,
                                   const std::filesystem::path& preprocessed_root);

struct TaskResult {
  std::string task;
  ClusterTestResult test;
  size_t n_subjects{0};
  int expected_sign{1};
  double expected_lo{0.0};  // planted-effect extent on the point axis
  double expected_hi{0.0};
  bool detected{false};  // significant expected-sign cluster overlapping it
};

struct StudySummary {
  std::map<std::string, TaskResult> tasks;
  std::vector<std::string> files;  // manifest of everything written
  bool all_detected{false};

  std::string to_json() const;
  std::string clusters_csv() const;
};

// Loads the per-subject reductions, runs the per-task contrasts, writes
// summary.json + clusters.csv under analysis/.
StudySummary analyze_study(const StudyConfig& cfg,
                           const std::filesystem::path& preprocessed_root,
                           const std::filesystem::path& analysis_dir);

// Figures (one SVG per task, one panel per channel) plus a markdown table.
void write_report(const StudyConfig& cfg, const std::filesystem::path& preprocessed_root,
                  const StudySummary& summary, const std::filesystem::path& report_dir);

// simulate -> loopback -> preprocess -> analyze -> report. Returns 0 when
// every configured task's planted effect was detected, 3 otherwise.
// Progress lines go to *log when given.
int run_study(const StudyConfig& cfg, StudySummary* out_summary = nullptr,
              std::ostream* log = nullptr);

// In-memory single-task study (simulate + pipeline + contrast, no files):
// the workhorse for repeated seeded validation runs.
struct InMemoryStudy {
  TaskResult result;
  std::vector<PipelineReport> reports;
};
InMemoryStudy run_task_study(const StudyConfig& cfg, TaskKind task);

// Shared helpers between the disk and in-memory paths.
uint64_t subject_seed(const StudyConfig& cfg, TaskKind task, int subject_index);
// cond_a = closed/deviant, cond_b = open/standard; channel x point incl. the
// reference row (dropped later when the grids are assembled).
void reduce_subject(const StudyConfig& cfg, const Recording& cleaned, const Epochs& epochs,
                    TaskKind task, std::vector<std::vector<double>>& cond_a,
                    std::vector<std::vector<double>>& cond_b, std::vector<double>& points);
TaskResult contrast_for_task(const StudyConfig& cfg, TaskKind task,
                             const std::vector<std::vector<std::vector<double>>>& a_stack,
                             const std::vector<std::vector<std::vector<double>>>& b_stack,
                             const std::vector<std::string>& channels,
                             const std::vector<double>& points);

} // namespace eegkit
