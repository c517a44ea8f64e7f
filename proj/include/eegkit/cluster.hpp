#pragma once

#include "eegkit/montage.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace eegkit {

// Group-level data for one condition: per-subject channel x point matrices
// on a shared grid. Points are frequency bins (Hz) or epoch times (ms).
struct SubjectGrid {
  std::vector<std::vector<std::vector<double>>> values;  // subject x channel x point
  std::vector<std::string> channels;
  std::vector<double> points;

  size_t n_subjects() const { return values.size(); }
  size_t n_channels() const { return channels.size(); }
  size_t n_points() const { return points.size(); }
  void validate() const;  // throws on ragged shapes
};

struct TMap {
  std::vector<std::vector<double>> t;  // channel x point
  std::vector<std::vector<double>> p;  // two-sided pointwise
  double df{0.0};
};

// Paired t statistic per grid point, df = n-1. All-zero differences give
// t = 0; zero-variance nonzero differences get a +-1e15 sentinel so they
// stay supra-threshold without breaking the arithmetic.
TMap dependent_t(const SubjectGrid& a, const SubjectGrid& b);

struct ClusterTestConfig {
  double point_alpha{0.05};
  double cluster_alpha{0.05};
  int n_permutations{1000};
  uint64_t seed{0};
  bool exact_when_feasible{true};  // enumerate all 2^n sign flips when 2^n <= 4096
};

struct Cluster {
  std::vector<std::pair<size_t, size_t>> members;  // (channel, point) indices
  int sign{0};
  double mass{0.0};     // sum of member t-values
  double p_value{1.0};
};

struct ClusterTestResult {
  std::vector<Cluster> clusters;  // sorted by |mass| descending
  TMap observed;
  double threshold_t{0.0};
  std::vector<double> null_max_mass;  // permutation distribution of max |mass|
  bool exact{false};
  std::vector<std::string> channels;
  std::vector<double> points;

  bool any_significant(double alpha) const;
};

// Dependent-samples cluster permutation test: pointwise paired t maps,
// two-sided threshold at point_alpha, same-sign clusters connected under
// channel adjacency x neighbouring points, cluster mass = sum of t, null =
// per-subject condition flips (Monte Carlo p = (1+hits)/(1+N); exact path
// enumerates all sign vectors, p = hits/2^n). Deterministic per seed and
// independent of thread count.
ClusterTestResult cluster_permutation_test(const SubjectGrid& a, const SubjectGrid& b,
                                           const AdjacencyGraph& adjacency,
                                           const ClusterTestConfig& cfg);

// Channel x frequency contrast (eyes closed vs open PSD stacks).
ClusterTestResult alpha_contrast(const SubjectGrid& closed, const SubjectGrid& open,
                                 const AdjacencyGraph& adjacency,
                                 const ClusterTestConfig& cfg);

// Channel x time contrast (deviant vs standard ERP stacks) restricted to a
// latency range in ms.
ClusterTestResult erp_contrast(const SubjectGrid& deviant, const SubjectGrid& standard,
                               const AdjacencyGraph& adjacency,
                               const ClusterTestConfig& cfg,
                               double latency_min_ms = -100.0,
                               double latency_max_ms = 500.0);

} // namespace eegkit
