#pragma once

#include "eegkit/cluster.hpp"

#include <vector>

namespace eegkit {

// Deliberately plain, single-threaded implementations of the two heavy
// kernels. They share no code with the optimized versions and exist as
// ground truth for tests and as the baseline in the benchmark binary.

// Direct O(len * taps) convolution with the same reflection padding and
// zero-phase alignment as filter_zero_phase.
std::vector<double> filter_zero_phase_reference(const std::vector<double>& x,
                                                const std::vector<double>& taps);

// Exact-enumeration permutation test: rebuilds the full t map and recounts
// clusters from scratch for every sign pattern (pattern i flips subject s
// iff bit s of i is set, matching the optimized exact path). Only valid
// when 2^n_subjects is small.
ClusterTestResult cluster_permutation_reference(const SubjectGrid& a, const SubjectGrid& b,
                                                const AdjacencyGraph& adjacency,
                                                double point_alpha);

} // namespace eegkit
