#pragma once

#include "eegkit/recording.hpp"

#include <string>
#include <vector>

namespace eegkit {

// Local Outlier Factor of each point in a small point cloud (Euclidean
// metric, k nearest neighbours with distance ties included). Scores near 1
// mean inlier; > ~1.5 increasingly outlying.
std::vector<double> lof_scores(const std::vector<std::vector<double>>& points, int k);

// Per-channel summary features used for bad-channel detection:
// robust SD, lag-1 autocorrelation, mean absolute gradient, and correlation
// with the mean of all channels. Returned channel-major, 4 per channel.
std::vector<std::vector<double>> channel_features(const Recording& rec);

// Channels whose LOF score over z-scored features exceeds the threshold.
// Scale-free: multiplying all data by a constant leaves the result unchanged.
std::vector<std::string> detect_bad_channels(const Recording& rec, int k = 3,
                                             double threshold = 2.5);

} // namespace eegkit
