#include "eegkit/lof.hpp"

#include "eegkit/stats_math.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eegkit {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

double lag1_autocorr(const std::vector<double>& x) {
  const size_t n = x.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double d = x[i] - mean;
    den += d * d;
    if (i + 1 < n) num += d * (x[i + 1] - mean);
  }
  return den > 0.0 ? num / den : 0.0;
}

} // namespace

std::vector<double> lof_scores(const std::vector<std::vector<double>>& points, int k) {
  const size_t n = points.size();
  if (k < 1) throw std::runtime_error("lof_scores: k must be >= 1");
  if (n <= static_cast<size_t>(k))
    throw std::runtime_error("lof_scores: need more points than k");

  // pairwise distances
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      dist[i][j] = dist[j][i] = std::sqrt(sq_dist(points[i], points[j]));

  // k-distance and neighbourhood (ties at the k-distance included)
  std::vector<double> kdist(n);
  std::vector<std::vector<size_t>> nbrs(n);
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> ds;
    ds.reserve(n - 1);
    for (size_t j = 0; j < n; ++j)
      if (j != i) ds.push_back(dist[i][j]);
    std::nth_element(ds.begin(), ds.begin() + (k - 1), ds.end());
    kdist[i] = ds[k - 1];
    for (size_t j = 0; j < n; ++j)
      if (j != i && dist[i][j] <= kdist[i]) nbrs[i].push_back(j);
  }

  // local reachability density, with a floor so identical points stay finite
  constexpr double kEps = 1e-12;
  std::vector<double> lrd(n);
  for (size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (size_t j : nbrs[i]) sum += std::max(kdist[j], dist[i][j]);
    lrd[i] = 1.0 / std::max(sum / static_cast<double>(nbrs[i].size()), kEps);
  }

  std::vector<double> lof(n);
  for (size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (size_t j : nbrs[i]) sum += lrd[j];
    lof[i] = sum / (static_cast<double>(nbrs[i].size()) * lrd[i]);
  }
  return lof;
}

std::vector<std::vector<double>> channel_features(const Recording& rec) {
  const size_t n_ch = rec.n_channels();
  const size_t n = rec.n_samples();
  if (n < 3) throw std::runtime_error("channel_features: recording too short");

  // Each feature is estimated per one-second window and aggregated as the
  // median over windows. Sparse transients (blinks cover well under half of
  // the windows) therefore cannot shift a channel's profile; this stage is
  // after persistently deviant channels, while transient artifacts are the
  // job of interval rejection and component removal downstream.
  size_t win = static_cast<size_t>(rec.rate);
  if (win < 3 || win > n) win = n;
  const auto n_win = static_cast<long>(n / win);

  // feature -> channel -> per-window estimate
  std::vector<std::vector<std::vector<double>>> est(
      4, std::vector<std::vector<double>>(
             n_ch, std::vector<double>(static_cast<size_t>(n_win))));

#pragma omp parallel for schedule(static)
  for (long w = 0; w < n_win; ++w) {
    const size_t lo = static_cast<size_t>(w) * win;
    std::vector<double> chmean(win, 0.0);
    for (size_t c = 0; c < n_ch; ++c)
      for (size_t i = 0; i < win; ++i) chmean[i] += rec.data[c][lo + i];
    for (auto& v : chmean) v /= static_cast<double>(n_ch);

    std::vector<double> x(win);
    for (size_t c = 0; c < n_ch; ++c) {
      for (size_t i = 0; i < win; ++i) x[i] = rec.data[c][lo + i];
      double abs_grad = 0.0;
      for (size_t i = 0; i + 1 < win; ++i) abs_grad += std::abs(x[i + 1] - x[i]);
      const auto uw = static_cast<size_t>(w);
      est[0][c][uw] = mad_sd(x);
      est[1][c][uw] = lag1_autocorr(x);
      est[2][c][uw] = abs_grad / static_cast<double>(win - 1);
      est[3][c][uw] = pearson(x, chmean);
    }
  }

  std::vector<std::vector<double>> feats(n_ch, std::vector<double>(4));
  for (size_t c = 0; c < n_ch; ++c)
    for (size_t d = 0; d < 4; ++d) feats[c][d] = median(est[d][c]);
  return feats;
}

std::vector<std::string> detect_bad_channels(const Recording& rec, int k, double threshold) {
  const size_t n_ch = rec.n_channels();
  if (n_ch < 3) throw std::runtime_error("detect_bad_channels: need at least 3 channels");
  if (k < 1 || static_cast<size_t>(k) >= n_ch)
    throw std::runtime_error("detect_bad_channels: k must satisfy 1 <= k < n_channels");

  auto feats = channel_features(rec);

  // z-score each feature dimension across channels (constant dims collapse
  // to zero, which also makes the detector scale-invariant)
  const size_t dims = feats[0].size();
  for (size_t d = 0; d < dims; ++d) {
    std::vector<double> col(n_ch);
    for (size_t c = 0; c < n_ch; ++c) col[c] = feats[c][d];
    const auto st = mean_sd(col);
    for (size_t c = 0; c < n_ch; ++c)
      feats[c][d] = st.sd > 1e-12 ? (feats[c][d] - st.mean) / st.sd : 0.0;
  }

  const auto scores = lof_scores(feats, k);
  std::vector<std::string> bad;
  for (size_t c = 0; c < n_ch; ++c)
    if (scores[c] > threshold) bad.push_back(rec.channels[c]);
  return bad;
}

} // namespace eegkit
