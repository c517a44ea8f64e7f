#include "eegkit/reference.hpp"

#include "eegkit/stats_math.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eegkit {

namespace {

// Paired t per grid cell for one sign assignment. Subjects are accumulated
// in index order, the same order the optimized kernel uses, so the two
// implementations agree to the last bit on the t values themselves.
std::vector<std::vector<double>> t_map_for_signs(const SubjectGrid& a, const SubjectGrid& b,
                                                 const std::vector<int>& signs) {
  const size_t n_sub = a.n_subjects();
  const size_t n_ch = a.n_channels();
  const size_t n_pts = a.n_points();
  const double n = static_cast<double>(n_sub);

  std::vector<std::vector<double>> t(n_ch, std::vector<double>(n_pts, 0.0));
  for (size_t c = 0; c < n_ch; ++c)
    for (size_t p = 0; p < n_pts; ++p) {
      double sum = 0.0, sum_sq = 0.0;
      for (size_t s = 0; s < n_sub; ++s) {
        const double d =
            static_cast<double>(signs[s]) * (a.values[s][c][p] - b.values[s][c][p]);
        sum += d;
        sum_sq += d * d;
      }
      const double mean = sum / n;
      const double var = (sum_sq - n * mean * mean) / (n - 1.0);
      if (var > 1e-24)
        t[c][p] = mean / std::sqrt(var / n);
      else
        t[c][p] = mean == 0.0 ? 0.0 : (mean > 0.0 ? 1e15 : -1e15);
    }
  return t;
}

struct RefCluster {
  std::vector<std::pair<size_t, size_t>> members;
  double mass{0.0};
};

std::vector<RefCluster> clusters_of(const std::vector<std::vector<double>>& t,
                                    const AdjacencyGraph& adj, double threshold) {
  const size_t n_ch = t.size();
  const size_t n_pts = t.empty() ? 0 : t.front().size();
  std::vector<std::vector<char>> seen(n_ch, std::vector<char>(n_pts, 0));
  std::vector<RefCluster> out;

  for (size_t c0 = 0; c0 < n_ch; ++c0)
    for (size_t p0 = 0; p0 < n_pts; ++p0) {
      if (seen[c0][p0] || std::abs(t[c0][p0]) <= threshold) continue;
      const bool positive = t[c0][p0] > 0.0;
      RefCluster cl;
      std::vector<std::pair<size_t, size_t>> frontier{{c0, p0}};
      seen[c0][p0] = 1;
      while (!frontier.empty()) {
        const auto [c, p] = frontier.back();
        frontier.pop_back();
        cl.members.emplace_back(c, p);
        auto try_visit = [&](size_t c2, size_t p2) {
          if (seen[c2][p2] || std::abs(t[c2][p2]) <= threshold) return;
          if ((t[c2][p2] > 0.0) != positive) return;
          seen[c2][p2] = 1;
          frontier.emplace_back(c2, p2);
        };
        if (p > 0) try_visit(c, p - 1);
        if (p + 1 < n_pts) try_visit(c, p + 1);
        for (size_t c2 = 0; c2 < n_ch; ++c2)
          if (c2 != c && adj.edge(c, c2)) try_visit(c2, p);
      }
      std::sort(cl.members.begin(), cl.members.end());
      for (const auto& [c, p] : cl.members) cl.mass += t[c][p];
      out.push_back(std::move(cl));
    }
  return out;
}

}  // namespace

std::vector<double> filter_zero_phase_reference(const std::vector<double>& x,
                                                const std::vector<double>& taps) {
  if (taps.size() % 2 != 1)
    throw std::runtime_error("filter_zero_phase_reference: taps length must be odd");
  const size_t t_len = x.size();
  if (t_len == 0) return {};
  const size_t delay = (taps.size() - 1) / 2;
  const size_t pad = delay;

  std::vector<double> padded;
  padded.reserve(t_len + 2 * pad);
  for (size_t d = pad; d >= 1; --d) padded.push_back(x[std::min(d, t_len - 1)]);
  padded.insert(padded.end(), x.begin(), x.end());
  for (size_t d = 1; d <= pad; ++d)
    padded.push_back(x[t_len - 1 - std::min(d, t_len - 1)]);

  std::vector<double> out(t_len);
  for (size_t t = 0; t < t_len; ++t) {
    // conv index t + pad + delay; conv[j] = sum_k taps[k] * padded[j - k]
    const size_t j = t + pad + delay;
    double acc = 0.0;
    for (size_t k = 0; k < taps.size(); ++k) {
      const size_t src = j - k;
      if (src < padded.size()) acc += taps[k] * padded[src];
    }
    out[t] = acc;
  }
  return out;
}

ClusterTestResult cluster_permutation_reference(const SubjectGrid& a, const SubjectGrid& b,
                                                const AdjacencyGraph& adjacency,
                                                double point_alpha) {
  a.validate();
  b.validate();
  if (a.channels != b.channels || a.points != b.points)
    throw std::runtime_error("cluster_permutation_reference: grids differ");
  const size_t n_sub = a.n_subjects();
  if (n_sub < 2 || n_sub > 12)
    throw std::runtime_error("cluster_permutation_reference: need 2..12 subjects");

  ClusterTestResult res;
  res.channels = a.channels;
  res.points = a.points;
  res.exact = true;
  res.threshold_t = t_critical(point_alpha, static_cast<double>(n_sub - 1));

  const std::vector<int> identity(n_sub, 1);
  const auto t_obs = t_map_for_signs(a, b, identity);
  res.observed.t = t_obs;
  res.observed.df = static_cast<double>(n_sub - 1);
  res.observed.p.assign(t_obs.size(), std::vector<double>(a.n_points(), 1.0));
  for (size_t c = 0; c < t_obs.size(); ++c)
    for (size_t p = 0; p < t_obs[c].size(); ++p)
      res.observed.p[c][p] = t_two_sided_p(t_obs[c][p], res.observed.df);

  for (const auto& rc : clusters_of(t_obs, adjacency, res.threshold_t)) {
    Cluster cl;
    cl.members = rc.members;
    cl.mass = rc.mass;
    cl.sign = rc.mass > 0.0 ? 1 : -1;
    res.clusters.push_back(std::move(cl));
  }

  const size_t n_perm = size_t{1} << n_sub;
  res.null_max_mass.assign(n_perm, 0.0);
  std::vector<int> signs(n_sub);
  for (size_t pi = 0; pi < n_perm; ++pi) {
    for (size_t s = 0; s < n_sub; ++s) signs[s] = (pi >> s) & 1 ? -1 : 1;
    const auto t = t_map_for_signs(a, b, signs);
    double max_mass = 0.0;
    for (const auto& rc : clusters_of(t, adjacency, res.threshold_t))
      max_mass = std::max(max_mass, std::abs(rc.mass));
    res.null_max_mass[pi] = max_mass;
  }

  for (auto& cl : res.clusters) {
    size_t hits = 0;
    for (double m : res.null_max_mass)
      if (m >= std::abs(cl.mass)) ++hits;
    cl.p_value = static_cast<double>(hits) / static_cast<double>(n_perm);
  }
  std::sort(res.clusters.begin(), res.clusters.end(), [](const Cluster& x, const Cluster& y) {
    return std::abs(x.mass) > std::abs(y.mass);
  });
  return res;
}

} // namespace eegkit
