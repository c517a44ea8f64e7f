#include "eegkit/cluster.hpp"

#include "eegkit/rng.hpp"
#include "eegkit/stats_math.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eegkit {

namespace {

constexpr double kSentinelT = 1e15;  // zero-variance, nonzero-mean differences

// t statistics for one sign assignment, written into a flat channel*point
// buffer. sum_sq is the sign-invariant per-point sum of squared diffs.
void t_for_signs(const std::vector<std::vector<double>>& diffs,  // subject x flat point
                 const std::vector<double>& sum_sq, const std::vector<int8_t>& signs,
                 std::vector<double>& t_out) {
  const size_t n_sub = diffs.size();
  const size_t n_pts = sum_sq.size();
  const double n = static_cast<double>(n_sub);

  std::fill(t_out.begin(), t_out.end(), 0.0);
  for (size_t s = 0; s < n_sub; ++s) {
    const double* d = diffs[s].data();
    if (signs[s] > 0)
      for (size_t i = 0; i < n_pts; ++i) t_out[i] += d[i];
    else
      for (size_t i = 0; i < n_pts; ++i) t_out[i] -= d[i];
  }
  for (size_t i = 0; i < n_pts; ++i) {
    const double mean = t_out[i] / n;
    const double var = (sum_sq[i] - n * mean * mean) / (n - 1.0);
    if (var > 1e-24) {
      t_out[i] = mean / std::sqrt(var / n);
    } else {
      t_out[i] = mean == 0.0 ? 0.0 : (mean > 0.0 ? kSentinelT : -kSentinelT);
    }
  }
}

// Connected same-sign supra-threshold components; grid neighbours are the
// previous/next point on the same channel and the same point on adjacent
// channels. Returns signed masses (and optionally the member lists).
void find_clusters(const std::vector<double>& t, size_t n_ch, size_t n_pts,
                   double threshold, const AdjacencyGraph& adj,
                   std::vector<double>& masses,
                   std::vector<std::vector<size_t>>* members) {
  masses.clear();
  std::vector<int32_t> label(n_ch * n_pts, -1);
  std::vector<size_t> stack;
  for (size_t start = 0; start < t.size(); ++start) {
    if (label[start] >= 0 || std::abs(t[start]) <= threshold) continue;
    const bool positive = t[start] > 0.0;
    const auto id = static_cast<int32_t>(masses.size());
    double mass = 0.0;
    if (members) members->emplace_back();
    stack.assign(1, start);
    label[start] = id;
    while (!stack.empty()) {
      const size_t at = stack.back();
      stack.pop_back();
      mass += t[at];
      if (members) members->back().push_back(at);
      const size_t c = at / n_pts;
      const size_t p = at % n_pts;
      auto visit = [&](size_t other) {
        if (label[other] >= 0 || std::abs(t[other]) <= threshold) return;
        if ((t[other] > 0.0) != positive) return;
        label[other] = id;
        stack.push_back(other);
      };
      if (p > 0) visit(at - 1);
      if (p + 1 < n_pts) visit(at + 1);
      for (size_t c2 = 0; c2 < n_ch; ++c2)
        if (c2 != c && adj.edge(c, c2)) visit(c2 * n_pts + p);
    }
    masses.push_back(mass);
  }
}

SubjectGrid restrict_points(const SubjectGrid& g, double lo, double hi) {
  size_t first = g.points.size(), last = 0;
  for (size_t i = 0; i < g.points.size(); ++i) {
    if (g.points[i] >= lo - 1e-9 && first == g.points.size()) first = i;
    if (g.points[i] <= hi + 1e-9) last = i;
  }
  if (first >= g.points.size() || last < first)
    throw std::runtime_error("erp_contrast: latency range outside the time grid");

  SubjectGrid out;
  out.channels = g.channels;
  out.points.assign(g.points.begin() + first, g.points.begin() + last + 1);
  out.values.reserve(g.values.size());
  for (const auto& subj : g.values) {
    std::vector<std::vector<double>> m;
    m.reserve(subj.size());
    for (const auto& ch : subj)
      m.emplace_back(ch.begin() + first, ch.begin() + last + 1);
    out.values.push_back(std::move(m));
  }
  return out;
}

} // namespace

void SubjectGrid::validate() const {
  for (const auto& subj : values) {
    if (subj.size() != channels.size())
      throw std::runtime_error("SubjectGrid: subject channel count mismatch");
    for (const auto& ch : subj)
      if (ch.size() != points.size())
        throw std::runtime_error("SubjectGrid: subject point count mismatch");
  }
}

TMap dependent_t(const SubjectGrid& a, const SubjectGrid& b) {
  a.validate();
  b.validate();
  if (a.n_subjects() != b.n_subjects() || a.n_channels() != b.n_channels() ||
      a.n_points() != b.n_points())
    throw std::runtime_error("dependent_t: condition shapes differ");
  const size_t n_sub = a.n_subjects();
  if (n_sub < 2) throw std::runtime_error("dependent_t: need at least 2 subjects");

  const size_t n_ch = a.n_channels();
  const size_t n_pts = a.n_points();
  const size_t flat = n_ch * n_pts;

  std::vector<std::vector<double>> diffs(n_sub, std::vector<double>(flat));
  std::vector<double> sum_sq(flat, 0.0);
  for (size_t s = 0; s < n_sub; ++s)
    for (size_t c = 0; c < n_ch; ++c)
      for (size_t p = 0; p < n_pts; ++p) {
        const double d = a.values[s][c][p] - b.values[s][c][p];
        diffs[s][c * n_pts + p] = d;
        sum_sq[c * n_pts + p] += d * d;
      }

  std::vector<double> t_flat(flat);
  const std::vector<int8_t> identity(n_sub, 1);
  t_for_signs(diffs, sum_sq, identity, t_flat);

  TMap out;
  out.df = static_cast<double>(n_sub - 1);
  out.t.assign(n_ch, std::vector<double>(n_pts));
  out.p.assign(n_ch, std::vector<double>(n_pts));
  for (size_t c = 0; c < n_ch; ++c)
    for (size_t p = 0; p < n_pts; ++p) {
      const double tv = t_flat[c * n_pts + p];
      out.t[c][p] = tv;
      out.p[c][p] = t_two_sided_p(tv, out.df);
    }
  return out;
}

bool ClusterTestResult::any_significant(double alpha) const {
  for (const auto& c : clusters)
    if (c.p_value <= alpha) return true;
  return false;
}

ClusterTestResult cluster_permutation_test(const SubjectGrid& a, const SubjectGrid& b,
                                           const AdjacencyGraph& adjacency,
                                           const ClusterTestConfig& cfg) {
  a.validate();
  b.validate();
  if (a.channels != b.channels)
    throw std::runtime_error("cluster_permutation_test: channel sets differ");
  if (a.points != b.points)
    throw std::runtime_error("cluster_permutation_test: point grids differ");
  if (adjacency.nodes != a.channels)
    throw std::runtime_error("cluster_permutation_test: adjacency does not match channels");
  if (cfg.n_permutations < 1)
    throw std::runtime_error("cluster_permutation_test: need at least 1 permutation");
  if (!(cfg.point_alpha > 0.0 && cfg.point_alpha < 1.0) ||
      !(cfg.cluster_alpha > 0.0 && cfg.cluster_alpha < 1.0))
    throw std::runtime_error("cluster_permutation_test: alphas must lie in (0, 1)");

  const size_t n_sub = a.n_subjects();
  if (n_sub < 2) throw std::runtime_error("cluster_permutation_test: need at least 2 subjects");
  const size_t n_ch = a.n_channels();
  const size_t n_pts = a.n_points();
  const size_t flat = n_ch * n_pts;

  ClusterTestResult result;
  result.channels = a.channels;
  result.points = a.points;
  result.observed = dependent_t(a, b);
  result.threshold_t = t_critical(cfg.point_alpha, static_cast<double>(n_sub - 1));

  // flat per-subject difference maps; squared sums are sign-invariant, so
  // every permutation reuses them
  std::vector<std::vector<double>> diffs(n_sub, std::vector<double>(flat));
  std::vector<double> sum_sq(flat, 0.0);
  for (size_t s = 0; s < n_sub; ++s)
    for (size_t c = 0; c < n_ch; ++c)
      for (size_t p = 0; p < n_pts; ++p) {
        const double d = a.values[s][c][p] - b.values[s][c][p];
        diffs[s][c * n_pts + p] = d;
        sum_sq[c * n_pts + p] += d * d;
      }

  std::vector<double> t_obs(flat);
  for (size_t c = 0; c < n_ch; ++c)
    for (size_t p = 0; p < n_pts; ++p) t_obs[c * n_pts + p] = result.observed.t[c][p];

  std::vector<double> masses;
  std::vector<std::vector<size_t>> members;
  find_clusters(t_obs, n_ch, n_pts, result.threshold_t, adjacency, masses, &members);
  for (size_t i = 0; i < masses.size(); ++i) {
    Cluster cl;
    cl.mass = masses[i];
    cl.sign = masses[i] > 0.0 ? 1 : -1;
    for (size_t at : members[i]) cl.members.emplace_back(at / n_pts, at % n_pts);
    std::sort(cl.members.begin(), cl.members.end());
    result.clusters.push_back(std::move(cl));
  }

  result.exact = cfg.exact_when_feasible && n_sub <= 12 &&
                 (1ull << n_sub) <= 4096ull;
  const size_t n_perm = result.exact ? (1ull << n_sub)
                                     : static_cast<size_t>(cfg.n_permutations);
  result.null_max_mass.assign(n_perm, 0.0);

#pragma omp parallel
  {
    std::vector<double> t_perm(flat);
    std::vector<double> perm_masses;
    std::vector<int8_t> signs(n_sub);
#pragma omp for schedule(static)
    for (long pi = 0; pi < static_cast<long>(n_perm); ++pi) {
      if (result.exact) {
        const auto bits = static_cast<uint64_t>(pi);
        for (size_t s = 0; s < n_sub; ++s)
          signs[s] = (bits >> s) & 1 ? -1 : 1;
      } else {
        // substream per permutation: identical results at any thread count
        Rng rng(derive_seed(cfg.seed, static_cast<uint64_t>(pi) + 1));
        for (size_t s = 0; s < n_sub; ++s)
          signs[s] = (rng.next_u64() & 1) ? -1 : 1;
      }
      t_for_signs(diffs, sum_sq, signs, t_perm);
      find_clusters(t_perm, n_ch, n_pts, result.threshold_t, adjacency, perm_masses,
                    nullptr);
      double max_mass = 0.0;
      for (double m : perm_masses) max_mass = std::max(max_mass, std::abs(m));
      result.null_max_mass[static_cast<size_t>(pi)] = max_mass;
    }
  }

  for (auto& cl : result.clusters) {
    size_t hits = 0;
    for (double m : result.null_max_mass)
      if (m >= std::abs(cl.mass)) ++hits;
    cl.p_value = result.exact
                     ? static_cast<double>(hits) / static_cast<double>(n_perm)
                     : (1.0 + static_cast<double>(hits)) /
                           (1.0 + static_cast<double>(n_perm));
  }
  std::sort(result.clusters.begin(), result.clusters.end(),
            [](const Cluster& x, const Cluster& y) {
              return std::abs(x.mass) > std::abs(y.mass);
            });
  return result;
}

ClusterTestResult alpha_contrast(const SubjectGrid& closed, const SubjectGrid& open,
                                 const AdjacencyGraph& adjacency,
                                 const ClusterTestConfig& cfg) {
  return cluster_permutation_test(closed, open, adjacency, cfg);
}

ClusterTestResult erp_contrast(const SubjectGrid& deviant, const SubjectGrid& standard,
                               const AdjacencyGraph& adjacency,
                               const ClusterTestConfig& cfg, double latency_min_ms,
                               double latency_max_ms) {
  const auto dev = restrict_points(deviant, latency_min_ms, latency_max_ms);
  const auto std_ = restrict_points(standard, latency_min_ms, latency_max_ms);
  return cluster_permutation_test(dev, std_, adjacency, cfg);
}

} // namespace eegkit
