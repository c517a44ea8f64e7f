// Cluster permutation statistics: the paired t map against hand-worked
// numbers, planted-effect detection, exact-path agreement with the
// brute-force reference, Monte-Carlo-vs-exact consistency, and the symmetry
// and invariance properties the test must satisfy by construction.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "eegkit/cluster.hpp"
#include "eegkit/reference.hpp"
#include "eegkit/rng.hpp"
#include "eegkit/stats_math.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

using namespace eegkit;

namespace {

// Chain adjacency over generic channel names C0-C(n-1).
AdjacencyGraph chain_adjacency(size_t n_ch) {
  AdjacencyGraph g;
  for (size_t i = 0; i < n_ch; ++i) g.nodes.push_back("C" + std::to_string(i));
  g.edges.assign(n_ch * n_ch, 0);
  for (size_t i = 0; i + 1 < n_ch; ++i) {
    g.edges[i * n_ch + (i + 1)] = 1;
    g.edges[(i + 1) * n_ch + i] = 1;
  }
  return g;
}

SubjectGrid empty_grid(size_t n_sub, size_t n_ch, size_t n_pts) {
  SubjectGrid g;
  for (size_t c = 0; c < n_ch; ++c) g.channels.push_back("C" + std::to_string(c));
  for (size_t p = 0; p < n_pts; ++p) g.points.push_back(static_cast<double>(p));
  g.values.assign(n_sub, std::vector<std::vector<double>>(
                             n_ch, std::vector<double>(n_pts, 0.0)));
  return g;
}

SubjectGrid noise_grid(uint64_t seed, size_t n_sub, size_t n_ch, size_t n_pts,
                       double sigma = 1.0) {
  SubjectGrid g = empty_grid(n_sub, n_ch, n_pts);
  Rng rng(seed);
  for (auto& subj : g.values)
    for (auto& ch : subj)
      for (auto& v : ch) v = sigma * rng.normal();
  return g;
}

std::set<std::pair<size_t, size_t>> member_set(const Cluster& c) {
  return {c.members.begin(), c.members.end()};
}

} // namespace

TEST_CASE("paired t map on differences {1,2,3} gives t = 2*sqrt(3)") {
  SubjectGrid a = empty_grid(3, 1, 1), b = empty_grid(3, 1, 1);
  a.values[0][0][0] = 1.0;
  a.values[1][0][0] = 2.0;
  a.values[2][0][0] = 3.0;

  const TMap tm = dependent_t(a, b);
  CHECK(tm.df == 2.0);
  CHECK(tm.t[0][0] == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
  // Student-t two-sided tail at that statistic, frozen from an exact
  // incomplete-beta evaluation.
  CHECK(tm.p[0][0] == doctest::Approx(0.0741799).epsilon(1e-5));
}

TEST_CASE("degenerate difference patterns: zeros and zero variance") {
  SubjectGrid a = empty_grid(4, 1, 2), b = empty_grid(4, 1, 2);
  // point 0: all differences zero; point 1: constant nonzero difference
  for (size_t s = 0; s < 4; ++s) a.values[s][0][1] = 5.0;

  const TMap tm = dependent_t(a, b);
  CHECK(tm.t[0][0] == 0.0);
  CHECK(tm.p[0][0] == doctest::Approx(1.0));
  CHECK(tm.t[0][1] == 1e15);  // sentinel keeps it supra-threshold
  CHECK(tm.p[0][1] < 1e-6);

  SubjectGrid neg = b;
  for (size_t s = 0; s < 4; ++s) neg.values[s][0][1] = 5.0;
  CHECK(dependent_t(b, neg).t[0][1] == -1e15);
}

TEST_CASE("shape validation") {
  SubjectGrid a = empty_grid(3, 2, 4), b = empty_grid(3, 2, 4);
  SubjectGrid fewer = empty_grid(2, 2, 4);
  CHECK_THROWS(dependent_t(a, fewer));
  SubjectGrid one = empty_grid(1, 2, 4);
  CHECK_THROWS(dependent_t(one, one));
  SubjectGrid ragged = a;
  ragged.values[1][0].pop_back();
  CHECK_THROWS(dependent_t(ragged, b));

  const auto adj = chain_adjacency(2);
  ClusterTestConfig cfg;
  cfg.n_permutations = 0;
  CHECK_THROWS(cluster_permutation_test(a, b, adj, cfg));
  cfg = ClusterTestConfig{};
  cfg.point_alpha = 0.0;
  CHECK_THROWS(cluster_permutation_test(a, b, adj, cfg));
  AdjacencyGraph wrong = chain_adjacency(3);
  CHECK_THROWS(cluster_permutation_test(a, b, wrong, ClusterTestConfig{}));
}

TEST_CASE("identical conditions yield no clusters") {
  const SubjectGrid a = noise_grid(1, 8, 3, 10);
  const auto res = cluster_permutation_test(a, a, chain_adjacency(3), ClusterTestConfig{});
  CHECK(res.clusters.empty());
  CHECK(!res.any_significant(1.0));
  CHECK(res.exact);  // 2^8 = 256 <= 4096
}

TEST_CASE("a planted block effect is found as one significant positive cluster") {
  const size_t n_sub = 10, n_ch = 4, n_pts = 20;
  SubjectGrid b = noise_grid(7, n_sub, n_ch, n_pts);
  SubjectGrid a = b;
  Rng rng(8);
  for (size_t s = 0; s < n_sub; ++s)
    for (size_t c = 0; c <= 1; ++c)  // adjacent channels C0, C1
      for (size_t p = 8; p <= 12; ++p)
        a.values[s][c][p] += 3.0 + 0.3 * rng.normal();

  const auto res =
      cluster_permutation_test(a, b, chain_adjacency(n_ch), ClusterTestConfig{});
  REQUIRE(!res.clusters.empty());
  const Cluster& top = res.clusters.front();
  CHECK(top.sign == 1);
  CHECK(top.mass > 0.0);
  CHECK(top.p_value <= 0.05);

  // The planted block is inside the top cluster.
  const auto members = member_set(top);
  size_t covered = 0;
  for (size_t c = 0; c <= 1; ++c)
    for (size_t p = 8; p <= 12; ++p) covered += members.count({c, p});
  CHECK(covered >= 8);  // allow a noisy point or two to fall sub-threshold

  // Channels C2/C3 far from the effect contribute nothing systematic.
  for (const auto& [c, p] : members) CHECK(c <= 1);
}

TEST_CASE("negative effects come out with negative sign and mass") {
  SubjectGrid b = noise_grid(17, 8, 3, 12);
  SubjectGrid a = b;
  for (auto& subj : a.values)
    for (size_t p = 4; p <= 7; ++p) subj[1][p] -= 2.5;

  const auto res =
      cluster_permutation_test(a, b, chain_adjacency(3), ClusterTestConfig{});
  REQUIRE(!res.clusters.empty());
  CHECK(res.clusters.front().sign == -1);
  CHECK(res.clusters.front().mass < 0.0);
  CHECK(res.clusters.front().p_value <= 0.05);
}

TEST_CASE("swapping the conditions flips every sign and keeps every p") {
  SubjectGrid b = noise_grid(23, 9, 3, 10);
  SubjectGrid a = b;
  for (auto& subj : a.values)
    for (size_t p = 2; p <= 5; ++p) subj[0][p] += 2.0;

  const auto adj = chain_adjacency(3);
  const auto ab = cluster_permutation_test(a, b, adj, ClusterTestConfig{});
  const auto ba = cluster_permutation_test(b, a, adj, ClusterTestConfig{});
  REQUIRE(ab.clusters.size() == ba.clusters.size());
  for (size_t i = 0; i < ab.clusters.size(); ++i) {
    CHECK(ab.clusters[i].sign == -ba.clusters[i].sign);
    CHECK(ab.clusters[i].mass == doctest::Approx(-ba.clusters[i].mass).epsilon(1e-12));
    CHECK(ab.clusters[i].p_value == ba.clusters[i].p_value);
    CHECK(member_set(ab.clusters[i]) == member_set(ba.clusters[i]));
  }
  for (size_t c = 0; c < 3; ++c)
    for (size_t p = 0; p < 10; ++p)
      CHECK(ab.observed.t[c][p] == doctest::Approx(-ba.observed.t[c][p]).epsilon(1e-12));
}

TEST_CASE("the t statistic is scale-free, so the verdict is too") {
  SubjectGrid b = noise_grid(31, 7, 3, 8);
  SubjectGrid a = b;
  // Vary the planted effect across subjects: a constant offset would make the
  // paired differences zero-variance and land on the degenerate-t path.
  for (size_t s = 0; s < a.values.size(); ++s)
    for (size_t p = 3; p <= 5; ++p)
      a.values[s][2][p] += 1.8 + 0.2 * static_cast<double>(s % 5);

  const auto adj = chain_adjacency(3);
  const auto base = cluster_permutation_test(a, b, adj, ClusterTestConfig{});

  SubjectGrid a2 = a, b2 = b;
  for (auto* g : {&a2, &b2})
    for (auto& subj : g->values)
      for (auto& ch : subj)
        for (auto& v : ch) v *= 1000.0;
  const auto scaled = cluster_permutation_test(a2, b2, adj, ClusterTestConfig{});

  REQUIRE(base.clusters.size() == scaled.clusters.size());
  for (size_t i = 0; i < base.clusters.size(); ++i) {
    CHECK(base.clusters[i].p_value == scaled.clusters[i].p_value);
    CHECK(member_set(base.clusters[i]) == member_set(scaled.clusters[i]));
    CHECK(base.clusters[i].mass ==
          doctest::Approx(scaled.clusters[i].mass).epsilon(1e-9));
  }
}

TEST_CASE("exact path agrees with the brute-force reference") {
  const auto adj = chain_adjacency(3);
  for (const uint64_t seed : {101ull, 102ull, 103ull, 104ull, 105ull}) {
    CAPTURE(seed);
    SubjectGrid b = noise_grid(seed, 5, 3, 6);
    SubjectGrid a = noise_grid(seed + 1000, 5, 3, 6);
    // half the runs get a planted bump so both outcomes are exercised
    if (seed % 2 == 1)
      for (auto& subj : a.values)
        for (size_t p = 1; p <= 3; ++p) subj[1][p] += 2.0;

    ClusterTestConfig cfg;  // 2^5 = 32 permutations, exact
    const auto fast = cluster_permutation_test(a, b, adj, cfg);
    const auto slow = cluster_permutation_reference(a, b, adj, cfg.point_alpha);

    CHECK(fast.exact);
    CHECK(fast.threshold_t == doctest::Approx(slow.threshold_t).epsilon(1e-12));
    REQUIRE(fast.clusters.size() == slow.clusters.size());
    for (size_t i = 0; i < fast.clusters.size(); ++i) {
      CHECK(fast.clusters[i].p_value == slow.clusters[i].p_value);  // exact fractions
      CHECK(fast.clusters[i].sign == slow.clusters[i].sign);
      CHECK(fast.clusters[i].mass ==
            doctest::Approx(slow.clusters[i].mass).epsilon(1e-9));
      CHECK(member_set(fast.clusters[i]) == member_set(slow.clusters[i]));
    }
    REQUIRE(fast.null_max_mass.size() == slow.null_max_mass.size());
    for (size_t i = 0; i < fast.null_max_mass.size(); ++i)
      CHECK(fast.null_max_mass[i] ==
            doctest::Approx(slow.null_max_mass[i]).epsilon(1e-9));
  }
}

TEST_CASE("monte carlo p stays inside the exact p's sampling band") {
  const auto adj = chain_adjacency(3);
  SubjectGrid b = noise_grid(55, 8, 3, 8);
  SubjectGrid a = b;
  for (auto& subj : a.values)
    for (size_t p = 2; p <= 4; ++p) subj[0][p] += 1.2;  // middling effect

  ClusterTestConfig exact_cfg;
  const auto exact = cluster_permutation_test(a, b, adj, exact_cfg);
  REQUIRE(!exact.clusters.empty());

  ClusterTestConfig mc_cfg;
  mc_cfg.exact_when_feasible = false;
  mc_cfg.n_permutations = 2000;
  mc_cfg.seed = 9;
  const auto mc = cluster_permutation_test(a, b, adj, mc_cfg);
  CHECK(!mc.exact);
  REQUIRE(mc.clusters.size() == exact.clusters.size());

  for (size_t i = 0; i < mc.clusters.size(); ++i) {
    const double pe = exact.clusters[i].p_value;
    const double pm = mc.clusters[i].p_value;
    const double band = 3.0 * std::sqrt(pe * (1.0 - pe) / 2000.0) + 2.0 / 2000.0;
    CHECK(std::abs(pm - pe) <= band);
    CHECK(pm >= 1.0 / 2001.0);  // the +1 correction forbids p = 0
  }
}

TEST_CASE("monte carlo runs are deterministic per seed") {
  SubjectGrid b = noise_grid(66, 20, 3, 8);  // 20 subjects forces the MC path
  SubjectGrid a = b;
  for (auto& subj : a.values)
    for (size_t p = 1; p <= 4; ++p) subj[1][p] += 0.8;

  const auto adj = chain_adjacency(3);
  ClusterTestConfig cfg;
  cfg.n_permutations = 500;
  cfg.seed = 123;
  const auto r1 = cluster_permutation_test(a, b, adj, cfg);
  const auto r2 = cluster_permutation_test(a, b, adj, cfg);
  CHECK(!r1.exact);
  CHECK(r1.null_max_mass == r2.null_max_mass);
  REQUIRE(r1.clusters.size() == r2.clusters.size());
  for (size_t i = 0; i < r1.clusters.size(); ++i)
    CHECK(r1.clusters[i].p_value == r2.clusters[i].p_value);

  cfg.seed = 124;  // a different seed may differ, but stays valid
  const auto r3 = cluster_permutation_test(a, b, adj, cfg);
  CHECK(r3.null_max_mass.size() == 500);
}

TEST_CASE("erp contrast restricts the tested latencies") {
  const size_t n_sub = 8, n_ch = 3, n_pts = 30;
  SubjectGrid std_g = noise_grid(77, n_sub, n_ch, n_pts);
  SubjectGrid dev_g = std_g;
  // grid points are 0..29 "ms"; effect lives at 20..24
  for (auto& subj : dev_g.values)
    for (size_t p = 20; p <= 24; ++p) subj[1][p] += 3.0;

  const auto adj = chain_adjacency(n_ch);
  ClusterTestConfig cfg;

  const auto inside = erp_contrast(dev_g, std_g, adj, cfg, 15.0, 29.0);
  CHECK(inside.any_significant(0.05));
  CHECK(inside.points.front() == 15.0);
  CHECK(inside.points.back() == 29.0);

  const auto outside = erp_contrast(dev_g, std_g, adj, cfg, 0.0, 14.0);
  CHECK(!outside.any_significant(0.05));

  CHECK_THROWS(erp_contrast(dev_g, std_g, adj, cfg, 100.0, 200.0));
}

TEST_CASE("cluster p-values are monotone in the null distribution") {
  // Every cluster's p equals the fraction of null maxima at or above its
  // mass, so bigger |mass| can never get a bigger p.
  SubjectGrid b = noise_grid(88, 9, 4, 12);
  SubjectGrid a = b;
  for (auto& subj : a.values) {
    for (size_t p = 2; p <= 4; ++p) subj[0][p] += 2.5;
    for (size_t p = 8; p <= 9; ++p) subj[3][p] += 1.0;
  }
  const auto res =
      cluster_permutation_test(a, b, chain_adjacency(4), ClusterTestConfig{});
  for (size_t i = 1; i < res.clusters.size(); ++i) {
    CHECK(std::abs(res.clusters[i - 1].mass) >= std::abs(res.clusters[i].mass));
    CHECK(res.clusters[i - 1].p_value <= res.clusters[i].p_value);
  }
}
