// Timings for the two parallel kernels against their single-threaded
// reference implementations. Numbers are wall-clock; run on an idle box.

#include "eegkit/cluster.hpp"
#include "eegkit/filter.hpp"
#include "eegkit/parallel.hpp"
#include "eegkit/reference.hpp"
#include "eegkit/rng.hpp"
#include "eegkit/synth.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

namespace {

using namespace eegkit;

double time_ms(const std::function<void()>& fn, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

SubjectGrid random_grid(size_t n_sub, size_t n_ch, size_t n_pts,
                        const std::vector<std::string>& channels, uint64_t seed) {
  SubjectGrid g;
  g.channels = channels;
  g.points.resize(n_pts);
  for (size_t p = 0; p < n_pts; ++p) g.points[p] = static_cast<double>(p);
  Rng rng(seed);
  g.values.assign(n_sub, std::vector<std::vector<double>>(n_ch, std::vector<double>(n_pts)));
  for (auto& s : g.values)
    for (auto& c : s)
      for (auto& v : c) v = rng.normal();
  return g;
}

}  // namespace

int main() {
  std::printf("threads available: %d\n\n", max_threads());

  {
    NoiseSpec noise;
    noise.kind = NoiseKind::pink;
    noise.sigma = 10.0;
    noise.seed = 7;
    const Recording rec = gen_noise(headband_channels_with_ref(), 120.0, 500.0, noise);
    const FilterSpec spec;
    const auto taps = design_bandpass_taps(spec, rec.rate);
    std::printf("bandpass: %zu channels x %zu samples, %zu taps\n", rec.n_channels(),
                rec.n_samples(), taps.size());

    const double t_par = time_ms([&] { bandpass(rec, spec); });
    const double t_ref = time_ms([&] {
      for (const auto& row : rec.data) {
        std::vector<double> x(row.begin(), row.end());
        filter_zero_phase_reference(x, taps);
      }
    }, 1);
    std::printf("  fft + threads : %8.1f ms\n", t_par);
    std::printf("  direct serial : %8.1f ms   (%.1fx)\n\n", t_ref, t_ref / t_par);
  }

  {
    const auto channels = headband_channels();
    const size_t n_sub = 10, n_pts = 301;
    const auto a = random_grid(n_sub, channels.size(), n_pts, channels, 11);
    const auto b = random_grid(n_sub, channels.size(), n_pts, channels, 22);
    const auto adj = adjacency(standard_montage(), channels, kDefaultAdjacencyAngle);

    ClusterTestConfig cfg;
    cfg.exact_when_feasible = true;  // 2^10 = 1024 sign patterns
    std::printf("cluster test: %zu subjects x %zu channels x %zu points, 1024 exact patterns\n",
                n_sub, channels.size(), n_pts);

    const double t_par = time_ms([&] { cluster_permutation_test(a, b, adj, cfg); });
    const double t_ref =
        time_ms([&] { cluster_permutation_reference(a, b, adj, cfg.point_alpha); }, 1);
    std::printf("  incremental + threads : %8.1f ms\n", t_par);
    std::printf("  brute-force serial    : %8.1f ms   (%.1fx)\n", t_ref, t_ref / t_par);
  }

  return 0;
}
