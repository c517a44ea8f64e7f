#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eegkit/fft.hpp"
#include "eegkit/montage.hpp"
#include "eegkit/recording.hpp"
#include "eegkit/recording_io.hpp"
#include "eegkit/rng.hpp"
#include "eegkit/stats_math.hpp"

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <vector>

using namespace eegkit;
namespace fs = std::filesystem;

TEST_CASE("rng streams are deterministic and decorrelated") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  // different derive_seed streams should not collide
  CHECK(derive_seed(42, 0) != derive_seed(42, 1));
  CHECK(derive_seed(42, 0) != derive_seed(43, 0));

  Rng c(derive_seed(42, 0)), d(derive_seed(42, 1));
  int agree = 0;
  for (int i = 0; i < 64; ++i) agree += (c.next_u64() & 1) == (d.next_u64() & 1);
  CHECK(agree < 50);  // ~32 expected for independent bit streams
}

TEST_CASE("rng distributions have the right moments") {
  Rng rng(7);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = rng.normal();
    sum += v;
    sum2 += v * v;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.02));

  double esum = 0.0;
  for (int i = 0; i < n; ++i) esum += rng.exponential(2.0);
  CHECK(esum / n == doctest::Approx(2.0).epsilon(0.03));

  // uniform_int covers all values without obvious bias
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.uniform_int(7)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("fft round trip and known transform") {
  Rng rng(3);
  std::vector<std::complex<double>> x(256);
  for (auto& v : x) v = {rng.normal(), rng.normal()};
  auto y = x;
  fft_inplace(y, false);
  fft_inplace(y, true);
  for (size_t i = 0; i < x.size(); ++i) {
    CHECK(std::abs(y[i].real() - x[i].real()) < 1e-12);
    CHECK(std::abs(y[i].imag() - x[i].imag()) < 1e-12);
  }

  // single cosine concentrates in the matching bins
  std::vector<std::complex<double>> tone(64);
  for (size_t t = 0; t < 64; ++t) tone[t] = std::cos(2.0 * M_PI * 5.0 * t / 64.0);
  fft_inplace(tone, false);
  CHECK(std::abs(tone[5]) == doctest::Approx(32.0).epsilon(1e-9));
  CHECK(std::abs(tone[59]) == doctest::Approx(32.0).epsilon(1e-9));
  CHECK(std::abs(tone[12]) < 1e-9);
}

TEST_CASE("fft convolution equals naive convolution") {
  Rng rng(9);
  std::vector<double> x(137), h(31);
  for (auto& v : x) v = rng.normal();
  for (auto& v : h) v = rng.normal();

  const auto fast = fft_convolve(x, h);
  REQUIRE(fast.size() == x.size() + h.size() - 1);
  for (size_t n = 0; n < fast.size(); ++n) {
    double acc = 0.0;
    for (size_t k = 0; k < h.size(); ++k)
      if (n >= k && n - k < x.size()) acc += h[k] * x[n - k];
    CHECK(fast[n] == doctest::Approx(acc).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("t statistics match external table values") {
  // I_x(1/2,1/2) = (2/pi) asin(sqrt(x)); x = 1/4 gives exactly 1/3
  CHECK(incbeta(0.5, 0.5, 0.25) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));

  CHECK(t_two_sided_p(2.0 * std::sqrt(3.0), 2.0) == doctest::Approx(0.0741799).epsilon(1e-5));
  CHECK(t_two_sided_p(1.0, 10.0) == doctest::Approx(0.3408931).epsilon(1e-5));
  CHECK(t_two_sided_p(0.0, 5.0) == doctest::Approx(1.0));

  CHECK(t_critical(0.05, 9.0) == doctest::Approx(2.2621572).epsilon(1e-6));
  CHECK(t_critical(0.05, 4.0) == doctest::Approx(2.7764451).epsilon(1e-6));
  CHECK(t_critical(0.05, 2.0) == doctest::Approx(4.3026527).epsilon(1e-6));
  // definition check: p at the critical value equals alpha
  CHECK(t_two_sided_p(t_critical(0.01, 7.0), 7.0) == doctest::Approx(0.01).epsilon(1e-6));
}

TEST_CASE("descriptive statistics") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0, 10.0};
  const auto st = mean_sd(v);
  CHECK(st.mean == doctest::Approx(4.0));
  CHECK(st.sd == doctest::Approx(std::sqrt(12.5)));
  CHECK(median(std::vector<double>{3.0, 1.0, 2.0}) == doctest::Approx(2.0));
  CHECK(median(std::vector<double>{4.0, 1.0, 2.0, 3.0}) == doctest::Approx(2.5));
  // MAD of {1..5}: median 3, |d| = {2,1,0,1,2}, mad = 1
  CHECK(mad_sd(std::vector<double>{1, 2, 3, 4, 5}) == doctest::Approx(1.4826));

  std::vector<double> a{1, 2, 3, 4}, b{2, 4, 6, 8}, c{4, 3, 2, 1};
  CHECK(pearson(a, b) == doctest::Approx(1.0));
  CHECK(pearson(a, c) == doctest::Approx(-1.0));

  // kurtosis of a big normal sample ~ 3, of a heavy spike much larger
  Rng rng(5);
  std::vector<double> g(50000);
  for (auto& x : g) x = rng.normal();
  CHECK(kurtosis(g) == doctest::Approx(3.0).epsilon(0.05));
  std::vector<double> spike(1000, 0.01);
  spike[500] = 10.0;
  CHECK(kurtosis(spike) > 100.0);
}

TEST_CASE("recording validation catches each invariant") {
  Recording rec;
  rec.rate = 500.0;
  rec.channels = {"A", "B"};
  rec.data = {{0.f, 1.f, 2.f}, {3.f, 4.f, 5.f}};
  rec.markers = {{1, kMarkerStandard, "standard"}};
  CHECK_NOTHROW(rec.validate());

  auto bad = rec;
  bad.rate = 0.0;
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("rate"), std::runtime_error);

  bad = rec;
  bad.channels = {"A", "A"};
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("duplicate"), std::runtime_error);

  bad = rec;
  bad.data[1].pop_back();
  CHECK_THROWS_AS(bad.validate(), std::runtime_error);

  bad = rec;
  bad.markers = {{5, 1, "x"}};  // beyond the last sample
  CHECK_THROWS_AS(bad.validate(), std::runtime_error);

  bad = rec;
  bad.markers = {{2, 1, "x"}, {1, 1, "y"}};  // unsorted
  CHECK_THROWS_AS(bad.validate(), std::runtime_error);

  CHECK(rec.channel_index("B") == 1);
  CHECK(rec.channel_index("Z") == -1);
}

TEST_CASE("montage geometry matches hand-computed angles") {
  const Montage m = standard_montage();

  // all positions are unit vectors
  for (const auto& [label, p] : m.entries) {
    INFO(label);
    CHECK(std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z) == doctest::Approx(1.0).epsilon(1e-12));
  }

  // left/right mirror symmetry: x flips, y and z match
  const std::vector<std::pair<std::string, std::string>> mirrors{
      {"FP1", "FP2"}, {"T7", "T8"}, {"TP7", "TP8"}, {"F7", "F8"}, {"O1", "O2"}, {"C3", "C4"}};
  for (const auto& [l, r] : mirrors) {
    const Vec3 a = m.position(l), b = m.position(r);
    CHECK(a.x == doctest::Approx(-b.x).epsilon(1e-12));
    CHECK(a.y == doctest::Approx(b.y).epsilon(1e-12));
    CHECK(a.z == doctest::Approx(b.z).epsilon(1e-12));
  }

  // spherical-trig oracles (2*asin(sin(dg/2)*cos(18 deg)) for ring pairs)
  CHECK(angular_distance(m.position("TP7"), m.position("T7")) ==
        doctest::Approx(0.298665).epsilon(1e-5));
  CHECK(angular_distance(m.position("FP1"), m.position("FP2")) ==
        doctest::Approx(0.596594).epsilon(1e-5));
  CHECK(angular_distance(m.position("TP7"), m.position("FP2")) ==
        doctest::Approx(2.022129).epsilon(1e-5));
  CHECK(angular_distance(m.position("TP7"), m.position("TP8")) ==
        doctest::Approx(2.260452).epsilon(1e-5));
  CHECK(angular_distance(m.position("Fz"), m.position("FP1")) ==
        doctest::Approx(0.673479).epsilon(1e-5));
}

TEST_CASE("headband adjacency at the default angle is the three mirror pairs") {
  const auto g = adjacency(standard_montage(), headband_channels(), kDefaultAdjacencyAngle);
  REQUIRE(g.nodes == headband_channels());
  CHECK(g.n_edges() == 3);

  auto has_edge = [&](const std::string& a, const std::string& b) {
    size_t ia = 0, ib = 0;
    for (size_t i = 0; i < g.nodes.size(); ++i) {
      if (g.nodes[i] == a) ia = i;
      if (g.nodes[i] == b) ib = i;
    }
    return g.edge(ia, ib) && g.edge(ib, ia);
  };
  CHECK(has_edge("TP7", "T7"));
  CHECK(has_edge("T8", "TP8"));
  CHECK(has_edge("FP1", "FP2"));
  CHECK_FALSE(has_edge("T7", "FP1"));
  CHECK_FALSE(has_edge("TP7", "TP8"));

  // diagonal must stay empty
  for (size_t i = 0; i < g.size(); ++i) CHECK_FALSE(g.edge(i, i));

  CHECK_THROWS_AS(adjacency(standard_montage(), {"T7", "nope"}, 0.7), std::runtime_error);
  CHECK_THROWS_AS(adjacency(standard_montage(), headband_channels(), 0.0), std::runtime_error);
}

TEST_CASE("recording save/load round trip preserves float32 payloads exactly") {
  const fs::path dir = fs::temp_directory_path() / "eegkit_io_test";
  fs::remove_all(dir);

  Recording rec;
  rec.rate = 500.0;
  rec.channels = {"T7", "FP1"};
  rec.data.assign(2, std::vector<float>(257));
  Rng rng(21);
  for (auto& row : rec.data)
    for (auto& v : row) v = static_cast<float>(rng.normal() * 50.0);
  rec.data[0][0] = -0.0f;
  rec.data[1][13] = 1.17549435e-38f;  // smallest normal float
  rec.data[1][14] = 123456.789f;
  rec.markers = {{0, kMarkerEyesOpen, "eyes_open"}, {200, kMarkerEyesClosed, "eyes_closed"}};
  rec.meta = {{"task", "eyes"}, {"subject", "1"}};

  save_recording(rec, dir);
  const Recording back = load_recording(dir);
  CHECK(back.rate == rec.rate);
  CHECK(back.channels == rec.channels);
  CHECK(back.markers == rec.markers);
  CHECK(back.meta == rec.meta);
  REQUIRE(back.data.size() == rec.data.size());
  for (size_t c = 0; c < rec.data.size(); ++c)
    for (size_t t = 0; t < rec.data[c].size(); ++t) CHECK(back.data[c][t] == rec.data[c][t]);

  fs::remove_all(dir);
}

TEST_CASE("recording loader reports missing and malformed input") {
  const fs::path dir = fs::temp_directory_path() / "eegkit_io_bad";
  fs::remove_all(dir);
  CHECK_THROWS_WITH_AS(load_recording(dir), doctest::Contains("meta.json"), std::runtime_error);

  // valid recording, then corrupt one signals cell
  Recording rec;
  rec.rate = 100.0;
  rec.channels = {"A"};
  rec.data = {{1.f, 2.f, 3.f}};
  save_recording(rec, dir);
  {
    std::ofstream out(dir / "signals.csv");
    out << "sample,A\n0,1\n1,oops\n2,3\n";
  }
  CHECK_THROWS_WITH_AS(load_recording(dir), doctest::Contains("line 3"), std::runtime_error);
  fs::remove_all(dir);
}
