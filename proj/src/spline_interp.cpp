#include "eegkit/spline_interp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eegkit {

namespace {

constexpr double kPi = 3.14159265358979323846;

// P_0..P_degree at x by the three-term recurrence.
void legendre_all(double x, int degree, std::vector<double>& p) {
  p.resize(degree + 1);
  p[0] = 1.0;
  if (degree >= 1) p[1] = x;
  for (int l = 1; l < degree; ++l)
    p[l + 1] = ((2.0 * l + 1.0) * x * p[l] - l * p[l - 1]) / (l + 1.0);
}

} // namespace

double spline_g(double cos_angle, int m, int degree) {
  std::vector<double> p;
  legendre_all(std::clamp(cos_angle, -1.0, 1.0), degree, p);
  double sum = 0.0;
  for (int l = 1; l <= degree; ++l) {
    const double ll = static_cast<double>(l) * (l + 1.0);
    sum += (2.0 * l + 1.0) / std::pow(ll, m) * p[l];
  }
  return sum / (4.0 * kPi);
}

std::vector<double> spline_weights(const Montage& montage,
                                   const std::vector<std::string>& good,
                                   const std::string& target, double lambda) {
  const size_t n = good.size();
  if (n < 2) throw std::runtime_error("spline_weights: fewer than 2 good channels");

  std::vector<Vec3> pos(n);
  for (size_t i = 0; i < n; ++i) pos[i] = montage.position(good[i]);
  const Vec3 tp = montage.position(target);

  // Bordered system: [G + lambda*I, 1; 1^T, 0] [c; c0] = [v; 0].
  // The estimate at the target is linear in v, so one solve against the
  // kernel row gives a reusable weight vector.
  Eigen::MatrixXd a(n + 1, n + 1);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      const double c = pos[i].x * pos[j].x + pos[i].y * pos[j].y + pos[i].z * pos[j].z;
      a(i, j) = spline_g(c) + (i == j ? lambda : 0.0);
    }
    a(i, n) = 1.0;
    a(n, i) = 1.0;
  }
  a(n, n) = 0.0;

  Eigen::VectorXd g(n + 1);
  for (size_t i = 0; i < n; ++i) {
    const double c = tp.x * pos[i].x + tp.y * pos[i].y + tp.z * pos[i].z;
    g(i) = spline_g(c);
  }
  g(n) = 1.0;

  // a is symmetric, so solving a^T w = g equals solving a w = g.
  const Eigen::VectorXd w = a.fullPivLu().solve(g);
  std::vector<double> weights(n);
  for (size_t i = 0; i < n; ++i) weights[i] = w(i);
  return weights;
}

Recording interpolate(const Recording& rec, const Montage& montage,
                      const std::vector<std::string>& bad) {
  if (bad.empty()) return rec;
  for (const auto& ch : bad)
    if (rec.channel_index(ch) < 0)
      throw std::runtime_error("interpolate: unknown bad channel " + ch);

  std::vector<std::string> good;
  for (const auto& ch : rec.channels)
    if (std::find(bad.begin(), bad.end(), ch) == bad.end()) good.push_back(ch);
  if (good.size() < 2)
    throw std::runtime_error("interpolate: fewer than 2 good channels remain");

  Recording out = rec;
  const size_t n = rec.n_samples();
  for (const auto& target : bad) {
    const auto w = spline_weights(montage, good, target);
    auto& row = out.data[static_cast<size_t>(rec.channel_index(target))];
    for (size_t t = 0; t < n; ++t) {
      double v = 0.0;
      for (size_t i = 0; i < good.size(); ++i)
        v += w[i] * rec.data[static_cast<size_t>(rec.channel_index(good[i]))][t];
      row[t] = static_cast<float>(v);
    }
  }
  return out;
}

} // namespace eegkit
