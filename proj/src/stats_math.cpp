#include "eegkit/stats_math.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eegkit {

namespace {

// Lentz's continued fraction for the incomplete beta function.
double betacf(double a, double b, double x) {
  const int max_iter = 300;
  const double eps = 3e-14;
  const double fpmin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

} // namespace

double incbeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log1p(-x);
  const double bt = std::exp(ln_bt);
  if (x < (a + 1.0) / (a + b + 2.0))
    return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double t_two_sided_p(double t, double df) {
  if (df <= 0.0) throw std::runtime_error("t_two_sided_p: df must be > 0");
  if (!std::isfinite(t)) return 0.0;
  const double x = df / (df + t * t);
  return incbeta(df / 2.0, 0.5, x);
}

double t_critical(double alpha, double df) {
  if (alpha <= 0.0 || alpha >= 1.0) throw std::runtime_error("t_critical: alpha must be in (0,1)");
  double lo = 0.0, hi = 1.0;
  while (t_two_sided_p(hi, df) > alpha) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (t_two_sided_p(mid, df) > alpha)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

SampleStats mean_sd(const std::vector<double>& v) {
  SampleStats s;
  const size_t n = v.size();
  if (n == 0) return s;
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(n);
  if (n < 2) return s;
  double ss = 0.0;
  for (double x : v) {
    const double d = x - s.mean;
    ss += d * d;
  }
  s.sd = std::sqrt(ss / static_cast<double>(n - 1));
  return s;
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::runtime_error("median: empty input");
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
    m = 0.5 * (m + v[mid - 1]);
  }
  return m;
}

double mad_sd(const std::vector<double>& v) {
  const double m = median(std::vector<double>(v));
  std::vector<double> dev(v.size());
  for (size_t i = 0; i < v.size(); ++i) dev[i] = std::fabs(v[i] - m);
  return 1.4826 * median(std::move(dev));
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty())
    throw std::runtime_error("pearson: inputs must be non-empty and equal length");
  const size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

double kurtosis(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const size_t n = v.size();
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(n);
  double m2 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = x - m;
    const double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  if (m2 <= 0.0) return 0.0;
  return m4 / (m2 * m2);
}

} // namespace eegkit
