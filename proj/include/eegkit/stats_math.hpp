#pragma once

#include <cstddef>
#include <vector>

namespace eegkit {

// Regularized incomplete beta function I_x(a, b).
double incbeta(double a, double b, double x);

// Two-sided p-value of a Student t statistic with df degrees of freedom.
double t_two_sided_p(double t, double df);

// Two-sided critical value: |t| above this has p < alpha.
double t_critical(double alpha, double df);

struct SampleStats {
  double mean{0.0};
  double sd{0.0};  // unbiased (n-1)
};

SampleStats mean_sd(const std::vector<double>& v);
double median(std::vector<double> v);          // by value, partial-sorts
double mad_sd(const std::vector<double>& v);   // 1.4826 * median(|x - median|)
double pearson(const std::vector<double>& a, const std::vector<double>& b);
double kurtosis(const std::vector<double>& v); // m4 / m2^2, normal = 3

} // namespace eegkit
