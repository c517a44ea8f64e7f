#pragma once

#include "eegkit/montage.hpp"
#include "eegkit/recording.hpp"

#include <string>
#include <vector>

namespace eegkit {

// Spherical-spline scalp interpolation: bad channels are re-estimated from
// the good ones via the classic m=4 spline kernel (Legendre series to
// degree 7, ridge term 1e-5). Splines reproduce constant fields exactly.

// The spline kernel g(cos(angle)) as a Legendre series.
double spline_g(double cos_angle, int m = 4, int degree = 7);

// Interpolation weights: estimate at `target` = weights . values at `good`.
std::vector<double> spline_weights(const Montage& montage,
                                   const std::vector<std::string>& good,
                                   const std::string& target,
                                   double lambda = 1e-5);

// Replaces each bad channel with its spline estimate from the good ones.
// Good channels are untouched. Throws when fewer than 2 good channels
// remain or a label is missing from the montage.
Recording interpolate(const Recording& rec, const Montage& montage,
                      const std::vector<std::string>& bad);

} // namespace eegkit
