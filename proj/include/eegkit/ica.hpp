#pragma once

#include "eegkit/montage.hpp"
#include "eegkit/recording.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace eegkit {

struct IcaOptions {
  int n_components{-1};  // -1 = n_channels - 1
  int max_iter{200};
  double tol{1e-4};
  uint64_t seed{0};
  // Fitting subsamples long recordings (evenly strided) to keep the
  // fixed-point iterations cheap; removal always uses the full data.
  size_t max_samples{20000};
};

struct IcaModel {
  size_t n_channels{0};
  size_t n_components{0};
  std::vector<double> mixing;    // n_channels x n_components, row-major
  std::vector<double> unmixing;  // n_components x n_channels, row-major
  std::vector<double> mean;      // per-channel mean removed before unmixing
  bool converged{false};
  int iterations{0};

  double mixing_at(size_t ch, size_t comp) const { return mixing[ch * n_components + comp]; }
  double unmixing_at(size_t comp, size_t ch) const { return unmixing[comp * n_channels + ch]; }
};

// PCA whitening plus fixed-point symmetric FastICA (tanh contrast).
// Deterministic per seed; throws on rank-deficient data with a hint to
// lower n_components.
IcaModel ica_fit(const Recording& rec, const IcaOptions& opt = {});

// Component time courses: unmixing . (data - mean), components x samples.
std::vector<std::vector<double>> ica_sources(const Recording& rec, const IcaModel& model);

struct ComponentFlag {
  int index{0};
  std::string reason;  // "blink" or "transient"
};

// Heuristic artifact screen: "blink" = frontal-dominant topography
// (FP1+FP2 share of |mixing| > 0.6) with most power below 4 Hz;
// "transient" = source kurtosis > 20.
std::vector<ComponentFlag> ica_flag_components(const IcaModel& model, const Recording& rec);

// Reconstruction with the listed components zeroed:
// data <- mixing . diag(keep) . unmixing . (data - mean) + mean.
// With a full-rank model and no indices this is the identity.
Recording ica_remove(const Recording& rec, const IcaModel& model,
                     const std::vector<int>& indices);

} // namespace eegkit
