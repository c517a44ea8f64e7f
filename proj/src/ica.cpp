#include "eegkit/ica.hpp"

#include "eegkit/psd.hpp"
#include "eegkit/rng.hpp"
#include "eegkit/stats_math.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace eegkit {

namespace {

// W <- (W W^T)^(-1/2) W, the symmetric decorrelation step.
Eigen::MatrixXd sym_decorrelate(const Eigen::MatrixXd& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w * w.transpose());
  const Eigen::VectorXd d = es.eigenvalues().cwiseMax(1e-18).cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose() * w;
}

} // namespace

IcaModel ica_fit(const Recording& rec, const IcaOptions& opt) {
  const size_t n_ch = rec.n_channels();
  const size_t n = rec.n_samples();
  if (n_ch < 2) throw std::runtime_error("ica_fit: need at least 2 channels");
  const int want = opt.n_components > 0 ? opt.n_components
                                        : static_cast<int>(n_ch) - 1;
  if (want < 1 || static_cast<size_t>(want) > n_ch)
    throw std::runtime_error("ica_fit: n_components must lie in [1, n_channels]");
  const auto n_comp = static_cast<size_t>(want);
  if (n < 2 * n_ch) throw std::runtime_error("ica_fit: too few samples");

  // Evenly strided subsample for fitting.
  const size_t stride = opt.max_samples > 0 ? std::max<size_t>(1, n / opt.max_samples) : 1;
  const size_t m = (n + stride - 1) / stride;

  IcaModel model;
  model.n_channels = n_ch;
  model.n_components = n_comp;
  model.mean.resize(n_ch);
  for (size_t c = 0; c < n_ch; ++c) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += rec.data[c][i];
    model.mean[c] = s / static_cast<double>(n);
  }

  Eigen::MatrixXd x(n_ch, m);
  for (size_t c = 0; c < n_ch; ++c)
    for (size_t j = 0; j < m; ++j)
      x(c, j) = static_cast<double>(rec.data[c][j * stride]) - model.mean[c];

  // PCA whitening: keep the n_comp largest-variance directions.
  const Eigen::MatrixXd cov = x * x.transpose() / static_cast<double>(m - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);  // eigenvalues ascending
  const Eigen::VectorXd evals = es.eigenvalues();
  const double top = evals(n_ch - 1);
  if (top <= 0.0) throw std::runtime_error("ica_fit: data has zero variance");
  Eigen::MatrixXd e_r(n_ch, n_comp);
  Eigen::VectorXd d_r(n_comp);
  for (size_t k = 0; k < n_comp; ++k) {
    const auto src = n_ch - 1 - k;  // descending order
    d_r(k) = evals(src);
    e_r.col(k) = es.eigenvectors().col(src);
  }
  if (d_r(n_comp - 1) < 1e-12 * top)
    throw std::runtime_error(
        "ica_fit: rank-deficient data; retry with fewer components");

  const Eigen::MatrixXd whiten =
      d_r.cwiseSqrt().cwiseInverse().asDiagonal() * e_r.transpose();  // n_comp x n_ch
  const Eigen::MatrixXd z = whiten * x;                               // n_comp x m

  // Random orthogonal start, reproducible via our own generator.
  Rng rng(derive_seed(opt.seed, 7));
  Eigen::MatrixXd w(n_comp, n_comp);
  for (size_t i = 0; i < n_comp; ++i)
    for (size_t j = 0; j < n_comp; ++j) w(i, j) = rng.normal();
  w = sym_decorrelate(w);

  const double inv_m = 1.0 / static_cast<double>(m);
  for (int it = 0; it < opt.max_iter; ++it) {
    const Eigen::MatrixXd y = w * z;                 // n_comp x m
    const Eigen::MatrixXd g = y.array().tanh();
    const Eigen::VectorXd g_prime_mean =
        (1.0 - g.array().square()).rowwise().mean();
    Eigen::MatrixXd w_new =
        g * z.transpose() * inv_m - g_prime_mean.asDiagonal() * w;
    w_new = sym_decorrelate(w_new);

    // max direction change over components, sign-insensitive
    double delta = 0.0;
    for (size_t i = 0; i < n_comp; ++i)
      delta = std::max(delta,
                       1.0 - std::abs(w_new.row(i).dot(w.row(i))));
    w = w_new;
    model.iterations = it + 1;
    if (delta < opt.tol) {
      model.converged = true;
      break;
    }
  }

  const Eigen::MatrixXd unmix = w * whiten;  // n_comp x n_ch
  // Pseudo-inverse through the whitening factors: unmix . mix = I exactly
  // (up to floating point) because w is orthogonal.
  const Eigen::MatrixXd mix = e_r * d_r.cwiseSqrt().asDiagonal() * w.transpose();

  model.unmixing.resize(n_comp * n_ch);
  model.mixing.resize(n_ch * n_comp);
  for (size_t i = 0; i < n_comp; ++i)
    for (size_t c = 0; c < n_ch; ++c) model.unmixing[i * n_ch + c] = unmix(i, c);
  for (size_t c = 0; c < n_ch; ++c)
    for (size_t i = 0; i < n_comp; ++i) model.mixing[c * n_comp + i] = mix(c, i);
  return model;
}

std::vector<std::vector<double>> ica_sources(const Recording& rec, const IcaModel& model) {
  if (rec.n_channels() != model.n_channels)
    throw std::runtime_error("ica_sources: channel count does not match model");
  const size_t n = rec.n_samples();
  std::vector<std::vector<double>> src(model.n_components, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < model.n_components; ++i)
    for (size_t c = 0; c < model.n_channels; ++c) {
      const double w = model.unmixing_at(i, c);
      if (w == 0.0) continue;
      const auto& row = rec.data[c];
      auto& out = src[i];
      const double mu = model.mean[c];
      for (size_t t = 0; t < n; ++t) out[t] += w * (row[t] - mu);
    }
  return src;
}

std::vector<ComponentFlag> ica_flag_components(const IcaModel& model, const Recording& rec) {
  const auto sources = ica_sources(rec, model);
  const int fp1 = rec.channel_index("FP1");
  const int fp2 = rec.channel_index("FP2");

  std::vector<ComponentFlag> flags;
  for (size_t i = 0; i < model.n_components; ++i) {
    double total_w = 0.0, frontal_w = 0.0;
    for (size_t c = 0; c < model.n_channels; ++c) {
      const double a = std::abs(model.mixing_at(c, i));
      total_w += a;
      if (static_cast<int>(c) == fp1 || static_cast<int>(c) == fp2) frontal_w += a;
    }
    const double frontal_share = total_w > 0.0 ? frontal_w / total_w : 0.0;

    bool flagged = false;
    if (frontal_share > 0.6) {
      // The denominator must span the whole spectrum: truncating it inflates
      // the low-frequency share of broadband components and produces false
      // blink flags on unfiltered data.
      const auto psd = welch_psd_channel(sources[i], rec.rate, 2.0, 0.5,
                                         rec.rate / 2.0);
      double low = 0.0, total = 0.0;
      for (size_t k = 0; k < psd.freqs.size(); ++k) {
        total += psd.power[k];
        if (psd.freqs[k] < 4.0) low += psd.power[k];
      }
      if (total > 0.0 && low / total > 0.5) {
        flags.push_back({static_cast<int>(i), "blink"});
        flagged = true;
      }
    }
    if (!flagged && kurtosis(sources[i]) > 20.0)
      flags.push_back({static_cast<int>(i), "transient"});
  }
  return flags;
}

Recording ica_remove(const Recording& rec, const IcaModel& model,
                     const std::vector<int>& indices) {
  if (rec.n_channels() != model.n_channels)
    throw std::runtime_error("ica_remove: channel count does not match model");
  for (int i : indices)
    if (i < 0 || static_cast<size_t>(i) >= model.n_components)
      throw std::runtime_error("ica_remove: component index out of range");

  std::vector<bool> keep(model.n_components, true);
  for (int i : indices) keep[static_cast<size_t>(i)] = false;

  const size_t n_ch = model.n_channels;
  Eigen::MatrixXd mix(n_ch, model.n_components), unmix(model.n_components, n_ch);
  for (size_t c = 0; c < n_ch; ++c)
    for (size_t i = 0; i < model.n_components; ++i) {
      mix(c, i) = keep[i] ? model.mixing_at(c, i) : 0.0;
      unmix(i, c) = model.unmixing_at(i, c);
    }
  const Eigen::MatrixXd m = mix * unmix;  // n_ch x n_ch

  Recording out = rec;
  const size_t n = rec.n_samples();
  std::vector<double> centered(n_ch);
  for (size_t t = 0; t < n; ++t) {
    for (size_t c = 0; c < n_ch; ++c)
      centered[c] = static_cast<double>(rec.data[c][t]) - model.mean[c];
    for (size_t c = 0; c < n_ch; ++c) {
      double v = model.mean[c];
      for (size_t k = 0; k < n_ch; ++k) v += m(c, k) * centered[k];
      out.data[c][t] = static_cast<float>(v);
    }
  }
  return out;
}

} // namespace eegkit
