#include "pntk/pseudo_network.hpp"

#include <algorithm>
#include <cmath>
#include <span>

namespace pntk {
namespace {

void require_rescaled(const NetworkConfig& config) {
  if (!config.rescale && config.alpha < 1.0)
    throw ConfigError("pseudo-network operations require rescaled masks");
}

void check_source(const NetworkState& state, const ForwardTrace& host, int h,
                  int j) {
  const auto& config = state.config();
  if (h < 2 || h > config.depth_L)
    throw ShapeError("pseudo-network source layer must lie in [2, L]");
  if (host.depth() != config.depth_L)
    throw ShapeError("host trace does not match network state");
  if (j < 0 || j >= config.layer_cols(h))
    throw ShapeError("pseudo-network column index out of range");
}

double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  size_t i = 0, k = 0;
  double d = 0.0;
  while (i < a.size() && k < b.size()) {
    const double t = std::min(a[i], b[k]);
    while (i < a.size() && a[i] <= t) ++i;
    while (k < b.size() && b[k] <= t) ++k;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(k) / nb));
  }
  return d;
}

}  // namespace

Vector pseudo_row_norms_sq(const NetworkState& state, const ForwardTrace& host,
                           int h) {
  const auto& config = state.config();
  if (h < 2 || h > config.depth_L)
    throw ShapeError("pseudo-network source layer must lie in [2, L]");
  const auto& support = state.support(h);
  const Vector& g_prev = host.g(h - 1);
  const double s2 = state.mask_scale(h) * state.mask_scale(h);
  const int rows = static_cast<int>(support.rows());
  const int cols = static_cast<int>(support.cols());
  Vector norms(rows);
  for (int i = 0; i < rows; ++i) {
    const std::uint8_t* row = support.data() + static_cast<size_t>(i) * cols;
    double acc = 0.0;
    for (int jj = 0; jj < cols; ++jj)
      acc += row[jj] ? g_prev(jj) * g_prev(jj) : 0.0;
    norms(i) = s2 * acc;
  }
  return norms;
}

PseudoTrace pseudo_forward(const NetworkState& state, const ForwardTrace& host,
                           int h, int j) {
  return pseudo_forward(state, host, h, j, pseudo_row_norms_sq(state, host, h));
}

PseudoTrace pseudo_forward(const NetworkState& state, const ForwardTrace& host,
                           int h, int j, const Vector& row_norms_sq) {
  const auto& config = state.config();
  require_rescaled(config);
  check_source(state, host, h, j);
  const auto& support = state.support(h);
  if (row_norms_sq.size() != support.rows())
    throw ShapeError("row norm vector does not match layer height");

  PseudoTrace trace;
  trace.source_layer = h;
  trace.column = j;

  const int d_h = config.layer_rows(h);
  // m_ij sqrt(alpha) is exactly the 0/1 support under the rescaled
  // convention, so the diagonal is support_ij / ||g^(h-1) .* m_i||^2.
  Vector g_cur(d_h);
  const double norm_h = std::sqrt(kCSigma / d_h);
  for (int i = 0; i < d_h; ++i) {
    if (!support(i, j)) {
      g_cur(i) = 0.0;
      continue;
    }
    if (!(row_norms_sq(i) > 0.0)) throw DegenerateMaskError(h, i);
    g_cur(i) = norm_h * host.relu(h)(i) * host.f(h)(i) / row_norms_sq(i);
  }
  trace.g_seq.push_back(g_cur);

  const int L = config.depth_L;
  for (int hp = h + 1; hp <= L; ++hp) {
    const Vector f_ps = state.mask_scale(hp) * (state.weights(hp) * g_cur);
    const double norm = std::sqrt(kCSigma / config.layer_rows(hp));
    g_cur = norm * host.relu(hp).cwiseProduct(f_ps);
    trace.g_seq.push_back(g_cur);
  }
  trace.output =
      (state.mask_scale(L + 1) * (state.weights(L + 1) * g_cur))(0);
  return trace;
}

IndicatorReport check_indicator_identity(const Vector& x, const Vector& y,
                                         int n_samples, RandomStream stream) {
  if (x.size() != y.size()) throw ShapeError("x and y must have equal length");
  if (x.norm() == 0.0 || y.norm() == 0.0)
    throw NumericError("indicator identity requires nonzero vectors");
  if (n_samples < 1) throw ConfigError("n_samples must be at least 1");

  CounterRng rng(stream, 0, StreamRole::kGaussianProbe);
  const int dim = static_cast<int>(x.size());
  Vector w(dim);
  std::vector<double> lhs(static_cast<size_t>(n_samples));
  std::vector<double> rhs(static_cast<size_t>(n_samples));
  double sum_lhs = 0.0, sum_rhs = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    fill_standard_normal(rng, std::span<double>(w.data(), w.size()));
    const double wx = w.dot(x);
    const double wy = w.dot(y);
    const double l = wx * wx * (wy > 0.0 ? 1.0 : 0.0);
    const double r = wx * wx * (wx > 0.0 ? 1.0 : 0.0);
    lhs[static_cast<size_t>(k)] = l;
    rhs[static_cast<size_t>(k)] = r;
    sum_lhs += l;
    sum_rhs += r;
  }
  IndicatorReport report;
  report.n_samples = n_samples;
  report.mean_lhs = sum_lhs / n_samples;
  report.mean_rhs = sum_rhs / n_samples;
  report.ks_distance = two_sample_ks(std::move(lhs), std::move(rhs));
  return report;
}

NormPreservationReport check_norm_preservation(const NetworkState& state,
                                               const ForwardTrace& host, int h,
                                               int j, int n_resample,
                                               RandomStream stream,
                                               bool resample_masks) {
  const auto& config = state.config();
  require_rescaled(config);
  check_source(state, host, h, j);
  if (n_resample < 1) throw ConfigError("n_resample must be at least 1");

  const PseudoTrace base = pseudo_forward(state, host, h, j);
  const Vector& g_base = base.g(h);
  const int L = config.depth_L;

  NormPreservationReport report;
  report.rhs = g_base.squaredNorm();
  report.per_layer_mean_sq.assign(static_cast<size_t>(L - h) + 1, 0.0);
  report.per_layer_mean_sq[0] = report.rhs;
  if (h == L) {
    report.lhs = report.rhs;
    return report;
  }

  for (int r = 0; r < n_resample; ++r) {
    const RandomStream rs{stream.seed, stream.stream_id + static_cast<std::uint64_t>(r)};
    Vector g_host = host.g(h);
    Vector g_ps = g_base;
    for (int hp = h + 1; hp <= L; ++hp) {
      const int rows = config.layer_rows(hp);
      const int cols = config.layer_cols(hp);
      RowMatrix w(rows, cols);
      CounterRng wrng(rs, static_cast<std::uint64_t>(hp),
                      StreamRole::kResampleWeight);
      fill_standard_normal(
          wrng, std::span<double>(w.data(), static_cast<size_t>(rows) * cols));
      if (resample_masks) {
        SupportMatrix sup(rows, cols);
        CounterRng mrng(rs, static_cast<std::uint64_t>(hp),
                        StreamRole::kResampleMask);
        fill_bernoulli(
            mrng,
            std::span<std::uint8_t>(sup.data(),
                                    static_cast<size_t>(rows) * cols),
            config.alpha);
        double* wd = w.data();
        const std::uint8_t* sd = sup.data();
        for (size_t k = 0; k < static_cast<size_t>(rows) * cols; ++k)
          if (!sd[k]) wd[k] = 0.0;
      } else {
        const auto& sup = state.support(hp);
        double* wd = w.data();
        const std::uint8_t* sd = sup.data();
        for (size_t k = 0; k < static_cast<size_t>(rows) * cols; ++k)
          if (!sd[k]) wd[k] = 0.0;
      }
      const double scale = state.mask_scale(hp);
      const Vector f_host = scale * (w * g_host);
      const Vector relu = (f_host.array() > 0.0).cast<double>().matrix();
      const double norm = std::sqrt(kCSigma / rows);
      g_host = norm * f_host.cwiseMax(0.0);
      const Vector f_ps = scale * (w * g_ps);
      g_ps = norm * relu.cwiseProduct(f_ps);
      report.per_layer_mean_sq[static_cast<size_t>(hp - h)] +=
          g_ps.squaredNorm();
    }
  }
  for (size_t i = 1; i < report.per_layer_mean_sq.size(); ++i)
    report.per_layer_mean_sq[i] /= n_resample;
  report.lhs = report.per_layer_mean_sq.back();
  return report;
}

}  // namespace pntk
