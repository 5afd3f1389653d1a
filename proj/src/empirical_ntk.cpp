#include "pntk/empirical_ntk.hpp"

#include <cmath>
#include <limits>

#include "pntk/parallel.hpp"

namespace pntk {
namespace {

NtkEstimate pair_from_traces(const NetworkState& state, const ForwardTrace& fx,
                             const BackwardTrace& bx, const ForwardTrace& fx2,
                             const BackwardTrace& bx2) {
  const auto& config = state.config();
  NtkEstimate est;
  est.per_layer.resize(static_cast<size_t>(config.depth_L) + 1);
  est.width_used = config.hidden_widths.front();
  est.alpha = config.alpha;
  est.sample_id = static_cast<std::int64_t>(state.stream().stream_id);
  double total = 0.0;
  for (int h = 1; h <= config.depth_L + 1; ++h) {
    const double term = ntk_layer_term(state, h, fx, bx, fx2, bx2);
    est.per_layer[static_cast<size_t>(h - 1)] = term;
    total += term;
  }
  est.total = total;
  return est;
}

}  // namespace

double ntk_layer_term(const NetworkState& state, int h, const ForwardTrace& fx,
                      const BackwardTrace& bx, const ForwardTrace& fx2,
                      const BackwardTrace& bx2) {
  const Vector& bh = bx.b(h);
  const Vector& bh2 = bx2.b(h);
  const Vector& g = fx.g(h - 1);
  const Vector& g2 = fx2.g(h - 1);
  if (!state.layer_sampled(h)) {
    // Unpruned layer: every diagonal entry of G^(h-1) equals <g, g2>.
    return g.dot(g2) * bh.dot(bh2);
  }
  const double s2 = state.mask_scale(h) * state.mask_scale(h);
  const auto& support = state.support(h);
  const int rows = static_cast<int>(support.rows());
  const int cols = static_cast<int>(support.cols());
  const Vector prod = g.cwiseProduct(g2);
  const double* p = prod.data();
  double term = 0.0;
  for (int i = 0; i < rows; ++i) {
    const std::uint8_t* row = support.data() + static_cast<size_t>(i) * cols;
    double acc = 0.0;
    for (int j = 0; j < cols; ++j) acc += row[j] ? p[j] : 0.0;
    term += bh(i) * bh2(i) * acc;
  }
  return s2 * term;
}

NtkEstimate ntk_pair(const NetworkState& state, const InputPoint& x,
                     const InputPoint& x2) {
  const ForwardTrace fx = forward_pass(state, x);
  const BackwardTrace bx = backward_pass(state, fx);
  if (x.coords == x2.coords) return pair_from_traces(state, fx, bx, fx, bx);
  const ForwardTrace fx2 = forward_pass(state, x2);
  const BackwardTrace bx2 = backward_pass(state, fx2);
  return pair_from_traces(state, fx, bx, fx2, bx2);
}

NtkAggregate ntk_monte_carlo(const NetworkConfig& config, const InputPoint& x,
                             const InputPoint& x2, int n_samples,
                             double reference, int threads) {
  if (n_samples < 1) throw ConfigError("n_samples must be at least 1");
  config.validate();
  std::vector<NtkEstimate> estimates(static_cast<size_t>(n_samples));
  parallel_for(n_samples, threads, [&](int k) {
    const NetworkState state =
        build_network(config, {config.seed, static_cast<std::uint64_t>(k)});
    estimates[static_cast<size_t>(k)] = ntk_pair(state, x, x2);
  });

  NtkAggregate agg;
  agg.n_samples = n_samples;
  agg.per_layer_mean.assign(static_cast<size_t>(config.depth_L) + 1, 0.0);
  double sum = 0.0;
  for (const auto& est : estimates) {
    sum += est.total;
    for (size_t i = 0; i < agg.per_layer_mean.size(); ++i)
      agg.per_layer_mean[i] += est.per_layer[i];
  }
  agg.mean = sum / n_samples;
  for (auto& v : agg.per_layer_mean) v /= n_samples;
  if (n_samples > 1) {
    double ss = 0.0;
    for (const auto& est : estimates) {
      const double d = est.total - agg.mean;
      ss += d * d;
    }
    agg.sample_std = std::sqrt(ss / (n_samples - 1));
  }
  if (std::isnan(reference)) {
    agg.mad_vs_limit = std::numeric_limits<double>::quiet_NaN();
  } else {
    double mad = 0.0;
    for (const auto& est : estimates) mad += std::abs(est.total - reference);
    agg.mad_vs_limit = mad / n_samples;
  }
  return agg;
}

Eigen::MatrixXd ntk_gram(const NetworkState& state,
                         std::span<const InputPoint> inputs) {
  const Eigen::Index n = static_cast<Eigen::Index>(inputs.size());
  std::vector<ForwardTrace> ftraces(inputs.size());
  std::vector<BackwardTrace> btraces(inputs.size());
  for (size_t i = 0; i < inputs.size(); ++i) {
    ftraces[i] = forward_pass(state, inputs[i]);
    btraces[i] = backward_pass(state, ftraces[i]);
  }
  Eigen::MatrixXd gram(n, n);
  const int layers = state.num_layers();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      double total = 0.0;
      for (int h = 1; h <= layers; ++h)
        total += ntk_layer_term(state, h, ftraces[static_cast<size_t>(i)],
                                btraces[static_cast<size_t>(i)],
                                ftraces[static_cast<size_t>(j)],
                                btraces[static_cast<size_t>(j)]);
      gram(i, j) = total;
      gram(j, i) = total;
    }
  return gram;
}

}  // namespace pntk
