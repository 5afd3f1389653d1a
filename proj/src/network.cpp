#include "pntk/network.hpp"

#include <cmath>
#include <span>

namespace pntk {

void NetworkConfig::validate() const {
  if (depth_L < 1) throw ConfigError("depth_L must be at least 1");
  if (input_dim < 1) throw ConfigError("input_dim must be at least 1");
  if (static_cast<int>(hidden_widths.size()) != depth_L)
    throw ConfigError("hidden_widths must have depth_L entries");
  for (int w : hidden_widths)
    if (w < 1) throw ConfigError("every hidden width must be at least 1");
  if (!(alpha > 0.0) || alpha > 1.0 || !std::isfinite(alpha))
    throw ConfigError("alpha must lie in (0, 1]");
}

int NetworkConfig::layer_rows(int h) const {
  if (h < 1 || h > depth_L + 1) throw ShapeError("layer index out of range");
  return h == depth_L + 1 ? 1 : hidden_widths[static_cast<size_t>(h - 1)];
}

int NetworkConfig::layer_cols(int h) const {
  if (h < 1 || h > depth_L + 1) throw ShapeError("layer index out of range");
  return h == 1 ? input_dim : hidden_widths[static_cast<size_t>(h - 2)];
}

InputPoint::InputPoint(Vector c) : coords(std::move(c)) {
  if (!coords.allFinite()) throw ShapeError("input coordinates must be finite");
}

const NetworkState::Layer& NetworkState::layer(int h) const {
  if (!layers_ || h < 1 || h > num_layers())
    throw ShapeError("layer index out of range");
  return (*layers_)[static_cast<size_t>(h - 1)];
}

double NetworkState::mask_scale(int h) const {
  if (!layer(h).sampled) return 1.0;
  return config_.rescale ? 1.0 / std::sqrt(config_.alpha) : 1.0;
}

RowMatrix NetworkState::mask_matrix(int h) const {
  return mask_scale(h) * support(h).cast<double>();
}

NetworkState build_network(const NetworkConfig& config, RandomStream stream) {
  config.validate();
  auto layers = std::make_shared<std::vector<NetworkState::Layer>>();
  layers->resize(static_cast<size_t>(config.depth_L) + 1);
  for (int h = 1; h <= config.depth_L + 1; ++h) {
    auto& layer = (*layers)[static_cast<size_t>(h - 1)];
    const int rows = config.layer_rows(h);
    const int cols = config.layer_cols(h);
    layer.weights.resize(rows, cols);
    CounterRng wrng(stream, static_cast<std::uint64_t>(h), StreamRole::kWeight);
    fill_standard_normal(
        wrng, std::span<double>(layer.weights.data(),
                                static_cast<size_t>(rows) * cols));
    layer.support.resize(rows, cols);
    layer.sampled = h >= 2 && (h <= config.depth_L || config.prune_output);
    if (layer.sampled) {
      CounterRng mrng(stream, static_cast<std::uint64_t>(h), StreamRole::kMask);
      fill_bernoulli(mrng,
                     std::span<std::uint8_t>(layer.support.data(),
                                             static_cast<size_t>(rows) * cols),
                     config.alpha);
      double* w = layer.weights.data();
      const std::uint8_t* s = layer.support.data();
      const size_t n = static_cast<size_t>(rows) * cols;
      for (size_t k = 0; k < n; ++k)
        if (!s[k]) w[k] = 0.0;
    } else {
      layer.support.setOnes();
    }
  }
  NetworkState state;
  state.layers_ = std::move(layers);
  state.config_ = config;
  state.stream_ = stream;
  return state;
}

NetworkState toggle_rescale(const NetworkState& state, bool on) {
  NetworkState out = state;
  out.config_.rescale = on;
  return out;
}

MaskSurvivalStats mask_survival_stats(const NetworkState& state) {
  MaskSurvivalStats stats;
  const auto& config = state.config();
  for (int h = 2; h <= state.num_layers(); ++h) {
    if (!state.layer_sampled(h)) continue;
    const auto& support = state.support(h);
    MaskSurvivalStats::LayerStats ls;
    ls.layer = h;
    const int rows = static_cast<int>(support.rows());
    const int cols = static_cast<int>(support.cols());
    const double expected = config.alpha * cols;
    ls.row_counts.reserve(static_cast<size_t>(rows));
    ls.row_rel_deviation.reserve(static_cast<size_t>(rows));
    for (int i = 0; i < rows; ++i) {
      std::int64_t count = 0;
      const std::uint8_t* row = support.data() + static_cast<size_t>(i) * cols;
      for (int j = 0; j < cols; ++j) count += row[j];
      ls.row_counts.push_back(count);
      double dev = (static_cast<double>(count) - expected) / expected;
      ls.row_rel_deviation.push_back(dev);
      stats.max_abs_rel_deviation =
          std::max(stats.max_abs_rel_deviation, std::abs(dev));
    }
    stats.layers.push_back(std::move(ls));
  }
  return stats;
}

}  // namespace pntk
