#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <vector>

#include "pntk/errors.hpp"
#include "pntk/random.hpp"

namespace pntk {

/// ReLU variance normalization: 1 / E[relu(z)^2] for z ~ N(0,1).
inline constexpr double kCSigma = 2.0;

using Vector = Eigen::VectorXd;
/// Layer matrices are row-major: forward products and per-row mask scans
/// walk contiguous memory.
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using SupportMatrix =
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Architecture plus pruning policy. The output dimension is fixed to 1.
struct NetworkConfig {
  int depth_L = 1;                 ///< number of hidden layers, >= 1
  int input_dim = 1;               ///< d0
  std::vector<int> hidden_widths;  ///< d_1 .. d_L
  double alpha = 1.0;              ///< keep-probability, in (0, 1]
  bool rescale = false;            ///< surviving mask entries 1/sqrt(alpha)
  std::uint64_t seed = 0;
  /// The output layer is pruned like the hidden ones; switch off only for
  /// ablations. The input layer is never pruned.
  bool prune_output = true;

  /// Throws ConfigError on any violated invariant.
  void validate() const;

  /// Rows / cols of W^(h), h = 1..L+1 (d_{L+1} = 1).
  int layer_rows(int h) const;
  int layer_cols(int h) const;
};

struct InputPoint {
  Vector coords;

  InputPoint() = default;
  explicit InputPoint(Vector c);

  int dim() const { return static_cast<int>(coords.size()); }
  double norm() const { return coords.norm(); }
  /// The convergence theorems assume inputs in the unit ball; callers that
  /// target them check here rather than at construction.
  bool within_unit_ball(double tol = 0.0) const { return norm() <= 1.0 + tol; }
};

/// One realized (theta, m) pair. Weight values at pruned positions are
/// identically zero; the support matrix records which entries survived, and
/// the mask value of a surviving entry is mask_scale(h). Immutable after
/// construction and cheap to copy (layers are shared), so instances may be
/// read concurrently.
class NetworkState {
 public:
  struct Layer {
    RowMatrix weights;      // masked realized weights (zeros where pruned)
    SupportMatrix support;  // 1 = kept
    bool sampled = false;   // false for unpruned layers (support all ones)
  };

  NetworkState() = default;

  const NetworkConfig& config() const { return config_; }
  RandomStream stream() const { return stream_; }
  int num_layers() const { return config_.depth_L + 1; }

  const RowMatrix& weights(int h) const { return layer(h).weights; }
  const SupportMatrix& support(int h) const { return layer(h).support; }
  bool layer_sampled(int h) const { return layer(h).sampled; }

  /// Value carried by surviving mask entries of layer h (1 for the input
  /// layer, s = 1 or 1/sqrt(alpha) for pruned layers).
  double mask_scale(int h) const;

  /// Dense mask matrix with entries in {0, s}; intended for small networks
  /// and tests.
  RowMatrix mask_matrix(int h) const;

  friend NetworkState build_network(const NetworkConfig&, RandomStream);
  friend NetworkState toggle_rescale(const NetworkState&, bool);

 private:
  const Layer& layer(int h) const;

  std::shared_ptr<const std::vector<Layer>> layers_;
  NetworkConfig config_;
  RandomStream stream_;
};

/// Draws weights i.i.d. N(0,1) and, for layers h >= 2, Bernoulli(alpha)
/// masks. Pure function of (config, stream).
NetworkState build_network(const NetworkConfig& config, RandomStream stream);

/// Same support, surviving mask entries set to 1 or 1/sqrt(alpha); weights
/// untouched. Toggling twice restores the original state bit for bit.
NetworkState toggle_rescale(const NetworkState& state, bool on);

/// Per-row survival counts for every Bernoulli-sampled layer.
struct MaskSurvivalStats {
  struct LayerStats {
    int layer = 0;
    std::vector<std::int64_t> row_counts;
    /// (count - alpha d) / (alpha d), signed.
    std::vector<double> row_rel_deviation;
  };
  std::vector<LayerStats> layers;
  double max_abs_rel_deviation = 0.0;
};

MaskSurvivalStats mask_survival_stats(const NetworkState& state);

}  // namespace pntk
