#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "pntk/network.hpp"
#include "pntk/propagation.hpp"

namespace pntk {

/// One realized kernel value with its layer decomposition.
/// total equals the sum of per_layer (summed in layer order).
struct NtkEstimate {
  double total = 0.0;
  std::vector<double> per_layer;  ///< contribution of layer h at index h-1
  std::int64_t sample_id = -1;
  int width_used = 0;
  double alpha = 1.0;
};

/// Monte-Carlo summary over independent realizations.
struct NtkAggregate {
  double mean = 0.0;
  double sample_std = 0.0;    ///< 0 by convention when n_samples == 1
  double mad_vs_limit = 0.0;  ///< NaN when no reference was supplied
  int n_samples = 0;
  std::vector<double> per_layer_mean;
};

/// Theta(x,x') for one realization, layer by layer:
///   sum_i b_i^(h)(x) b_i^(h)(x') <g^(h-1)(x) .* m_i^(h), g^(h-1)(x') .* m_i^(h)>
/// No gradient matrices are materialized; the result equals the Frobenius
/// inner products of layer_gradient at both inputs.
NtkEstimate ntk_pair(const NetworkState& state, const InputPoint& x,
                     const InputPoint& x2);

/// Shared inner kernel: layer-h term from already-computed traces.
double ntk_layer_term(const NetworkState& state, int h, const ForwardTrace& fx,
                      const BackwardTrace& bx, const ForwardTrace& fx2,
                      const BackwardTrace& bx2);

/// Draws n_samples networks (stream_id = sample index), evaluates ntk_pair
/// on each and reduces in fixed sample order, so the result is independent
/// of thread schedule. reference = NaN disables the MAD column.
NtkAggregate ntk_monte_carlo(const NetworkConfig& config, const InputPoint& x,
                             const InputPoint& x2, int n_samples,
                             double reference, int threads = 0);

/// Pairwise kernel matrix of one realization over a dataset; a genuine Gram
/// matrix, hence symmetric PSD up to rounding.
Eigen::MatrixXd ntk_gram(const NetworkState& state,
                         std::span<const InputPoint> inputs);

}  // namespace pntk
