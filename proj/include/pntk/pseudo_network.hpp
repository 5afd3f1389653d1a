#pragma once

#include <vector>

#include "pntk/network.hpp"
#include "pntk/propagation.hpp"

namespace pntk {

/// Forward record of the pseudo-network seeded at layer h by column j of
/// m^(h):
///   g^(h,j,h)  = sqrt(c/d_h) D^(h) diag_i(m_ij sqrt(alpha) /
///                ||g^(h-1) .* m_i^(h)||^2) f^(h)
///   f^(h,j,h') = (W^(h') .* m^(h')) g^(h,j,h'-1)
///   g^(h,j,h') = sqrt(c/d_h') D^(h') f^(h,j,h')
/// Downstream layers reuse the host network's weights, masks and ReLU
/// patterns; the output is the scalar f^(h,j,L+1).
struct PseudoTrace {
  int source_layer = 0;  ///< h, in 2..L
  int column = 0;        ///< j, 0-based column of m^(h)
  std::vector<Vector> g_seq;  ///< g^(h,j,h') for h' = h..L
  double output = 0.0;

  const Vector& g(int hp) const {
    return g_seq[static_cast<size_t>(hp - source_layer)];
  }
};

/// ||g^(h-1) .* m_i^(h)||^2 for every row i; reusable across columns j.
Vector pseudo_row_norms_sq(const NetworkState& state, const ForwardTrace& host,
                           int h);

/// Requires rescaled masks (so m_ij sqrt(alpha) is exactly 0/1). A surviving
/// row whose masked activation norm vanishes throws DegenerateMaskError.
PseudoTrace pseudo_forward(const NetworkState& state, const ForwardTrace& host,
                           int h, int j);
PseudoTrace pseudo_forward(const NetworkState& state, const ForwardTrace& host,
                           int h, int j, const Vector& row_norms_sq);

/// Empirical comparison of (w^T x)^2 1(w^T y > 0) against
/// (w^T x)^2 1(w^T x > 0) over n_samples standard Gaussian draws of w.
/// Both means approach ||x||^2 / 2; the two statistics agree samplewise when
/// y = x.
struct IndicatorReport {
  double mean_lhs = 0.0;
  double mean_rhs = 0.0;
  double ks_distance = 0.0;
  int n_samples = 0;
};

IndicatorReport check_indicator_identity(const Vector& x, const Vector& y,
                                         int n_samples, RandomStream stream);

/// Resamples layers h+1..L (weights, and masks unless resample_masks is
/// false) keeping g^(h,j,h) fixed, and compares the mean downstream squared
/// norm against its conditional expectation ||g^(h,j,h)||^2.
struct NormPreservationReport {
  double lhs = 0.0;  ///< mean ||g^(h,j,L)||^2 over resamples
  double rhs = 0.0;  ///< ||g^(h,j,h)||^2
  /// mean ||g^(h,j,h')||^2 for h' = h..L (index h' - h).
  std::vector<double> per_layer_mean_sq;
};

NormPreservationReport check_norm_preservation(const NetworkState& state,
                                               const ForwardTrace& host, int h,
                                               int j, int n_resample,
                                               RandomStream stream,
                                               bool resample_masks = true);

}  // namespace pntk
