#pragma once

#include <vector>

#include "pntk/network.hpp"

namespace pntk {

/// Full record of one forward evaluation. Sequences are indexed directly by
/// layer h (slot 0 of preacts/relu_diag is unused):
///   preacts f^(h), h = 1..L+1 (f^(L+1) has length 1)
///   acts    g^(h), h = 0..L   (g^(0) = x)
///   relu_diag D^(h) in {0,1}^{d_h}, h = 1..L, D_i = 1(f_i > 0)
struct ForwardTrace {
  std::vector<Vector> preacts;
  std::vector<Vector> acts;
  std::vector<Vector> relu_diag;

  const Vector& f(int h) const { return preacts[static_cast<size_t>(h)]; }
  const Vector& g(int h) const { return acts[static_cast<size_t>(h)]; }
  const Vector& relu(int h) const { return relu_diag[static_cast<size_t>(h)]; }
  double output() const { return preacts.back()(0); }
  int depth() const { return static_cast<int>(acts.size()) - 1; }
};

/// Backward vectors b^(h), h = 1..L+1, with b^(L+1) = 1.
struct BackwardTrace {
  std::vector<Vector> back;

  const Vector& b(int h) const { return back[static_cast<size_t>(h)]; }
  int depth() const { return static_cast<int>(back.size()) - 2; }
};

/// f^(h) = (W^(h) .* m^(h)) g^(h-1),  g^(h) = sqrt(c_sigma/d_h) relu(f^(h)).
ForwardTrace forward_pass(const NetworkState& state, const InputPoint& x);

/// b^(h) = sqrt(c_sigma/d_h) D^(h) (W^(h+1) .* m^(h+1))^T b^(h+1),
/// from h = L down to 1. `trace` must come from forward_pass on `state`.
BackwardTrace backward_pass(const NetworkState& state, const ForwardTrace& trace);

/// d f / d W^(h) = (b^(h) g^(h-1)^T) .* m^(h); pruned entries are exactly 0.
RowMatrix layer_gradient(const NetworkState& state, const ForwardTrace& ftrace,
                         const BackwardTrace& btrace, int h);

}  // namespace pntk
