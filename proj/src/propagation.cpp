#include "pntk/propagation.hpp"

#include <cmath>

namespace pntk {
namespace {

void check_trace_matches(const NetworkState& state, const ForwardTrace& trace) {
  const auto& config = state.config();
  if (trace.depth() != config.depth_L ||
      trace.g(0).size() != config.input_dim)
    throw ShapeError("trace does not match network state");
  for (int h = 1; h <= config.depth_L; ++h)
    if (trace.f(h).size() != config.layer_rows(h))
      throw ShapeError("trace does not match network state");
}

}  // namespace

ForwardTrace forward_pass(const NetworkState& state, const InputPoint& x) {
  const auto& config = state.config();
  if (x.dim() != config.input_dim)
    throw ShapeError("input has wrong dimension");
  const int L = config.depth_L;
  ForwardTrace trace;
  trace.preacts.resize(static_cast<size_t>(L) + 2);
  trace.acts.resize(static_cast<size_t>(L) + 1);
  trace.relu_diag.resize(static_cast<size_t>(L) + 1);
  trace.acts[0] = x.coords;
  for (int h = 1; h <= L; ++h) {
    const Vector f = state.mask_scale(h) *
                     (state.weights(h) * trace.acts[static_cast<size_t>(h - 1)]);
    const double norm = std::sqrt(kCSigma / config.layer_rows(h));
    trace.relu_diag[static_cast<size_t>(h)] =
        (f.array() > 0.0).cast<double>().matrix();
    trace.acts[static_cast<size_t>(h)] = norm * f.cwiseMax(0.0);
    trace.preacts[static_cast<size_t>(h)] = f;
  }
  trace.preacts[static_cast<size_t>(L + 1)] =
      state.mask_scale(L + 1) *
      (state.weights(L + 1) * trace.acts[static_cast<size_t>(L)]);
  return trace;
}

BackwardTrace backward_pass(const NetworkState& state,
                            const ForwardTrace& trace) {
  check_trace_matches(state, trace);
  const auto& config = state.config();
  const int L = config.depth_L;
  BackwardTrace back;
  back.back.resize(static_cast<size_t>(L) + 2);
  back.back[static_cast<size_t>(L + 1)] = Vector::Ones(1);
  for (int h = L; h >= 1; --h) {
    const Vector v = state.mask_scale(h + 1) *
                     (state.weights(h + 1).transpose() *
                      back.back[static_cast<size_t>(h + 1)]);
    const double norm = std::sqrt(kCSigma / config.layer_rows(h));
    back.back[static_cast<size_t>(h)] =
        norm * trace.relu(h).cwiseProduct(v);
  }
  return back;
}

RowMatrix layer_gradient(const NetworkState& state, const ForwardTrace& ftrace,
                         const BackwardTrace& btrace, int h) {
  const auto& config = state.config();
  if (h < 1 || h > config.depth_L + 1)
    throw ShapeError("gradient layer index out of range");
  check_trace_matches(state, ftrace);
  if (btrace.depth() != config.depth_L)
    throw ShapeError("backward trace does not match network state");
  const Vector& b = btrace.b(h);
  const Vector& g = ftrace.g(h - 1);
  RowMatrix grad = state.mask_scale(h) * (b * g.transpose());
  return grad.cwiseProduct(state.support(h).cast<double>());
}

}  // namespace pntk
