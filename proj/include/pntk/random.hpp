#pragma once

#include <cstdint>
#include <span>

namespace pntk {

/// Identifies one independent draw sequence. Identical (seed, stream_id)
/// pairs always reproduce the same draws; distinct stream_ids give
/// statistically independent streams. Monte-Carlo samples use the sample
/// index as stream_id so any single sample can be rebuilt in isolation.
struct RandomStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

/// Sub-stream purpose tag. Part of the stream key, so e.g. the weight and
/// mask draws of the same layer never overlap.
enum class StreamRole : std::uint64_t {
  kWeight = 0,
  kMask = 1,
  kInput = 2,
  kResampleWeight = 3,
  kResampleMask = 4,
  kGaussianProbe = 5,
};

/// Counter-based generator (splitmix64 walk from a mixed key). Cheap to
/// construct, so one instance per (stream, layer, role) is the norm.
class CounterRng {
 public:
  CounterRng(RandomStream stream, std::uint64_t layer, StreamRole role);

  std::uint64_t next_u64();
  /// Uniform on [0, 1).
  double next_uniform();
  /// Standard normal via the polar method (one cached spare).
  double next_normal();

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Fills `out` with i.i.d. standard normals, consuming from `rng`.
/// The produced sequence depends on the call granularity: fill a logical
/// block with a single call.
void fill_standard_normal(CounterRng& rng, std::span<double> out);

/// Fills `out` with i.i.d. Bernoulli(alpha) indicators (1 = keep).
void fill_bernoulli(CounterRng& rng, std::span<std::uint8_t> out, double alpha);

}  // namespace pntk
