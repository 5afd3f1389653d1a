#include "pntk/random.hpp"

#include <Eigen/Core>
#include <array>
#include <cmath>

namespace pntk {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t combine(std::uint64_t acc, std::uint64_t value) {
  return mix64(acc ^ (value + kGolden + (acc << 6) + (acc >> 2)));
}

inline double to_unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

CounterRng::CounterRng(RandomStream stream, std::uint64_t layer, StreamRole role) {
  std::uint64_t key = mix64(stream.seed + kGolden);
  key = combine(key, stream.stream_id);
  key = combine(key, (layer << 3) ^ static_cast<std::uint64_t>(role));
  state_ = key;
}

std::uint64_t CounterRng::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double CounterRng::next_uniform() { return to_unit_interval(next_u64()); }

double CounterRng::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  for (;;) {
    double u = 2.0 * next_uniform() - 1.0;
    double v = 2.0 * next_uniform() - 1.0;
    double r2 = u * u + v * v;
    if (r2 >= 1.0 || r2 == 0.0) continue;
    double s = std::sqrt(-2.0 * std::log(r2) / r2);
    spare_ = v * s;
    has_spare_ = true;
    return u * s;
  }
}

void fill_standard_normal(CounterRng& rng, std::span<double> out) {
  // Batched polar method: candidates are compacted so the log/sqrt runs on
  // dense arrays Eigen can vectorize.
  constexpr int kBlock = 2048;
  std::array<double, kBlock> u, v, r2;
  size_t written = 0;
  const size_t n = out.size();
  while (written < n) {
    int accepted = 0;
    for (int t = 0; t < kBlock; ++t) {
      double a = 2.0 * rng.next_uniform() - 1.0;
      double b = 2.0 * rng.next_uniform() - 1.0;
      double r = a * a + b * b;
      if (r < 1.0 && r > 0.0) {
        u[accepted] = a;
        v[accepted] = b;
        r2[accepted] = r;
        ++accepted;
      }
    }
    Eigen::Map<Eigen::ArrayXd> r2a(r2.data(), accepted);
    Eigen::Map<Eigen::ArrayXd> ua(u.data(), accepted);
    Eigen::Map<Eigen::ArrayXd> va(v.data(), accepted);
    Eigen::ArrayXd s = (-2.0 * r2a.log() / r2a).sqrt();
    ua *= s;
    va *= s;
    for (int t = 0; t < accepted && written < n; ++t) {
      out[written++] = u[t];
      if (written < n) out[written++] = v[t];
    }
  }
}

void fill_bernoulli(CounterRng& rng, std::span<std::uint8_t> out, double alpha) {
  if (alpha >= 1.0) {
    for (auto& b : out) b = 1;
    return;
  }
  for (auto& b : out) b = rng.next_uniform() < alpha ? 1 : 0;
}

}  // namespace pntk
