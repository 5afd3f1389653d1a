#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pntk/network.hpp"

namespace pntk {

/// Two pseudo-random unit vectors in R^dim derived from the seed.
std::pair<InputPoint, InputPoint> seeded_unit_pair(std::uint64_t seed, int dim);

/// Width-convergence protocol: fixed input pair, widths swept with a fresh
/// Monte-Carlo batch per width, deviation measured against the analytic
/// limit appropriate to the rescale switch.
struct WidthSweepSpec {
  std::vector<int> widths = {32, 64, 128, 256, 512, 1024, 2048, 4096, 8192};
  int depth_L = 3;
  double alpha = 0.5;
  bool rescale = true;
  int n_samples = 64;
  std::uint64_t seed = 0;
  int input_dim = 16;
  std::optional<std::pair<InputPoint, InputPoint>> explicit_inputs;
  bool include_control = true;  ///< also run the unpruned alpha = 1 baseline
  int threads = 0;

  void validate() const;
};

/// Pruning-probability protocol: width grows as round(d_ref/alpha) (linear)
/// or round(d_ref/alpha^2) (quadratic) while alpha falls.
struct AlphaSweepSpec {
  enum class Scaling { kLinear, kQuadratic };

  std::vector<double> alphas = {1.0, 0.9, 0.8, 0.7, 0.6, 0.5};
  int base_width = 1024;  ///< width of the alpha = 1 reference model
  Scaling scaling = Scaling::kLinear;
  int n_samples = 100;
  int depth_L = 3;
  bool rescale = true;
  std::uint64_t seed = 0;
  int input_dim = 16;
  std::optional<std::pair<InputPoint, InputPoint>> explicit_inputs;
  int max_width = 20000;  ///< memory budget; exceeding widths are an error
  int threads = 0;

  void validate() const;
};

struct SweepRow {
  double sweep_var = 0.0;  ///< width or alpha
  int width = 0;
  double mean = 0.0;
  double std_dev = 0.0;
  double mad = 0.0;
  double limit = 0.0;
  int n_samples = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::uint64_t seed = 0;
  InputPoint x;
  InputPoint x2;
  std::string config_digest;
};

struct WidthSweepOutput {
  SweepResult pruned;
  SweepResult control;  ///< empty rows when include_control is false
};

WidthSweepOutput run_width_sweep(const WidthSweepSpec& spec);
SweepResult run_alpha_sweep(const AlphaSweepSpec& spec);

}  // namespace pntk
