#include "pntk/experiments.hpp"

#include <cmath>
#include <span>
#include <sstream>

#include "pntk/analytic_ntk.hpp"
#include "pntk/empirical_ntk.hpp"
#include "pntk/serialize.hpp"

namespace pntk {
namespace {

NetworkConfig sweep_config(int depth_L, int input_dim, int width, double alpha,
                           bool rescale, std::uint64_t seed) {
  NetworkConfig config;
  config.depth_L = depth_L;
  config.input_dim = input_dim;
  config.hidden_widths.assign(static_cast<size_t>(depth_L), width);
  config.alpha = alpha;
  config.rescale = rescale;
  config.seed = seed;
  return config;
}

std::pair<InputPoint, InputPoint> resolve_inputs(
    const std::optional<std::pair<InputPoint, InputPoint>>& explicit_inputs,
    std::uint64_t seed, int dim) {
  if (explicit_inputs) {
    if (explicit_inputs->first.dim() != explicit_inputs->second.dim())
      throw ShapeError("explicit input pair dimensions differ");
    return *explicit_inputs;
  }
  return seeded_unit_pair(seed, dim);
}

std::string digest_of_spec(const std::string& description) {
  return sha256_hex(description);
}

}  // namespace

std::pair<InputPoint, InputPoint> seeded_unit_pair(std::uint64_t seed, int dim) {
  if (dim < 1) throw ConfigError("input dimension must be at least 1");
  CounterRng rng({seed, 0}, 0, StreamRole::kInput);
  Vector a(dim), b(dim);
  fill_standard_normal(rng, std::span<double>(a.data(), a.size()));
  fill_standard_normal(rng, std::span<double>(b.data(), b.size()));
  a.normalize();
  b.normalize();
  return {InputPoint{a}, InputPoint{b}};
}

void WidthSweepSpec::validate() const {
  if (widths.empty()) throw ConfigError("width sweep needs at least one width");
  int prev = 0;
  for (int w : widths) {
    if (w < 1) throw ConfigError("widths must be positive");
    if (w <= prev) throw ConfigError("widths must be strictly increasing");
    prev = w;
  }
  if (depth_L < 1) throw ConfigError("depth_L must be at least 1");
  if (!(alpha > 0.0) || alpha > 1.0) throw ConfigError("alpha must lie in (0, 1]");
  if (n_samples < 1) throw ConfigError("n_samples must be at least 1");
  if (input_dim < 1) throw ConfigError("input dimension must be at least 1");
}

void AlphaSweepSpec::validate() const {
  if (alphas.empty()) throw ConfigError("alpha sweep needs at least one alpha");
  for (double a : alphas)
    if (!(a > 0.0) || a > 1.0) throw ConfigError("alphas must lie in (0, 1]");
  if (depth_L < 1) throw ConfigError("depth_L must be at least 1");
  if (base_width < 1) throw ConfigError("base width must be positive");
  if (n_samples < 1) throw ConfigError("n_samples must be at least 1");
  if (input_dim < 1) throw ConfigError("input dimension must be at least 1");
}

WidthSweepOutput run_width_sweep(const WidthSweepSpec& spec) {
  spec.validate();
  const auto [x, x2] = resolve_inputs(spec.explicit_inputs, spec.seed,
                                      spec.input_dim);
  const AnalyticKernel kernel = kernel_recursion(x, x2, spec.depth_L);
  const double limit_pruned = pruned_limit(kernel, spec.alpha, spec.rescale);
  const double limit_control = kernel.theta_inf;

  std::ostringstream desc;
  desc << "width-sweep;L=" << spec.depth_L << ";alpha=" << spec.alpha
       << ";rescale=" << spec.rescale << ";n=" << spec.n_samples
       << ";seed=" << spec.seed << ";dim=" << spec.input_dim << ";widths=";
  for (int w : spec.widths) desc << w << ",";

  WidthSweepOutput out;
  for (SweepResult* res : {&out.pruned, &out.control}) {
    res->seed = spec.seed;
    res->x = x;
    res->x2 = x2;
    res->config_digest = digest_of_spec(desc.str());
  }
  for (int w : spec.widths) {
    const NetworkConfig pruned = sweep_config(spec.depth_L, spec.input_dim, w,
                                              spec.alpha, spec.rescale, spec.seed);
    const NtkAggregate agg =
        ntk_monte_carlo(pruned, x, x2, spec.n_samples, limit_pruned, spec.threads);
    out.pruned.rows.push_back({static_cast<double>(w), w, agg.mean,
                               agg.sample_std, agg.mad_vs_limit, limit_pruned,
                               spec.n_samples});
    if (spec.include_control) {
      const NetworkConfig control = sweep_config(spec.depth_L, spec.input_dim, w,
                                                 1.0, spec.rescale, spec.seed);
      const NtkAggregate cagg = ntk_monte_carlo(control, x, x2, spec.n_samples,
                                                limit_control, spec.threads);
      out.control.rows.push_back({static_cast<double>(w), w, cagg.mean,
                                  cagg.sample_std, cagg.mad_vs_limit,
                                  limit_control, spec.n_samples});
    }
  }
  return out;
}

SweepResult run_alpha_sweep(const AlphaSweepSpec& spec) {
  spec.validate();
  const auto [x, x2] = resolve_inputs(spec.explicit_inputs, spec.seed,
                                      spec.input_dim);
  const AnalyticKernel kernel = kernel_recursion(x, x2, spec.depth_L);

  std::ostringstream desc;
  desc << "alpha-sweep;L=" << spec.depth_L << ";base=" << spec.base_width
       << ";scaling="
       << (spec.scaling == AlphaSweepSpec::Scaling::kLinear ? "linear"
                                                            : "quadratic")
       << ";rescale=" << spec.rescale << ";n=" << spec.n_samples
       << ";seed=" << spec.seed << ";dim=" << spec.input_dim << ";alphas=";
  for (double a : spec.alphas) desc << a << ",";

  SweepResult result;
  result.seed = spec.seed;
  result.x = x;
  result.x2 = x2;
  result.config_digest = digest_of_spec(desc.str());

  for (double alpha : spec.alphas) {
    const double factor = spec.scaling == AlphaSweepSpec::Scaling::kLinear
                              ? 1.0 / alpha
                              : 1.0 / (alpha * alpha);
    const long width = std::lround(spec.base_width * factor);
    if (width < 1) throw ConfigError("alpha sweep produced a width below 1");
    if (width > spec.max_width) {
      std::ostringstream msg;
      msg << "alpha " << alpha << " requires width " << width
          << " beyond the configured budget " << spec.max_width;
      throw ResourceError(msg.str());
    }
    const double limit = pruned_limit(kernel, alpha, spec.rescale);
    const NetworkConfig config =
        sweep_config(spec.depth_L, spec.input_dim, static_cast<int>(width),
                     alpha, spec.rescale, spec.seed);
    const NtkAggregate agg =
        ntk_monte_carlo(config, x, x2, spec.n_samples, limit, spec.threads);
    result.rows.push_back({alpha, static_cast<int>(width), agg.mean,
                           agg.sample_std, agg.mad_vs_limit, limit,
                           spec.n_samples});
  }
  return result;
}

}  // namespace pntk
