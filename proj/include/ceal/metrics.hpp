#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ceal/trace.hpp"

namespace ceal {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

// Ordinary least squares y ~ a x + b. R^2 is 1 when y is constant and
// perfectly fit.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

// Scalar results of one run; what sweeps aggregate.
struct RunSummary {
  std::string algo;
  std::size_t clients = 0;
  std::uint64_t horizon = 0;
  std::size_t dim = 0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t batch_size = 0;  // minibatch only
  double step_size = 0.0;
  double final_regret = 0.0;
  std::uint64_t uplink_bits = 0;
  std::uint64_t downlink_bits = 0;
  std::uint64_t num_rounds = 0;
  ProtocolEvents events;
  bool operator==(const RunSummary&) const = default;
};

RunSummary summarize(const RunTrace& trace, double sigma, double step_size,
                     std::uint64_t batch_size = 0);

enum class ScalingModel {
  log_mt,    // x = ln(M T)
  mt,        // x = M T
  t,         // x = T (mis-specified linear-in-horizon model)
  d_log_mt,  // x = d ln(M T)
};

std::string to_string(ScalingModel model);

struct PointStats {
  std::size_t clients = 0;
  std::uint64_t horizon = 0;
  std::size_t dim = 0;
  std::size_t runs = 0;
  double x = 0.0;
  double mean = 0.0;
  double lower = 0.0;  // delta/2 empirical quantile
  double upper = 0.0;  // 1 - delta/2 empirical quantile
  double ratio = 0.0;  // mean / x
};

struct ScalingReport {
  std::string quantity;
  ScalingModel model = ScalingModel::log_mt;
  LinearFit fit;
  std::vector<PointStats> points;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  // max over points of mean / (ln(MT) ln(M/delta)).
  double max_confidence_ratio = 0.0;

  double ratio_spread() const { return min_ratio > 0.0 ? max_ratio / min_ratio : 0.0; }
};

struct ScalingOptions {
  double delta = 0.05;
  std::size_t min_points = 3;
  std::size_t min_seeds = 10;
};

using SummaryValue = std::function<double(const RunSummary&)>;

// Groups runs by (M, T, d), averages `value` per group and fits the group
// means against the model's x. Throws InputError with fewer than
// options.min_points groups or options.min_seeds runs in any group.
ScalingReport scaling_fit(std::span<const RunSummary> runs, const std::string& quantity,
                          const SummaryValue& value, ScalingModel model,
                          const ScalingOptions& options = {});

ScalingReport regret_scaling_fit(std::span<const RunSummary> runs, ScalingModel model,
                                 const ScalingOptions& options = {});
ScalingReport rounds_scaling_fit(std::span<const RunSummary> runs,
                                 const ScalingOptions& options = {});

struct BitsScalingReport {
  ScalingReport uplink;
  ScalingReport downlink;
};

BitsScalingReport bits_scaling_fit(std::span<const RunSummary> runs, ScalingModel model,
                                   const ScalingOptions& options = {});

double empirical_quantile(std::vector<double> values, double q);

}  // namespace ceal
