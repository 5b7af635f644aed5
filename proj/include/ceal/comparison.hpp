#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ceal/minibatch.hpp"
#include "ceal/objective.hpp"

namespace ceal {

struct MatchOptions {
  double tolerance = 0.10;  // relative regret mismatch accepted as "matched"
  int max_iterations = 60;
  double min_step_fraction = 1e-7;  // search floor, relative to the largest step
};

// Minibatch-SGD at one batch size, tuned so its mean final regret matches a
// CEAL reference.
struct MatchedComparison {
  std::uint64_t batch_size = 0;
  double ceal_regret = 0.0;
  double ceal_bits = 0.0;  // uplink + downlink, mean over seeds
  double minibatch_regret = 0.0;
  double minibatch_bits = 0.0;
  double minibatch_step = 0.0;
  int evaluations = 0;
  bool matched = false;  // |minibatch_regret / ceal_regret - 1| <= tolerance
  bool ceal_fewer_bits() const { return ceal_bits < minibatch_bits; }
};

struct MinibatchMean {
  double regret = 0.0;
  double bits = 0.0;
};

MinibatchMean minibatch_mean(const ProblemInstance& instance, MinibatchConfig config,
                             std::span<const std::uint64_t> seeds);

// Searches the step size in (0, 1/(5 beta)) on a log scale. Regret is large
// for tiny steps (the iterate barely moves), so a bracket with one side above
// and one below the target exists whenever the best minibatch regret is below
// it; bisection then closes in on a crossing. When even the best step leaves
// minibatch regret above the target the result is unmatched and reports that
// step.
MatchedComparison match_minibatch(const ProblemInstance& instance, double ceal_regret,
                                  double ceal_bits, std::uint64_t batch_size,
                                  std::span<const std::uint64_t> seeds,
                                  const MinibatchConfig& base = {},
                                  const MatchOptions& options = {});

}  // namespace ceal
