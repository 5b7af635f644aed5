#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ceal/objective.hpp"
#include "ceal/rng.hpp"
#include "ceal/schedule.hpp"
#include "ceal/vector_ops.hpp"

namespace ceal {

struct NormEstOptions {
  // Clients send Q(mean, gamma_j, G_j + B_j) instead of the raw mean.
  bool quantized = true;
  // Per-client sample budget; the routine stops before a sub-epoch that
  // would exceed it.
  std::uint64_t sample_budget = std::numeric_limits<std::uint64_t>::max();
};

struct NormEstState {
  int j = 1;
  std::optional<Vector> server_estimate;
  bool terminated = false;
};

struct NormEstResult {
  Vector estimate;  // empty if the budget ran out before the first round
  int j_final = 0;
  std::uint64_t samples_used = 0;  // per client
  bool terminated = false;
  bool budget_exhausted = false;
  std::uint64_t radius_clips = 0;
};

// Estimates a fixed vector from noisy samples target + xi spread over M
// clients, stopping at the first sub-epoch j with tau_j <= ||estimate|| / 4.
// Each sub-epoch draws fresh samples; means are never pooled across j.
class NormEstimator {
 public:
  NormEstimator(std::span<const double> target, const NoiseModel& noise, const Schedule& schedule,
                const NormEstOptions& options, std::uint64_t seed);

  // One sub-epoch. Returns false (and changes nothing) when the routine has
  // already terminated or the next sub-epoch does not fit in the budget.
  bool step();

  const NormEstState& state() const { return state_; }
  NormEstResult result() const;

 private:
  Vector target_;
  NoiseModel noise_;
  const Schedule& schedule_;
  NormEstOptions options_;
  std::vector<Rng> client_rngs_;
  NormEstState state_;
  std::uint64_t samples_used_ = 0;
  std::uint64_t radius_clips_ = 0;
  bool budget_exhausted_ = false;
};

NormEstResult run_normest(std::span<const double> target, const NoiseModel& noise,
                          const Schedule& schedule, const NormEstOptions& options,
                          std::uint64_t seed);

}  // namespace ceal
