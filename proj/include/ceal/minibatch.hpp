#pragma once

#include <cstdint>
#include <optional>

#include "ceal/objective.hpp"
#include "ceal/trace.hpp"

namespace ceal {

struct MinibatchConfig {
  std::uint64_t batch_size = 100;
  std::optional<double> step_size;  // default 1 / (10 beta)
  std::uint64_t float_bits = 64;    // accounting width per coordinate
  std::uint64_t seed = 1;
  StartSpec start;
};

// Fixed-batch Minibatch-SGD with full-precision messages. Each round every
// client averages batch_size noisy gradients at the shared iterate and sends
// d * float_bits bits up; the server broadcasts d * float_bits bits back and
// everyone steps x <- x - eta * average. A final partial batch costs regret
// but sends nothing. Output uses the same trace schema as run_ceal.
RunTrace run_minibatch(const ProblemInstance& instance, const MinibatchConfig& config);

}  // namespace ceal
