#include "ceal/minibatch.hpp"

#include <algorithm>

#include "ceal/errors.hpp"
#include "ceal/protocol.hpp"

namespace ceal {

RunTrace run_minibatch(const ProblemInstance& instance, const MinibatchConfig& config) {
  instance.validate();
  if (config.batch_size == 0) throw InputError("batch_size must be positive");
  if (config.float_bits == 0) throw InputError("float_bits must be positive");
  const double eta = config.step_size.value_or(default_step_size(instance));
  if (!(eta > 0.0)) throw InputError("step_size must be positive");

  const std::size_t m = instance.clients;
  const std::size_t d = instance.dim;
  std::vector<Rng> rngs;
  rngs.reserve(m);
  for (std::size_t c = 0; c < m; ++c) rngs.push_back(make_stream(config.seed, {kClientStream, c}));

  RunTrace trace;
  trace.algo = "minibatch";
  trace.clients = m;
  trace.dim = d;
  trace.horizon = instance.horizon;
  trace.seed = config.seed;
  trace.per_step_regret.reserve(instance.horizon);

  Vector x = initial_point(instance, config.start, config.seed);
  trace.iterates.push_back(x);
  const std::uint64_t message_bits = d * config.float_bits;

  std::uint64_t taken = 0;
  std::uint64_t k = 1;
  while (taken < instance.horizon) {
    Segment seg;
    seg.k = k;
    seg.j = 0;
    seg.start_t = taken + 1;
    seg.gap = eval(instance, x);
    const double grad_norm = norm2(grad(instance, x));
    const std::uint64_t remaining = instance.horizon - taken;
    if (config.batch_size > remaining) {
      seg.samples = remaining;
      seg.completed = false;
      taken += remaining;
      record_segment(trace, seg, grad_norm);
      break;
    }
    seg.samples = config.batch_size;
    Vector avg(d, 0.0);
    for (std::size_t c = 0; c < m; ++c) {
      const Vector mean = mean_noisy_grad(instance, x, config.batch_size, rngs[c]);
      for (std::size_t i = 0; i < d; ++i) avg[i] += mean[i];
    }
    for (double& v : avg) v /= static_cast<double>(m);
    for (std::size_t i = 0; i < d; ++i) x[i] -= eta * avg[i];
    taken += config.batch_size;

    seg.uplink_bits = m * message_bits;
    seg.downlink_bits = message_bits;
    seg.passed = true;
    record_segment(trace, seg, grad_norm);
    trace.iterates.push_back(x);
    ++k;
  }
  trace.channel_uplink_bits = trace.uplink_bits_total;
  trace.channel_downlink_bits = trace.downlink_bits_total;
  return trace;
}

}  // namespace ceal
