#include "ceal/protocol.hpp"

#include <cmath>
#include <sstream>

#include "ceal/errors.hpp"
#include "ceal/quantizer.hpp"

namespace ceal {

double default_step_size(const ProblemInstance& instance) { return 1.0 / (10.0 * instance.beta); }

bool Channel::transmit(const Message& m) {
  bits_ += m.bit_count();
  ++messages_;
  if (capacity_ != 0 && !check_capacity(m, capacity_)) {
    ++violations_;
    return false;
  }
  return true;
}

SubepochOutcome step_subepoch(const ProblemInstance& instance, const Schedule& schedule,
                              const ProtocolSettings& settings, CealServerState& server,
                              std::span<CealClientState> clients, Channel& uplink,
                              Channel& downlink) {
  if (clients.empty()) throw InputError("step_subepoch needs at least one client");
  for (const auto& c : clients) {
    if (c.iterate != server.iterate) throw PreconditionError("client iterate out of sync with server");
  }
  const ScheduleParams& p = schedule.at(server.j);
  const std::size_t d = instance.dim;
  const std::uint64_t remaining = instance.horizon - clients.front().samples_taken;

  SubepochOutcome out;
  Segment& seg = out.segment;
  seg.k = server.k;
  seg.j = server.j;
  seg.start_t = clients.front().samples_taken + 1;
  seg.gap = eval(instance, server.iterate);

  if (p.samples > remaining) {
    // Horizon ends inside this sub-epoch: the queries still cost regret, but
    // no partial message goes on the wire.
    seg.samples = remaining;
    seg.completed = false;
    for (auto& c : clients) c.samples_taken += remaining;
    return out;
  }
  seg.samples = p.samples;

  Vector sum(d, 0.0);
  for (auto& c : clients) {
    Vector mean = mean_noisy_grad(instance, c.iterate, p.samples, c.rng);
    c.samples_taken += p.samples;
    MessageRecord rec{Link::uplink, server.k, server.j, 0, 0.0, 0.0};
    Vector received;
    if (settings.quantize) {
      const double radius = p.uplink_radius();
      if (clip_to_radius(mean, radius)) ++out.events.radius_clips;
      const QuantizedVector q = quantize(mean, p.gamma, radius, c.rng);
      const Message msg = encode(q);
      if (!uplink.transmit(msg)) ++out.events.capacity_violations;
      rec.bits = encoded_size(q);
      rec.radius = radius;
      rec.precision = p.gamma;
      received = dequantize(decode(msg, d, p.gamma, radius, q.num_intervals));
    } else {
      const Message msg = encode_raw(mean);
      if (!uplink.transmit(msg)) ++out.events.capacity_violations;
      rec.bits = 64 * d;
      received = decode_raw(msg, d);
    }
    seg.uplink_bits += rec.bits;
    out.messages.push_back(rec);
    for (std::size_t i = 0; i < d; ++i) sum[i] += received[i];
  }
  for (double& v : sum) v /= static_cast<double>(clients.size());
  server.pending_estimate = sum;

  if (p.tau <= norm2(sum) / 4.0) {
    MessageRecord rec{Link::downlink, server.k, server.j, 0, 0.0, 0.0};
    Vector step;
    if (settings.quantize) {
      const double radius = p.downlink_radius();
      Vector estimate = sum;
      if (clip_to_radius(estimate, radius)) ++out.events.radius_clips;
      const QuantizedVector q = quantize(estimate, p.phi, radius, server.rng);
      const Message msg = encode(q);
      if (!downlink.transmit(msg)) ++out.events.capacity_violations;
      rec.bits = encoded_size(q);
      rec.radius = radius;
      rec.precision = p.phi;
      step = dequantize(q);
      for (auto& c : clients) {
        const Vector delivered = dequantize(decode(msg, d, p.phi, radius, q.num_intervals));
        for (std::size_t i = 0; i < d; ++i) c.iterate[i] -= settings.eta * delivered[i];
      }
    } else {
      const Message msg = encode_raw(sum);
      if (!downlink.transmit(msg)) ++out.events.capacity_violations;
      rec.bits = 64 * d;
      step = sum;
      for (auto& c : clients) {
        const Vector delivered = decode_raw(msg, d);
        for (std::size_t i = 0; i < d; ++i) c.iterate[i] -= settings.eta * delivered[i];
      }
    }
    for (std::size_t i = 0; i < d; ++i) server.iterate[i] -= settings.eta * step[i];
    seg.downlink_bits = rec.bits;
    seg.passed = true;
    out.messages.push_back(rec);
    server.pending_estimate.reset();
    ++server.k;
  } else {
    ++server.j;
  }
  return out;
}

RunTrace run_ceal(const ProblemInstance& instance, const CealConfig& config) {
  instance.validate();
  const double eta = config.eta.value_or(default_step_size(instance));
  const double eta_max = 1.0 / (5.0 * instance.beta);
  if (!(eta > 0.0) || !(eta < eta_max)) {
    std::ostringstream os;
    os << "step size eta = " << eta << " must lie in (0, 1/(5*beta)) = (0, " << eta_max << ")";
    throw InputError(os.str());
  }
  const bool quantize = config.quantize.value_or(instance.sigma > 0.0);
  if (quantize && instance.sigma == 0.0) {
    throw InputError("quantized uplink needs sigma > 0 (gamma_j = gamma0 * sigma / sqrt(s_j))");
  }

  const Schedule schedule(ScheduleConstants{instance.sigma, instance.clients, instance.dim,
                                            config.delta, config.gamma0, config.phi0});

  std::uint64_t capacity = 0;
  switch (config.capacity.kind) {
    case CapacityPolicy::Kind::unlimited:
      break;
    case CapacityPolicy::Kind::fixed:
      capacity = config.capacity.bits;
      break;
    case CapacityPolicy::Kind::message_bound:
      if (quantize) {
        const int j_max = schedule.last_reachable(instance.horizon);
        const double rho =
            std::max(schedule.uplink_ratio_bound(j_max), schedule.downlink_ratio_bound(j_max));
        capacity = static_cast<std::uint64_t>(
            std::ceil(static_cast<double>(instance.dim) * (3.0 + 2.0 * (rho + 1.0))));
      }
      break;
  }

  const Vector x1 = initial_point(instance, config.start, config.seed);
  CealServerState server{1, 1, x1, std::nullopt, make_stream(config.seed, {kServerStream})};
  std::vector<CealClientState> clients;
  clients.reserve(instance.clients);
  for (std::size_t c = 0; c < instance.clients; ++c) {
    clients.push_back({c + 1, x1, 0, make_stream(config.seed, {kClientStream, c})});
  }
  Channel uplink(capacity), downlink(capacity);

  RunTrace trace;
  trace.algo = "ceal";
  trace.clients = instance.clients;
  trace.dim = instance.dim;
  trace.horizon = instance.horizon;
  trace.seed = config.seed;
  trace.capacity = capacity;
  trace.per_step_regret.reserve(instance.horizon);
  trace.iterates.push_back(x1);

  const ProtocolSettings settings{eta, quantize};
  while (clients.front().samples_taken < instance.horizon) {
    const double grad_norm = norm2(grad(instance, server.iterate));
    SubepochOutcome out =
        step_subepoch(instance, schedule, settings, server, clients, uplink, downlink);
    record_segment(trace, out.segment, grad_norm);
    trace.messages.insert(trace.messages.end(), out.messages.begin(), out.messages.end());
    trace.events.radius_clips += out.events.radius_clips;
    trace.events.capacity_violations += out.events.capacity_violations;
    if (out.segment.passed) trace.iterates.push_back(server.iterate);
  }
  trace.channel_uplink_bits = uplink.bits();
  trace.channel_downlink_bits = downlink.bits();
  return trace;
}

}  // namespace ceal
