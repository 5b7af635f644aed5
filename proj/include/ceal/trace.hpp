#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ceal {

struct ProtocolEvents {
  std::uint64_t radius_clips = 0;
  std::uint64_t capacity_violations = 0;
  bool operator==(const ProtocolEvents&) const = default;
};

enum class Link { uplink, downlink };

// One message on the simulated channel.
struct MessageRecord {
  Link link = Link::uplink;
  std::uint64_t k = 0;
  int j = 0;
  std::uint64_t bits = 0;
  double radius = 0.0;     // quantizer radius r (0 for raw payloads)
  double precision = 0.0;  // quantizer precision epsilon (0 for raw payloads)
  bool operator==(const MessageRecord&) const = default;
};

// A contiguous block of timesteps spent at one iterate and one j. For CEAL
// this is a sub-epoch; for Minibatch-SGD a round (j = 0).
struct Segment {
  std::uint64_t k = 1;
  int j = 0;
  std::uint64_t start_t = 1;  // first timestep, 1-based
  std::uint64_t samples = 0;  // per client
  double gap = 0.0;           // f(x^(k)) - f(x*)
  std::uint64_t uplink_bits = 0;
  std::uint64_t downlink_bits = 0;
  bool completed = true;  // false for the tail segment cut by the horizon
  bool passed = false;    // ended with an iterate update
  bool operator==(const Segment&) const = default;
};

struct EpochRecord {
  std::uint64_t k = 1;
  std::vector<int> j_set;
  std::uint64_t t_k = 0;  // per-client samples spent at x^(k)
  std::uint64_t uplink_bits = 0;
  std::uint64_t downlink_bits = 0;
  double grad_norm_true = 0.0;
  double gap = 0.0;
  bool completed = false;  // ended with a broadcast and an update
  bool operator==(const EpochRecord&) const = default;
};

struct RunTrace {
  std::string algo;
  std::size_t clients = 0;
  std::size_t dim = 0;
  std::uint64_t horizon = 0;
  std::uint64_t seed = 0;

  std::vector<double> per_step_regret;  // R(t), t = 1..T, summed over clients
  std::vector<EpochRecord> epochs;
  std::vector<Segment> segments;
  std::vector<MessageRecord> messages;
  std::vector<std::vector<double>> iterates;  // x^(1), x^(2), ...

  std::uint64_t uplink_bits_total = 0;    // C_u(T), all clients
  std::uint64_t downlink_bits_total = 0;  // C_d(T), broadcasts counted once
  // Same totals as counted by the channel objects at transmit time.
  std::uint64_t channel_uplink_bits = 0;
  std::uint64_t channel_downlink_bits = 0;
  std::uint64_t num_rounds = 0;  // K
  std::uint64_t capacity = 0;    // 0: unlimited
  ProtocolEvents events;

  double final_regret() const { return per_step_regret.empty() ? 0.0 : per_step_regret.back(); }
  bool operator==(const RunTrace&) const = default;
};

// Sum over epochs of M * t_k * gap_k. Should match final_regret() up to
// round-off.
double regret_from_epochs(const RunTrace& trace);

}  // namespace ceal

namespace ceal {

// Appends a segment: extends per_step_regret by seg.samples steps of
// clients * gap each, and opens or extends the epoch record for seg.k.
void record_segment(RunTrace& trace, const Segment& seg, double grad_norm_true);

}  // namespace ceal
