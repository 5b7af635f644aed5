#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ceal/codec.hpp"
#include "ceal/objective.hpp"
#include "ceal/rng.hpp"
#include "ceal/schedule.hpp"
#include "ceal/trace.hpp"

namespace ceal {

struct CapacityPolicy {
  enum class Kind {
    unlimited,
    // ceil(d (3 + 2 (rho + 1))) with rho the largest r / eps ratio over the
    // sub-epochs reachable within the horizon.
    message_bound,
    fixed,
  };
  Kind kind = Kind::message_bound;
  std::uint64_t bits = 0;  // used by `fixed`
};

struct CealConfig {
  std::optional<double> eta;  // default 1 / (10 beta); must lie in (0, 1/(5 beta))
  double delta = 0.05;
  double gamma0 = 0.5;
  double phi0 = 0.5;
  std::uint64_t seed = 1;
  // Default: quantize iff sigma > 0 (gamma_j vanishes at sigma = 0). When
  // false, both links carry raw binary64 vectors.
  std::optional<bool> quantize;
  StartSpec start;
  CapacityPolicy capacity;
};

double default_step_size(const ProblemInstance& instance);

// Counts what crosses one direction of the channel, independently of the
// codec's own size bookkeeping.
class Channel {
 public:
  explicit Channel(std::uint64_t capacity = 0) : capacity_(capacity) {}

  // Delivers the message; returns false (and counts a violation) if it does
  // not fit the per-use capacity.
  bool transmit(const Message& m);

  std::uint64_t capacity() const { return capacity_; }
  std::uint64_t bits() const { return bits_; }
  std::uint64_t messages() const { return messages_; }
  std::uint64_t violations() const { return violations_; }

 private:
  std::uint64_t capacity_;
  std::uint64_t bits_ = 0;
  std::uint64_t messages_ = 0;
  std::uint64_t violations_ = 0;
};

struct CealServerState {
  std::uint64_t k = 1;
  int j = 1;
  Vector iterate;
  std::optional<Vector> pending_estimate;
  Rng rng;
};

struct CealClientState {
  std::size_t client_id = 0;
  Vector iterate;
  std::uint64_t samples_taken = 0;
  Rng rng;
};

struct ProtocolSettings {
  double eta = 0.0;
  bool quantize = true;
};

struct SubepochOutcome {
  Segment segment;
  std::vector<MessageRecord> messages;
  ProtocolEvents events;
};

// One pass of the CEAL round: sampling, uplink, aggregation, threshold test
// and, on success, the quantized broadcast and iterate update. When fewer
// than s_j samples remain in the horizon the clients spend what is left and
// nothing is transmitted (segment.completed == false).
SubepochOutcome step_subepoch(const ProblemInstance& instance, const Schedule& schedule,
                              const ProtocolSettings& settings, CealServerState& server,
                              std::span<CealClientState> clients, Channel& uplink,
                              Channel& downlink);

RunTrace run_ceal(const ProblemInstance& instance, const CealConfig& config);

}  // namespace ceal
