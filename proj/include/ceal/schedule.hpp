#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ceal {

// Inputs shared by every sub-epoch of a run.
struct ScheduleConstants {
  double sigma = 1.0;
  std::size_t clients = 1;
  std::size_t dim = 1;
  double delta = 0.05;
  double gamma0 = 0.5;
  double phi0 = 0.5;

  void validate() const;  // throws InputError
};

// Per-sub-epoch parameters. Logarithms are natural.
//   s_j   = max(1, ceil(40 sigma^2 ln(16 M j^2 / delta) 4^j / M))
//   tau_j = 3 * 2^-(j+1)
//   G_j   = (4 sigma / sqrt(s_j)) (1 + sqrt(ln(4 M j^2 / delta) / (2d)))
//   B_j   = min(5 tau_{j-1}, 1),  tau_0 = 1.5
//   gamma_j = gamma0 sigma / sqrt(s_j),  phi_j = phi0 tau_j
struct ScheduleParams {
  int j = 1;
  std::uint64_t samples = 1;  // s_j
  double tau = 0.0;
  double client_error = 0.0;  // G_j
  double norm_bound = 0.0;    // B_j
  double gamma = 0.0;
  double phi = 0.0;

  double uplink_radius() const { return client_error + norm_bound; }
  double downlink_radius() const { return norm_bound + tau; }
};

double tau_for(int j);

ScheduleParams params_for(int j, const ScheduleConstants& constants);

// Memoizing view over params_for for a fixed set of constants.
class Schedule {
 public:
  explicit Schedule(const ScheduleConstants& constants);

  const ScheduleConstants& constants() const { return constants_; }
  const ScheduleParams& at(int j) const;

  // Largest j whose cumulative sample count s_1 + ... + s_j fits in `budget`
  // (at least 1).
  int last_reachable(std::uint64_t budget) const;

  // max over j <= j_max of (G_j + B_j) / gamma_j and (B_j + tau_j) / phi_j.
  double uplink_ratio_bound(int j_max) const;
  double downlink_ratio_bound(int j_max) const;

 private:
  ScheduleConstants constants_;
  mutable std::vector<ScheduleParams> cache_;
};

}  // namespace ceal
