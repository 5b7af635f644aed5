#include "ceal/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ceal/errors.hpp"

namespace ceal {

void ScheduleConstants::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InputError("sigma must be non-negative");
  if (clients == 0) throw InputError("clients must be positive");
  if (dim == 0) throw InputError("dim must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");
  if (!(gamma0 > 0.0 && gamma0 < 1.0)) throw InputError("gamma0 must lie in (0, 1)");
  if (!(phi0 > 0.0 && phi0 < 1.0)) throw InputError("phi0 must lie in (0, 1)");
}

double tau_for(int j) {
  if (j < 0) throw InputError("tau_j needs j >= 0");
  return 3.0 * std::ldexp(1.0, -(j + 1));
}

ScheduleParams params_for(int j, const ScheduleConstants& c) {
  if (j < 1) throw InputError("sub-epoch index j must be >= 1");
  c.validate();
  const double m = static_cast<double>(c.clients);
  const double jj = static_cast<double>(j);

  ScheduleParams p;
  p.j = j;
  const double raw = 40.0 * c.sigma * c.sigma * std::log(16.0 * m * jj * jj / c.delta) *
                     std::ldexp(1.0, 2 * j) / m;
  const double ceiled = std::ceil(raw);
  constexpr double kMaxSamples = 9.0e18;
  if (ceiled >= kMaxSamples) {
    p.samples = static_cast<std::uint64_t>(kMaxSamples);
  } else {
    p.samples = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(ceiled));
  }
  const double sqrt_s = std::sqrt(static_cast<double>(p.samples));
  p.tau = tau_for(j);
  p.client_error = (4.0 * c.sigma / sqrt_s) *
                   (1.0 + std::sqrt(std::log(4.0 * m * jj * jj / c.delta) /
                                    (2.0 * static_cast<double>(c.dim))));
  p.norm_bound = std::min(5.0 * tau_for(j - 1), 1.0);
  p.gamma = c.gamma0 * c.sigma / sqrt_s;
  p.phi = c.phi0 * p.tau;
  return p;
}

Schedule::Schedule(const ScheduleConstants& constants) : constants_(constants) {
  constants_.validate();
}

const ScheduleParams& Schedule::at(int j) const {
  if (j < 1) throw InputError("sub-epoch index j must be >= 1");
  while (static_cast<int>(cache_.size()) < j) {
    cache_.push_back(params_for(static_cast<int>(cache_.size()) + 1, constants_));
  }
  return cache_[static_cast<std::size_t>(j - 1)];
}

int Schedule::last_reachable(std::uint64_t budget) const {
  std::uint64_t used = 0;
  int j = 1;
  while (j < 62) {
    const std::uint64_t s = at(j).samples;
    if (s > budget - used) break;
    used += s;
    ++j;
  }
  return std::max(1, j - 1);
}

double Schedule::uplink_ratio_bound(int j_max) const {
  double worst = 0.0;
  for (int j = 1; j <= j_max; ++j) {
    const auto& p = at(j);
    if (p.gamma > 0.0) worst = std::max(worst, p.uplink_radius() / p.gamma);
  }
  return worst;
}

double Schedule::downlink_ratio_bound(int j_max) const {
  double worst = 0.0;
  for (int j = 1; j <= j_max; ++j) {
    const auto& p = at(j);
    worst = std::max(worst, p.downlink_radius() / p.phi);
  }
  return worst;
}

}  // namespace ceal
