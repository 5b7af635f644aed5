#include "ceal/norm_estimation.hpp"

#include <sstream>

#include "ceal/errors.hpp"
#include "ceal/quantizer.hpp"

namespace ceal {

NormEstimator::NormEstimator(std::span<const double> target, const NoiseModel& noise,
                             const Schedule& schedule, const NormEstOptions& options,
                             std::uint64_t seed)
    : target_(target.begin(), target.end()),
      noise_(noise),
      schedule_(schedule),
      options_(options) {
  if (target_.size() != noise_.dim || target_.size() != schedule.constants().dim) {
    throw InputError("target, noise model and schedule disagree on the dimension");
  }
  const double n = norm2(target_);
  if (n > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "norm estimation requires ||target|| <= 1, got " << n;
    throw PreconditionError(os.str());
  }
  const std::size_t m = schedule.constants().clients;
  client_rngs_.reserve(m);
  for (std::size_t c = 0; c < m; ++c) client_rngs_.push_back(make_stream(seed, {kClientStream, c}));
}

bool NormEstimator::step() {
  if (state_.terminated || budget_exhausted_) return false;
  const ScheduleParams& p = schedule_.at(state_.j);
  if (p.samples > options_.sample_budget - samples_used_) {
    budget_exhausted_ = true;
    return false;
  }

  const std::size_t d = target_.size();
  const std::size_t m = client_rngs_.size();
  Vector server(d, 0.0);
  for (std::size_t c = 0; c < m; ++c) {
    Vector sum(d, 0.0);
    for (std::uint64_t s = 0; s < p.samples; ++s) noise_.add_draw(sum, client_rngs_[c]);
    Vector mean(d);
    const double inv = 1.0 / static_cast<double>(p.samples);
    for (std::size_t i = 0; i < d; ++i) mean[i] = target_[i] + sum[i] * inv;

    if (options_.quantized) {
      if (clip_to_radius(mean, p.uplink_radius())) ++radius_clips_;
      const QuantizedVector q = quantize(mean, p.gamma, p.uplink_radius(), client_rngs_[c]);
      mean = dequantize(q);
    }
    for (std::size_t i = 0; i < d; ++i) server[i] += mean[i];
  }
  for (double& v : server) v /= static_cast<double>(m);
  samples_used_ += p.samples;

  if (p.tau <= norm2(server) / 4.0) {
    state_.terminated = true;
  } else {
    ++state_.j;
  }
  state_.server_estimate = std::move(server);
  return true;
}

NormEstResult NormEstimator::result() const {
  NormEstResult r;
  if (state_.server_estimate) r.estimate = *state_.server_estimate;
  r.j_final = state_.j;
  r.samples_used = samples_used_;
  r.terminated = state_.terminated;
  r.budget_exhausted = budget_exhausted_;
  r.radius_clips = radius_clips_;
  return r;
}

NormEstResult run_normest(std::span<const double> target, const NoiseModel& noise,
                          const Schedule& schedule, const NormEstOptions& options,
                          std::uint64_t seed) {
  NormEstimator est(target, noise, schedule, options, seed);
  while (est.step()) {
  }
  return est.result();
}

}  // namespace ceal
