#include "ceal/comparison.hpp"

#include <cmath>

#include "ceal/errors.hpp"

namespace ceal {

MinibatchMean minibatch_mean(const ProblemInstance& instance, MinibatchConfig config,
                             std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw InputError("minibatch_mean: no seeds");
  MinibatchMean out;
  for (auto seed : seeds) {
    config.seed = seed;
    const RunTrace trace = run_minibatch(instance, config);
    out.regret += trace.final_regret();
    out.bits += static_cast<double>(trace.uplink_bits_total + trace.downlink_bits_total);
  }
  out.regret /= static_cast<double>(seeds.size());
  out.bits /= static_cast<double>(seeds.size());
  return out;
}

MatchedComparison match_minibatch(const ProblemInstance& instance, double ceal_regret,
                                  double ceal_bits, std::uint64_t batch_size,
                                  std::span<const std::uint64_t> seeds,
                                  const MinibatchConfig& base, const MatchOptions& options) {
  if (!(ceal_regret > 0.0)) throw InputError("match_minibatch: reference regret must be > 0");
  MatchedComparison out;
  out.batch_size = batch_size;
  out.ceal_regret = ceal_regret;
  out.ceal_bits = ceal_bits;

  MinibatchConfig cfg = base;
  cfg.batch_size = batch_size;
  auto evaluate = [&](double eta) {
    cfg.step_size = eta;
    ++out.evaluations;
    return minibatch_mean(instance, cfg, seeds);
  };
  auto accept = [&](double eta, const MinibatchMean& m) {
    out.minibatch_step = eta;
    out.minibatch_regret = m.regret;
    out.minibatch_bits = m.bits;
    out.matched = std::abs(m.regret / ceal_regret - 1.0) <= options.tolerance;
  };

  const double hi_eta = (1.0 - 1e-9) / (5.0 * instance.beta);
  const MinibatchMean hi = evaluate(hi_eta);
  if (hi.regret >= ceal_regret) {
    accept(hi_eta, hi);
    return out;
  }
  const double lo_eta = hi_eta * options.min_step_fraction;
  const MinibatchMean lo = evaluate(lo_eta);
  if (lo.regret <= ceal_regret) {
    accept(lo_eta, lo);
    return out;
  }

  // Invariant: regret(a) > target > regret(b).
  double a = std::log(lo_eta);
  double b = std::log(hi_eta);
  MinibatchMean best = hi;
  double best_eta = hi_eta;
  for (int i = 0; i < options.max_iterations; ++i) {
    const double mid = 0.5 * (a + b);
    const double eta = std::exp(mid);
    const MinibatchMean m = evaluate(eta);
    if (std::abs(m.regret - ceal_regret) < std::abs(best.regret - ceal_regret)) {
      best = m;
      best_eta = eta;
    }
    if (std::abs(m.regret / ceal_regret - 1.0) <= options.tolerance / 2.0) break;
    (m.regret > ceal_regret ? a : b) = mid;
  }
  accept(best_eta, best);
  return out;
}

}  // namespace ceal
