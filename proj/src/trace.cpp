#include "ceal/trace.hpp"

namespace ceal {

double regret_from_epochs(const RunTrace& trace) {
  double total = 0.0;
  for (const auto& e : trace.epochs) {
    total += static_cast<double>(trace.clients) * static_cast<double>(e.t_k) * e.gap;
  }
  return total;
}

}  // namespace ceal

#include <algorithm>

namespace ceal {

void record_segment(RunTrace& trace, const Segment& seg, double grad_norm_true) {
  const double step = static_cast<double>(trace.clients) * seg.gap;
  double r = trace.final_regret();
  for (std::uint64_t s = 0; s < seg.samples; ++s) {
    r += step;
    trace.per_step_regret.push_back(r);
  }
  if (trace.epochs.empty() || trace.epochs.back().k != seg.k) {
    EpochRecord e;
    e.k = seg.k;
    e.grad_norm_true = grad_norm_true;
    e.gap = seg.gap;
    trace.epochs.push_back(e);
  }
  EpochRecord& e = trace.epochs.back();
  if (seg.j > 0 && std::find(e.j_set.begin(), e.j_set.end(), seg.j) == e.j_set.end()) {
    e.j_set.push_back(seg.j);
  }
  e.t_k += seg.samples;
  e.uplink_bits += seg.uplink_bits;
  e.downlink_bits += seg.downlink_bits;
  if (seg.passed) e.completed = true;
  trace.uplink_bits_total += seg.uplink_bits;
  trace.downlink_bits_total += seg.downlink_bits;
  if (seg.passed) ++trace.num_rounds;
  trace.segments.push_back(seg);
}

}  // namespace ceal
