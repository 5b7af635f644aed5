#include "ceal/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ceal/errors.hpp"

namespace ceal {

std::int64_t num_intervals_for(double epsilon, double radius, std::size_t dim) {
  if (!(epsilon > 0.0) || !(radius > 0.0) || dim == 0) {
    throw InputError("quantizer needs epsilon > 0, radius > 0 and dim > 0");
  }
  const double p = std::ceil(2.0 * radius * std::sqrt(static_cast<double>(dim)) / epsilon);
  if (!(p <= 9.0e15)) throw InputError("quantization grid too fine (radius / epsilon overflow)");
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(p));
}

double grid_point(std::int64_t level, std::int64_t num_intervals, double radius) {
  return radius * (2.0 * static_cast<double>(level) / static_cast<double>(num_intervals) - 1.0);
}

QuantizedVector quantize(std::span<const double> y, double epsilon, double radius, Rng& rng) {
  const std::int64_t p = num_intervals_for(epsilon, radius, y.size());
  const double n = norm2(y);
  if (!(n <= radius * (1.0 + 1e-12))) {
    std::ostringstream os;
    os << "quantize: ||y|| = " << n << " exceeds radius " << radius;
    throw PreconditionError(os.str());
  }

  QuantizedVector q{std::vector<std::int64_t>(y.size()), epsilon, radius, p};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double scale = static_cast<double>(p) / (2.0 * radius);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double yi = std::clamp(y[i], -radius, radius);
    auto lower = static_cast<std::int64_t>(std::floor((yi + radius) * scale));
    lower = std::clamp<std::int64_t>(lower, 0, p);
    // Repair floor() round-off so that c_lower <= yi < c_{lower+1} holds under
    // the same grid_point arithmetic used by dequantize.
    while (lower > 0 && grid_point(lower, p, radius) > yi) --lower;
    while (lower < p && grid_point(lower + 1, p, radius) <= yi) ++lower;
    if (lower == p) {
      q.levels[i] = p;
      continue;
    }
    const double lo = grid_point(lower, p, radius);
    const double hi = grid_point(lower + 1, p, radius);
    const double frac = (yi - lo) / (hi - lo);
    // Upper point with probability (y - c_{v-1}) / (c_v - c_{v-1}).
    q.levels[i] = unit(rng) < frac ? lower + 1 : lower;
  }
  return q;
}

Vector dequantize(const QuantizedVector& q) {
  Vector out(q.levels.size());
  for (std::size_t i = 0; i < q.levels.size(); ++i) {
    out[i] = grid_point(q.levels[i], q.num_intervals, q.radius);
  }
  return out;
}

std::vector<std::int64_t> signed_offsets(const QuantizedVector& q) {
  const std::int64_t mid = midpoint_level(q.num_intervals);
  std::vector<std::int64_t> out(q.levels.size());
  for (std::size_t i = 0; i < q.levels.size(); ++i) out[i] = q.levels[i] - mid;
  return out;
}

QuantizedVector from_signed_offsets(std::span<const std::int64_t> offsets, double precision,
                                    double radius, std::int64_t num_intervals) {
  if (num_intervals <= 0) throw InputError("num_intervals must be positive");
  const std::int64_t mid = midpoint_level(num_intervals);
  QuantizedVector q{std::vector<std::int64_t>(offsets.size()), precision, radius, num_intervals};
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    const std::int64_t level = offsets[i] + mid;
    if (level < 0 || level > num_intervals) {
      std::ostringstream os;
      os << "decoded level " << level << " at coordinate " << i << " outside [0, " << num_intervals
         << "]";
      throw CorruptionError(os.str());
    }
    q.levels[i] = level;
  }
  return q;
}

bool clip_to_radius(std::span<double> y, double radius) {
  const double n = norm2(y);
  if (n <= radius) return false;
  // Aim slightly inside so round-off cannot push the result past the radius.
  const double s = radius / n * (1.0 - 1e-15);
  for (double& v : y) v *= s;
  return true;
}

}  // namespace ceal
