#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ceal/rng.hpp"
#include "ceal/vector_ops.hpp"

namespace ceal {

// A vector quantized onto the uniform grid c_w = r (2w/p - 1), w = 0..p.
struct QuantizedVector {
  std::vector<std::int64_t> levels;
  double precision = 0.0;         // epsilon
  double radius = 0.0;            // r
  std::int64_t num_intervals = 0;  // p = ceil(2 r sqrt(d) / epsilon)

  std::size_t dim() const { return levels.size(); }
  bool operator==(const QuantizedVector&) const = default;
};

// p(epsilon) = ceil(2 r sqrt(d) / epsilon). Throws InputError on non-positive
// arguments or a grid too fine to index with 53-bit integers.
std::int64_t num_intervals_for(double epsilon, double radius, std::size_t dim);

// Grid point c_w.
double grid_point(std::int64_t level, std::int64_t num_intervals, double radius);

// The level the codec treats as zero: floor(p / 2).
inline std::int64_t midpoint_level(std::int64_t num_intervals) { return num_intervals / 2; }

// Unbiased stochastic rounding of each coordinate to one of its two enclosing
// grid points. ||dequantize(q) - y|| <= epsilon always. Requires ||y|| <= r
// (relative slack 1e-12 for round-off); throws PreconditionError otherwise.
QuantizedVector quantize(std::span<const double> y, double epsilon, double radius, Rng& rng);

Vector dequantize(const QuantizedVector& q);

// Signed offsets level - floor(p/2), the integers the codec puts on the wire.
std::vector<std::int64_t> signed_offsets(const QuantizedVector& q);

// Inverse of signed_offsets. Throws CorruptionError if a level leaves [0, p].
QuantizedVector from_signed_offsets(std::span<const std::int64_t> offsets, double precision,
                                    double radius, std::int64_t num_intervals);

// Scales y onto the ball of the given radius if it lies outside. Returns true
// when clipping happened.
bool clip_to_radius(std::span<double> y, double radius);

}  // namespace ceal
