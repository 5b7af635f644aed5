#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "ceal/rng.hpp"
#include "ceal/vector_ops.hpp"

namespace ceal {

enum class NoiseKind { gaussian, uniform };

std::string to_string(NoiseKind kind);
NoiseKind parse_noise_kind(const std::string& name);

// Zero-mean additive noise with per-coordinate variance sigma^2 / dim.
// Gaussian is the default; uniform on [-a, a] with a = sigma * sqrt(3 / dim)
// has the same variance and is strictly sub-Gaussian.
struct NoiseModel {
  NoiseKind kind = NoiseKind::gaussian;
  double sigma = 0.0;
  std::size_t dim = 1;

  double coordinate_stddev() const;
  // Adds one noise draw to `acc`.
  void add_draw(std::span<double> acc, Rng& rng) const;
};

// Diagonal quadratic f(x) = 1/2 sum_i curvature_i (x_i - minimizer_i)^2 on the
// box [-domain_radius, domain_radius]^dim.
struct ProblemInstance {
  std::size_t dim = 1;
  double alpha = 1.0;
  double beta = 1.0;
  double sigma = 0.0;
  std::size_t clients = 1;
  std::uint64_t horizon = 1;
  Vector minimizer;
  double domain_radius = 1.0;
  Vector curvature;
  NoiseKind noise = NoiseKind::gaussian;

  // Throws InputError when any invariant fails, including max gradient norm > 1.
  void validate() const;

  // sup of ||grad f|| over the box (attained at the corner farthest from x*).
  double max_grad_norm() const;
  bool contains(std::span<const double> x) const;
  NoiseModel noise_model() const { return {noise, sigma, dim}; }
};

struct GradientSample {
  Vector value;
};

double eval(const ProblemInstance& instance, std::span<const double> x);
Vector grad(const ProblemInstance& instance, std::span<const double> x);
GradientSample noisy_grad(const ProblemInstance& instance, std::span<const double> x, Rng& rng);

// Mean of `count` noisy gradients at x. Consumes the rng exactly like `count`
// consecutive noisy_grad calls; the result agrees with their average up to
// floating-point reassociation.
Vector mean_noisy_grad(const ProblemInstance& instance, std::span<const double> x,
                       std::uint64_t count, Rng& rng);

enum class CurvatureKind { linspace, random, list };
enum class MinimizerKind { origin, random, list };

// Declarative description of an instance; build_instance turns it into a
// validated ProblemInstance, choosing the box so that ||grad f|| <= 1 holds.
struct InstanceSpec {
  std::size_t dim = 1;
  double alpha = 1.0;
  double beta = 1.0;
  double sigma = 1.0;
  std::size_t clients = 1;
  std::uint64_t horizon = 1000;
  CurvatureKind curvature = CurvatureKind::linspace;
  Vector curvature_values;
  MinimizerKind minimizer = MinimizerKind::origin;
  Vector minimizer_values;
  std::optional<double> domain_radius;  // empty: largest box with ||grad f|| <= 1
  NoiseKind noise = NoiseKind::gaussian;
  std::uint64_t instance_seed = 0;
};

ProblemInstance build_instance(const InstanceSpec& spec);

}  // namespace ceal

namespace ceal {

enum class StartKind { corner, random, list };

// x^(1). `corner`: 0.9 * domain_radius with a sign per coordinate drawn from
// the run seed. `random`: uniform in the box. `list`: explicit point.
struct StartSpec {
  StartKind kind = StartKind::corner;
  Vector values;
};

Vector initial_point(const ProblemInstance& instance, const StartSpec& start, std::uint64_t seed);

}  // namespace ceal
