#include "ceal/objective.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ceal/errors.hpp"

namespace ceal {

namespace {

void check_dim(const ProblemInstance& instance, std::span<const double> x) {
  if (x.size() != instance.dim) {
    std::ostringstream os;
    os << "dimension mismatch: expected " << instance.dim << ", got " << x.size();
    throw InputError(os.str());
  }
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::string to_string(NoiseKind kind) {
  return kind == NoiseKind::gaussian ? "gaussian" : "uniform";
}

NoiseKind parse_noise_kind(const std::string& name) {
  if (name == "gaussian") return NoiseKind::gaussian;
  if (name == "uniform") return NoiseKind::uniform;
  throw InputError("unknown noise kind '" + name + "' (expected gaussian|uniform)");
}

double NoiseModel::coordinate_stddev() const {
  return sigma / std::sqrt(static_cast<double>(dim));
}

void NoiseModel::add_draw(std::span<double> acc, Rng& rng) const {
  if (sigma == 0.0) return;
  const double sd = coordinate_stddev();
  if (kind == NoiseKind::gaussian) {
    std::normal_distribution<double> normal(0.0, sd);
    for (double& a : acc) a += normal(rng);
  } else {
    const double half_width = sd * std::sqrt(3.0);
    std::uniform_real_distribution<double> uniform(-half_width, half_width);
    for (double& a : acc) a += uniform(rng);
  }
}

void ProblemInstance::validate() const {
  if (dim == 0) throw InputError("dim must be positive");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InputError("alpha must be positive");
  if (!(beta >= alpha) || !std::isfinite(beta)) throw InputError("beta must satisfy beta >= alpha");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InputError("sigma must be non-negative");
  if (clients == 0) throw InputError("clients must be positive");
  if (horizon == 0) throw InputError("horizon must be positive");
  if (!(domain_radius > 0.0) || !std::isfinite(domain_radius)) {
    throw InputError("domain_radius must be positive");
  }
  if (curvature.size() != dim || minimizer.size() != dim) {
    throw InputError("curvature and minimizer must have length dim");
  }
  if (!all_finite(curvature) || !all_finite(minimizer)) {
    throw InputError("curvature and minimizer must be finite");
  }
  for (double lambda : curvature) {
    if (lambda < alpha || lambda > beta) {
      throw InputError("curvature eigenvalues must lie in [alpha, beta]");
    }
  }
  for (double m : minimizer) {
    if (!(std::abs(m) < domain_radius)) {
      throw InputError("minimizer must lie strictly inside the domain box");
    }
  }
  const double g = max_grad_norm();
  if (g > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "max gradient norm over the domain is " << g << " > 1; shrink the domain or curvature";
    throw InputError(os.str());
  }
}

double ProblemInstance::max_grad_norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double t = curvature[i] * (domain_radius + std::abs(minimizer[i]));
    s += t * t;
  }
  return std::sqrt(s);
}

bool ProblemInstance::contains(std::span<const double> x) const {
  return x.size() == dim &&
         std::all_of(x.begin(), x.end(), [&](double v) { return std::abs(v) <= domain_radius; });
}

double eval(const ProblemInstance& instance, std::span<const double> x) {
  check_dim(instance, x);
  double s = 0.0;
  for (std::size_t i = 0; i < instance.dim; ++i) {
    const double e = x[i] - instance.minimizer[i];
    s += instance.curvature[i] * e * e;
  }
  return 0.5 * s;
}

Vector grad(const ProblemInstance& instance, std::span<const double> x) {
  check_dim(instance, x);
  Vector g(instance.dim);
  for (std::size_t i = 0; i < instance.dim; ++i) {
    g[i] = instance.curvature[i] * (x[i] - instance.minimizer[i]);
  }
  return g;
}

GradientSample noisy_grad(const ProblemInstance& instance, std::span<const double> x, Rng& rng) {
  GradientSample sample{grad(instance, x)};
  instance.noise_model().add_draw(sample.value, rng);
  return sample;
}

Vector mean_noisy_grad(const ProblemInstance& instance, std::span<const double> x,
                       std::uint64_t count, Rng& rng) {
  if (count == 0) throw InputError("mean_noisy_grad needs at least one sample");
  Vector g = grad(instance, x);
  Vector noise_sum(instance.dim, 0.0);
  const NoiseModel noise = instance.noise_model();
  for (std::uint64_t s = 0; s < count; ++s) noise.add_draw(noise_sum, rng);
  const double inv = 1.0 / static_cast<double>(count);
  for (std::size_t i = 0; i < instance.dim; ++i) g[i] += noise_sum[i] * inv;
  return g;
}

ProblemInstance build_instance(const InstanceSpec& spec) {
  if (spec.dim == 0) throw InputError("dim must be positive");
  if (!(spec.alpha > 0.0) || !(spec.beta >= spec.alpha)) {
    throw InputError("need 0 < alpha <= beta");
  }
  Rng rng = make_stream(spec.instance_seed, {kInstanceStream});
  const std::size_t d = spec.dim;

  ProblemInstance inst;
  inst.dim = d;
  inst.alpha = spec.alpha;
  inst.beta = spec.beta;
  inst.sigma = spec.sigma;
  inst.clients = spec.clients;
  inst.horizon = spec.horizon;
  inst.noise = spec.noise;

  switch (spec.curvature) {
    case CurvatureKind::linspace:
      inst.curvature.resize(d);
      for (std::size_t i = 0; i < d; ++i) {
        const double t = d == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(d - 1);
        inst.curvature[i] = spec.alpha + (spec.beta - spec.alpha) * t;
      }
      break;
    case CurvatureKind::random: {
      std::uniform_real_distribution<double> u(spec.alpha, spec.beta);
      inst.curvature.resize(d);
      for (auto& c : inst.curvature) c = u(rng);
      if (d >= 2) {
        inst.curvature.front() = spec.alpha;
        inst.curvature.back() = spec.beta;
      }
      break;
    }
    case CurvatureKind::list:
      if (spec.curvature_values.size() != d) throw InputError("curvature list must have dim entries");
      inst.curvature = spec.curvature_values;
      break;
  }

  // Minimizer offsets; for `random` they are fractions of the (possibly not yet
  // known) radius, within the inner half of the box.
  Vector fractions(d, 0.0);
  bool relative = true;
  switch (spec.minimizer) {
    case MinimizerKind::origin:
      break;
    case MinimizerKind::random: {
      std::uniform_real_distribution<double> u(-0.5, 0.5);
      for (auto& f : fractions) f = u(rng);
      break;
    }
    case MinimizerKind::list:
      if (spec.minimizer_values.size() != d) throw InputError("minimizer list must have dim entries");
      fractions = spec.minimizer_values;
      relative = false;
      break;
  }

  double radius = 0.0;
  if (spec.domain_radius) {
    radius = *spec.domain_radius;
  } else if (relative) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double t = inst.curvature[i] * (1.0 + std::abs(fractions[i]));
      s += t * t;
    }
    radius = 1.0 / std::sqrt(s);
  } else {
    // Solve sum_i lambda_i^2 (R + |m_i|)^2 = 1 for R > 0.
    double a = 0.0, b = 0.0, c = -1.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double l2 = inst.curvature[i] * inst.curvature[i];
      const double m = std::abs(fractions[i]);
      a += l2;
      b += l2 * m;
      c += l2 * m * m;
    }
    if (c >= 0.0) throw InputError("minimizer too far from the origin for a unit gradient bound");
    radius = (-b + std::sqrt(b * b - a * c)) / a;
  }
  if (!(radius > 0.0)) throw InputError("domain_radius must be positive");
  inst.domain_radius = radius;

  inst.minimizer.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    inst.minimizer[i] = relative ? fractions[i] * radius : fractions[i];
    if (std::abs(inst.minimizer[i]) > 0.5 * radius) {
      throw InputError("minimizer must lie in the inner half of the domain box");
    }
  }
  inst.validate();
  return inst;
}

}  // namespace ceal

namespace ceal {

Vector initial_point(const ProblemInstance& instance, const StartSpec& start, std::uint64_t seed) {
  Rng rng = make_stream(seed, {kStartStream});
  Vector x(instance.dim);
  switch (start.kind) {
    case StartKind::corner: {
      std::bernoulli_distribution coin(0.5);
      for (auto& v : x) v = (coin(rng) ? 0.9 : -0.9) * instance.domain_radius;
      break;
    }
    case StartKind::random: {
      std::uniform_real_distribution<double> u(-instance.domain_radius, instance.domain_radius);
      for (auto& v : x) v = u(rng);
      break;
    }
    case StartKind::list:
      if (start.values.size() != instance.dim) throw InputError("start point must have dim entries");
      x = start.values;
      if (!instance.contains(x)) throw InputError("start point must lie in the domain box");
      break;
  }
  return x;
}

}  // namespace ceal
