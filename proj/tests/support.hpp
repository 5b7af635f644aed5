#pragma once

#include <cmath>
#include <random>

#include "ceal/objective.hpp"
#include "ceal/rng.hpp"

namespace testing {

inline ceal::ProblemInstance quadratic(ceal::Vector curvature, ceal::Vector minimizer, double radius,
                                       double sigma = 0.0, std::size_t clients = 1,
                                       std::uint64_t horizon = 1000) {
  ceal::ProblemInstance p;
  p.dim = curvature.size();
  p.alpha = *std::min_element(curvature.begin(), curvature.end());
  p.beta = *std::max_element(curvature.begin(), curvature.end());
  p.sigma = sigma;
  p.clients = clients;
  p.horizon = horizon;
  p.curvature = std::move(curvature);
  p.minimizer = std::move(minimizer);
  p.domain_radius = radius;
  return p;
}

inline ceal::InstanceSpec standard(std::size_t clients, std::size_t dim, std::uint64_t horizon,
                                   double sigma) {
  ceal::InstanceSpec s;
  s.dim = dim;
  s.alpha = 0.5;
  s.beta = 1.0;
  s.sigma = sigma;
  s.clients = clients;
  s.horizon = horizon;
  return s;
}

inline ceal::Vector random_vector(std::size_t d, double scale, ceal::Rng& rng) {
  std::uniform_real_distribution<double> u(-scale, scale);
  ceal::Vector v(d);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace testing
