#include <doctest.h>

#include <cmath>

#include "ceal/errors.hpp"
#include "ceal/metrics.hpp"
#include "ceal/norm_estimation.hpp"
#include "support.hpp"

using namespace ceal;

namespace {

Schedule schedule(double sigma, std::size_t m, std::size_t d) {
  ScheduleConstants c;
  c.sigma = sigma;
  c.clients = m;
  c.dim = d;
  return Schedule(c);
}

Vector with_norm(std::size_t d, double n, Rng& rng) {
  Vector v = testing::random_vector(d, 1.0, rng);
  const double s = n / norm2(v);
  for (double& x : v) x *= s;
  return v;
}

// First j with 3 * 2^-(j+1) <= n / 4, found by scanning.
int zero_noise_index(double n) {
  int j = 1;
  while (3.0 * std::pow(2.0, -(j + 1)) > n / 4.0) ++j;
  return j;
}

}  // namespace

TEST_CASE("zero noise terminates at the closed-form index with an exact estimate") {
  const Schedule s = schedule(0.0, 1, 2);
  NormEstOptions raw;
  raw.quantized = false;
  const NoiseModel none{NoiseKind::gaussian, 0.0, 2};
  const double a = 0.5 / std::sqrt(2.0);
  const auto half = run_normest(Vector{a, a}, none, s, raw, 1);
  CHECK(half.terminated);
  CHECK(half.j_final == 4);
  CHECK(half.estimate == Vector{a, a});
  CHECK(run_normest(Vector{1.0, 0.0}, none, s, raw, 1).j_final == 3);
  for (double n : {1.0, 0.5, 0.25, 0.1}) {
    CHECK(run_normest(Vector{n, 0.0}, none, s, raw, 1).j_final ==
          static_cast<int>(std::ceil(std::log2(9.0 / (2.0 * n)))));
  }
}

TEST_CASE("zero noise index follows the stopping rule on other norms") {
  const Schedule s = schedule(0.0, 2, 1);
  NormEstOptions raw;
  raw.quantized = false;
  for (double n : {0.7, 0.33, 0.05, 0.9, 0.013}) {
    CAPTURE(n);
    const auto r = run_normest(Vector{n}, NoiseModel{NoiseKind::gaussian, 0.0, 1}, s, raw, 3);
    CHECK(r.j_final == zero_noise_index(n));
    CHECK(r.j_final == static_cast<int>(std::ceil(std::log2(6.0 / n))));
  }
}

TEST_CASE("error stays within tau at termination") {
  const Schedule s = schedule(1.0, 8, 4);
  const NoiseModel noise{NoiseKind::gaussian, 1.0, 4};
  Rng rng = make_stream(77, {});
  int hits = 0;
  const int trials = 500;
  for (int i = 0; i < trials; ++i) {
    const Vector target = with_norm(4, 0.5, rng);
    const auto r = run_normest(target, noise, s, {}, 1000 + i);
    REQUIRE(r.terminated);
    CHECK(tau_for(r.j_final) <= norm2(r.estimate) / 4.0);
    if (distance(r.estimate, target) <= tau_for(r.j_final)) ++hits;
  }
  CHECK(hits >= 0.95 * trials);
}

TEST_CASE("multiplicative accuracy at termination") {
  const Schedule s = schedule(1.0, 4, 3);
  const NoiseModel noise{NoiseKind::uniform, 1.0, 3};
  Rng rng = make_stream(78, {});
  int hits = 0;
  const int trials = 300;
  for (int i = 0; i < trials; ++i) {
    const double n = 0.3 + 0.7 * (i % 7) / 6.0;
    const Vector target = with_norm(3, n, rng);
    const auto r = run_normest(target, noise, s, {}, 5000 + i);
    const double ratio = norm2(r.estimate) / n;
    if (ratio >= 0.8 && ratio <= 1.3334) ++hits;
  }
  CHECK(hits >= 0.95 * trials);
}

TEST_CASE("samples scale as the inverse square of the norm") {
  const Schedule s = schedule(1.0, 4, 2);
  const NoiseModel noise{NoiseKind::gaussian, 1.0, 2};
  Rng rng = make_stream(79, {});
  std::vector<double> x, y;
  for (double n : {1.0, 0.5, 0.25, 0.125}) {
    double total = 0.0;
    const int trials = 20;
    for (int i = 0; i < trials; ++i) {
      total += static_cast<double>(run_normest(with_norm(2, n, rng), noise, s, {}, 900 + i).samples_used);
    }
    x.push_back(std::log(n));
    y.push_back(std::log(total / trials));
  }
  const LinearFit fit = fit_line(x, y);
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(0.15));
}

TEST_CASE("raw and quantized aggregation both work") {
  const Schedule s = schedule(1.0, 3, 2);
  const NoiseModel noise{NoiseKind::gaussian, 1.0, 2};
  NormEstOptions raw;
  raw.quantized = false;
  const auto a = run_normest(Vector{0.6, 0.0}, noise, s, raw, 4);
  const auto b = run_normest(Vector{0.6, 0.0}, noise, s, {}, 4);
  CHECK(a.terminated);
  CHECK(b.terminated);
  CHECK(distance(a.estimate, Vector{0.6, 0.0}) <= tau_for(a.j_final));
}

TEST_CASE("runs are reproducible and the stepper matches the wrapper") {
  const Schedule s = schedule(1.0, 2, 3);
  const NoiseModel noise{NoiseKind::gaussian, 1.0, 3};
  const Vector target{0.2, -0.3, 0.1};
  const auto a = run_normest(target, noise, s, {}, 12);
  const auto b = run_normest(target, noise, s, {}, 12);
  CHECK(a.estimate == b.estimate);
  CHECK(a.j_final == b.j_final);
  NormEstimator est(target, noise, s, {}, 12);
  int last_j = 0;
  while (est.step()) {
    CHECK(est.state().j >= last_j);
    last_j = est.state().j;
  }
  CHECK(est.result().estimate == a.estimate);
  CHECK(est.result().samples_used == a.samples_used);
}

TEST_CASE("precondition and budget exhaustion") {
  const Schedule s = schedule(1.0, 2, 2);
  const NoiseModel noise{NoiseKind::gaussian, 1.0, 2};
  CHECK_THROWS_AS(run_normest(Vector{1.0, 1.0}, noise, s, {}, 1), PreconditionError);
  NormEstOptions tight;
  tight.sample_budget = s.at(1).samples + 10;
  const auto r = run_normest(Vector{0.01, 0.0}, noise, s, tight, 1);
  CHECK_FALSE(r.terminated);
  CHECK(r.budget_exhausted);
  CHECK(r.samples_used <= tight.sample_budget);
  CHECK(r.estimate.size() == 2);  // partial state from the one completed round
}
