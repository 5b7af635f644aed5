#include <doctest.h>

#include <cmath>

#include "ceal/errors.hpp"
#include "ceal/quantizer.hpp"
#include "support.hpp"

using namespace ceal;

TEST_CASE("number of intervals") {
  CHECK(num_intervals_for(2.0, 1.0, 1) == 1);
  CHECK(num_intervals_for(0.1, 1.0, 4) == 40);
  CHECK(num_intervals_for(0.3, 1.0, 1) == 7);  // ceil(6.67)
}

TEST_CASE("dequantize endpoints and midpoint") {
  CHECK(dequantize({{0}, 1.0, 1.0, 2})[0] == -1.0);
  CHECK(dequantize({{7}, 0.5, 3.0, 7})[0] == 3.0);
  CHECK(dequantize({{4}, 0.5, 2.5, 8})[0] == 0.0);
}

TEST_CASE("grid points are fixed") {
  Rng rng = make_stream(1, {});
  const double r = 1.0, eps = 0.1;
  const std::int64_t p = num_intervals_for(eps, r, 1);
  for (std::int64_t w = 0; w <= p; ++w) {
    const double c = r * (2.0 * static_cast<double>(w) / static_cast<double>(p) - 1.0);
    for (int rep = 0; rep < 5; ++rep) CHECK(quantize(Vector{c}, eps, r, rng).levels[0] == w);
  }
}

TEST_CASE("single interval rounds zero to either end with probability one half") {
  Rng rng = make_stream(2, {});
  const std::size_t n = 100000;
  std::size_t upper = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto q = quantize(Vector{0.0}, 2.0, 1.0, rng);
    REQUIRE(q.num_intervals == 1);
    upper += static_cast<std::size_t>(q.levels[0]);
  }
  const double se = std::sqrt(0.25 / n);
  CHECK(std::abs(static_cast<double>(upper) / n - 0.5) <= 5 * se);
}

TEST_CASE("right edge maps to the top level") {
  Rng rng = make_stream(3, {});
  const auto q = quantize(Vector{1.0}, 0.3, 1.0, rng);
  CHECK(q.levels[0] == q.num_intervals);
}

TEST_CASE("deterministic accuracy on random inputs") {
  Rng rng = make_stream(4, {});
  std::uniform_real_distribution<double> u;
  for (int i = 0; i < 5000; ++i) {
    const std::size_t d = 1 + static_cast<std::size_t>(u(rng) * 20);
    const double r = 0.1 + 5.0 * u(rng);
    const double eps = r * (0.001 + u(rng));
    Vector y = testing::random_vector(d, 1.0, rng);
    const double scale = r * u(rng) / norm2(y);
    for (double& v : y) v *= scale;
    const auto q = quantize(y, eps, r, rng);
    CHECK(q.num_intervals == static_cast<std::int64_t>(std::ceil(2 * r * std::sqrt(double(d)) / eps)));
    const Vector z = dequantize(q);
    double err2 = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      CHECK(q.levels[c] >= 0);
      CHECK(q.levels[c] <= q.num_intervals);
      const double e = std::abs(z[c] - y[c]);
      CHECK(e <= 2 * r / q.num_intervals * (1 + 1e-12));
      err2 += e * e;
    }
    CHECK(std::sqrt(err2) <= eps);
  }
}

TEST_CASE("quantization is unbiased") {
  Rng rng = make_stream(5, {});
  const Vector y{0.123, -0.456, 0.0101, 0.37};
  const double eps = 0.2, r = 1.0;
  const std::size_t n = 100000;
  Vector sum(4, 0.0), sum_sq(4, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector z = dequantize(quantize(y, eps, r, rng));
    for (int c = 0; c < 4; ++c) {
      sum[c] += z[c] - y[c];
      sum_sq[c] += (z[c] - y[c]) * (z[c] - y[c]);
    }
  }
  for (int c = 0; c < 4; ++c) {
    const double mean = sum[c] / n;
    const double se = std::sqrt((sum_sq[c] / n - mean * mean) / n);
    CHECK(std::abs(mean) <= 5 * se);
  }
}

TEST_CASE("quantization noise is sub-Gaussian with proxy (eps/sqrt(d))^2/4") {
  Rng rng = make_stream(6, {});
  const std::size_t d = 4;
  const double eps = 0.5, r = 1.0;
  const Vector y{0.31, -0.17, 0.05, 0.6};
  const double proxy = eps * eps / d / 4.0;
  const std::size_t n = 50000;
  std::vector<double> errors;
  for (std::size_t i = 0; i < n; ++i) {
    const Vector z = dequantize(quantize(y, eps, r, rng));
    errors.push_back(z[0] - y[0]);
  }
  for (double lam_scale : {-8.0, -4.0, -1.0, 1.0, 4.0, 8.0}) {
    const double lambda = lam_scale / std::sqrt(proxy);
    double mgf = 0.0;
    for (double e : errors) mgf += std::exp(lambda * e);
    mgf /= n;
    CHECK(mgf <= std::exp(lambda * lambda * proxy / 2.0) * 1.02);
  }
}

TEST_CASE("norm above the radius violates the precondition") {
  Rng rng = make_stream(7, {});
  CHECK_THROWS_AS(quantize(Vector{0.8, 0.8}, 0.1, 1.0, rng), PreconditionError);
  CHECK_THROWS_AS(quantize(Vector{0.1}, 0.0, 1.0, rng), InputError);
}

TEST_CASE("signed offsets convert losslessly") {
  Rng rng = make_stream(8, {});
  const auto q = quantize(Vector{0.4, -0.8, 0.0}, 0.05, 1.0, rng);
  const auto offsets = signed_offsets(q);
  for (std::size_t c = 0; c < 3; ++c) CHECK(offsets[c] == q.levels[c] - q.num_intervals / 2);
  CHECK(from_signed_offsets(offsets, q.precision, q.radius, q.num_intervals) == q);
  CHECK_THROWS_AS(from_signed_offsets(std::vector<std::int64_t>{q.num_intervals}, 0.05, 1.0,
                                      q.num_intervals),
                  CorruptionError);
}

TEST_CASE("clip_to_radius scales long vectors only") {
  Vector a{3.0, 4.0};
  CHECK(clip_to_radius(a, 1.0));
  CHECK(norm2(a) <= 1.0);
  CHECK(norm2(a) == doctest::Approx(1.0));
  Vector b{0.3, 0.4};
  CHECK_FALSE(clip_to_radius(b, 1.0));
  CHECK(b == Vector{0.3, 0.4});
}
