#include <doctest.h>

#include <cmath>

#include "ceal/errors.hpp"
#include "ceal/schedule.hpp"

using namespace ceal;

namespace {

ScheduleConstants constants(double sigma, std::size_t m, std::size_t d, double delta = 0.05) {
  ScheduleConstants c;
  c.sigma = sigma;
  c.clients = m;
  c.dim = d;
  c.delta = delta;
  return c;
}

}  // namespace

TEST_CASE("first sub-epoch values") {
  const auto p = params_for(1, constants(1.0, 1, 1, 0.1));
  CHECK(p.samples == 813);
  CHECK(p.tau == 0.75);
  CHECK(params_for(2, constants(1.0, 1, 1, 0.1)).tau == 0.375);
  CHECK(p.norm_bound == 1.0);
}

TEST_CASE("parameters match an independent evaluation") {
  const double sigma = 1.3, delta = 0.02, g0 = 0.3, f0 = 0.7;
  const std::size_t m = 5, d = 7;
  ScheduleConstants c = constants(sigma, m, d, delta);
  c.gamma0 = g0;
  c.phi0 = f0;
  for (int j = 1; j <= 8; ++j) {
    const auto p = params_for(j, c);
    const double jj = j;
    const double s = std::ceil(40 * sigma * sigma * std::log(16 * m * jj * jj / delta) *
                               std::pow(4.0, jj) / m);
    CHECK(p.samples == static_cast<std::uint64_t>(s));
    CHECK(p.tau == doctest::Approx(3 * std::pow(2.0, -(jj + 1))));
    const double g = 4 * sigma / std::sqrt(s) * (1 + std::sqrt(std::log(4 * m * jj * jj / delta) / (2 * d)));
    CHECK(p.client_error == doctest::Approx(g));
    CHECK(p.norm_bound == doctest::Approx(std::min(5 * 3 * std::pow(2.0, -jj), 1.0)));
    CHECK(p.gamma == doctest::Approx(g0 * sigma / std::sqrt(s)));
    CHECK(p.phi == doctest::Approx(f0 * p.tau));
    CHECK(p.uplink_radius() == doctest::Approx(g + p.norm_bound));
    CHECK(p.downlink_radius() == doctest::Approx(p.norm_bound + p.tau));
  }
}

TEST_CASE("tau halves and samples grow") {
  const Schedule s(constants(1.0, 8, 4));
  for (int j = 1; j < 20; ++j) {
    CHECK(s.at(j + 1).tau / s.at(j).tau == 0.5);
    const double ratio = static_cast<double>(s.at(j + 1).samples) / static_cast<double>(s.at(j).samples);
    CHECK(ratio > 4.0);
    if (j >= 5) {
      CHECK(ratio >= 3.9);
      CHECK(ratio <= 4.2);
    }
  }
}

TEST_CASE("client error vanishes while gamma/G stays bounded") {
  const Schedule s(constants(1.0, 8, 4));
  double lo = INFINITY, hi = 0.0;
  for (int j = 1; j <= 25; ++j) {
    const double r = s.at(j).gamma / s.at(j).client_error;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(s.at(25).client_error < 1e-6);
  CHECK(hi / lo < 2.0);
  CHECK(hi < 0.5 / 4.0);  // gamma0 / 4
}

TEST_CASE("zero noise clamps samples to one") {
  const Schedule s(constants(0.0, 3, 2));
  for (int j = 1; j <= 10; ++j) {
    CHECK(s.at(j).samples == 1);
    CHECK(s.at(j).client_error == 0.0);
  }
}

TEST_CASE("invalid constants are rejected") {
  CHECK_THROWS_AS(params_for(0, constants(1, 1, 1)), InputError);
  CHECK_THROWS_AS(params_for(1, constants(-1, 1, 1)), InputError);
  CHECK_THROWS_AS(params_for(1, constants(1, 0, 1)), InputError);
  CHECK_THROWS_AS(params_for(1, constants(1, 1, 0)), InputError);
  CHECK_THROWS_AS(params_for(1, constants(1, 1, 1, 1.0)), InputError);
  auto c = constants(1, 1, 1);
  c.gamma0 = 0.0;
  CHECK_THROWS_AS(params_for(1, c), InputError);
  c = constants(1, 1, 1);
  c.phi0 = 1.5;
  CHECK_THROWS_AS(params_for(1, c), InputError);
}

TEST_CASE("last reachable level respects the budget") {
  const Schedule s(constants(1.0, 8, 8));
  for (std::uint64_t budget : {100ULL, 1000ULL, 10000ULL, 100000ULL}) {
    const int j = s.last_reachable(budget);
    std::uint64_t used = 0;
    for (int i = 1; i <= j; ++i) used += s.at(i).samples;
    CHECK(j >= 1);
    CHECK((used <= budget || j == 1));
    CHECK(used + s.at(j + 1).samples > budget);
  }
}
