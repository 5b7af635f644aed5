#include <doctest.h>

#include <cmath>

#include "ceal/errors.hpp"
#include "ceal/metrics.hpp"

using namespace ceal;

namespace {

std::vector<RunSummary> synthetic(const std::function<double(std::size_t, std::uint64_t, std::size_t)>& value,
                                  std::vector<std::size_t> ms, std::vector<std::uint64_t> ts,
                                  std::vector<std::size_t> ds = {4}, std::size_t seeds = 10) {
  std::vector<RunSummary> runs;
  for (auto m : ms) {
    for (auto t : ts) {
      for (auto d : ds) {
        for (std::size_t s = 0; s < seeds; ++s) {
          RunSummary r;
          r.algo = "ceal";
          r.clients = m;
          r.horizon = t;
          r.dim = d;
          r.seed = s;
          const double v = value(m, t, d);
          r.final_regret = v;
          r.num_rounds = static_cast<std::uint64_t>(std::llround(v));
          r.uplink_bits = static_cast<std::uint64_t>(std::llround(v * 1000));
          r.downlink_bits = static_cast<std::uint64_t>(std::llround(v * 500));
          runs.push_back(r);
        }
      }
    }
  }
  return runs;
}

}  // namespace

TEST_CASE("fit_line recovers an exact line") {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{3, 5, 7, 9};
  const LinearFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.n == 4);
  CHECK_THROWS_AS(fit_line(std::vector<double>{1}, std::vector<double>{1}), InputError);
}

TEST_CASE("log(MT) regret is recovered exactly") {
  const auto runs = synthetic([](std::size_t m, std::uint64_t t, std::size_t) {
    return 3.5 * std::log(static_cast<double>(m) * t);
  }, {2, 8, 32}, {1000, 10000, 100000});
  const ScalingReport r = regret_scaling_fit(runs, ScalingModel::log_mt);
  CHECK(r.fit.slope == doctest::Approx(3.5));
  CHECK(r.fit.intercept == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r.fit.r2 == doctest::Approx(1.0));
  CHECK(r.ratio_spread() == doctest::Approx(1.0));
  CHECK(r.points.size() == 9);
  CHECK(r.max_confidence_ratio > 0.0);
}

TEST_CASE("linear-in-T regret is not mistaken for log(MT)") {
  const auto runs = synthetic([](std::size_t, std::uint64_t t, std::size_t) { return 0.7 * t; }, {2, 8, 32},
                              {1000, 10000, 100000});
  CHECK(regret_scaling_fit(runs, ScalingModel::log_mt).fit.r2 < 0.9);
  CHECK(regret_scaling_fit(runs, ScalingModel::t).fit.r2 == doctest::Approx(1.0));
}

TEST_CASE("d log(MT) bits are recovered exactly") {
  const auto runs = synthetic([](std::size_t m, std::uint64_t t, std::size_t d) {
    return 2.0 * d * std::log(static_cast<double>(m) * t);
  }, {2, 8}, {1000, 100000}, {2, 8});
  const BitsScalingReport b = bits_scaling_fit(runs, ScalingModel::d_log_mt);
  CHECK(b.uplink.fit.slope == doctest::Approx(2000.0).epsilon(1e-4));
  CHECK(b.uplink.fit.r2 == doctest::Approx(1.0));
  CHECK(b.downlink.fit.slope == doctest::Approx(1000.0).epsilon(1e-4));
}

TEST_CASE("insufficient grids are input errors") {
  auto f = [](std::size_t, std::uint64_t t, std::size_t) { return std::log(double(t)); };
  CHECK_THROWS_AS(regret_scaling_fit(synthetic(f, {2}, {10, 100}), ScalingModel::log_mt), InputError);
  CHECK_THROWS_AS(regret_scaling_fit(synthetic(f, {2, 4}, {10, 100}, {4}, 3), ScalingModel::log_mt),
                  InputError);
}

TEST_CASE("quantile band brackets the mean") {
  CHECK(empirical_quantile({1, 2, 3, 4, 5}, 0.0) == 1.0);
  CHECK(empirical_quantile({1, 2, 3, 4, 5}, 1.0) == 5.0);
  CHECK(empirical_quantile({5, 1, 3}, 0.5) == 3.0);
  std::vector<RunSummary> runs = synthetic([](std::size_t m, std::uint64_t t, std::size_t) {
    return std::log(double(m) * t);
  }, {2, 8, 32}, {1000, 10000});
  for (std::size_t i = 0; i < runs.size(); ++i) runs[i].final_regret += static_cast<double>(i % 10);
  const ScalingReport r = regret_scaling_fit(runs, ScalingModel::log_mt);
  for (const auto& p : r.points) {
    CHECK(p.lower <= p.mean);
    CHECK(p.mean <= p.upper);
    CHECK(p.runs == 10);
  }
}
