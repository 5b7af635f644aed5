#include <doctest.h>

#include <cmath>

#include "ceal/minibatch.hpp"
#include "support.hpp"

using namespace ceal;

TEST_CASE("noiseless minibatch is gradient descent") {
  const auto p = testing::quadratic({0.8}, {0.0}, 1.2, 0.0, 2, 100);
  MinibatchConfig cfg;
  cfg.batch_size = 10;
  cfg.step_size = 0.1;
  cfg.start = {StartKind::list, {1.0}};
  const RunTrace trace = run_minibatch(p, cfg);
  REQUIRE(trace.iterates.size() == 11);
  double x = 1.0;
  for (const auto& it : trace.iterates) {
    CHECK(it[0] == doctest::Approx(x).epsilon(1e-14));
    x -= 0.1 * 0.8 * x;
  }
}

TEST_CASE("full-precision bit accounting") {
  const ProblemInstance p = build_instance(testing::standard(3, 5, 1050, 1.0));
  MinibatchConfig cfg;
  cfg.batch_size = 100;
  const RunTrace trace = run_minibatch(p, cfg);
  const std::uint64_t rounds = 10;  // the final 50 samples form a partial batch
  CHECK(trace.num_rounds == rounds);
  CHECK(trace.uplink_bits_total == rounds * 3 * 5 * 64);
  CHECK(trace.downlink_bits_total == rounds * 5 * 64);
  CHECK(trace.per_step_regret.size() == 1050);
  CHECK_FALSE(trace.segments.back().completed);
  CHECK(trace.segments.back().samples == 50);
  cfg.float_bits = 32;
  CHECK(run_minibatch(p, cfg).uplink_bits_total == rounds * 3 * 5 * 32);
}

TEST_CASE("minibatch traces share the CEAL schema and are deterministic") {
  const ProblemInstance p = build_instance(testing::standard(2, 3, 5000, 1.0));
  MinibatchConfig cfg;
  cfg.seed = 4;
  const RunTrace a = run_minibatch(p, cfg);
  CHECK(a == run_minibatch(p, cfg));
  CHECK(a.algo == "minibatch");
  for (const auto& seg : a.segments) CHECK(seg.j == 0);
  CHECK(std::abs(regret_from_epochs(a) / a.final_regret() - 1.0) <= 1e-10);
  std::uint64_t up = 0;
  for (const auto& e : a.epochs) up += e.uplink_bits;
  CHECK(up == a.uplink_bits_total);
}
