#include <doctest.h>

#include <sstream>

#include "ceal/report.hpp"
#include "ceal/sweep.hpp"
#include "support.hpp"

using namespace ceal;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("trace CSV has one row per timestep and cumulative bits") {
  RunSpec spec;
  spec.instance = testing::standard(2, 2, 3000, 1.0);
  const RunTrace trace = execute_run(spec);
  const auto rows = lines(trace_csv(trace));
  REQUIRE(rows.size() == 3001);
  CHECK(rows[0] == "t,cumulative_regret,bits_up,bits_down,k,j");
  CHECK(rows[1].rfind("1,", 0) == 0);
  CHECK(rows[3000].rfind("3000,", 0) == 0);

  // The first sub-epoch's uplink appears on its last timestep, not before.
  const Segment& first = trace.segments.front();
  std::istringstream before(rows[first.samples - 1]);
  std::istringstream at(rows[first.samples]);
  std::string field;
  auto column = [&](std::istringstream& in, int idx) {
    in.clear();
    in.seekg(0);
    for (int i = 0; i <= idx; ++i) std::getline(in, field, ',');
    return field;
  };
  CHECK(column(before, 2) == "0");
  CHECK(column(at, 2) == std::to_string(first.uplink_bits));
  std::istringstream last(rows.back());
  CHECK(column(last, 2) == std::to_string(trace.uplink_bits_total));
}

TEST_CASE("summary JSON carries a schema version and totals") {
  RunSpec spec;
  spec.instance = testing::standard(2, 2, 3000, 1.0);
  const RunTrace trace = execute_run(spec);
  const Json j = run_summary_json(spec, trace);
  CHECK(j.at("schema_version") == kSchemaVersion);
  CHECK(j.at("uplink_bits") == trace.uplink_bits_total);
  CHECK(j.at("final_regret").get<double>() == trace.final_regret());
  CHECK(j.at("epochs").size() == trace.epochs.size());
  CHECK(j.at("config").at("algo") == "ceal");
}

TEST_CASE("run summaries survive a JSON roundtrip") {
  RunSummary s;
  s.algo = "minibatch";
  s.clients = 3;
  s.horizon = 77;
  s.dim = 2;
  s.sigma = 0.1;
  s.seed = 5;
  s.batch_size = 10;
  s.step_size = 0.0123456789012345;
  s.final_regret = 1.0 / 3.0;
  s.uplink_bits = 12345678901234ULL;
  s.downlink_bits = 4;
  s.num_rounds = 7;
  s.events.radius_clips = 2;
  CHECK(run_summary_from_json(Json::parse(to_json(s).dump())) == s);
}

TEST_CASE("sweep expansion order and ids") {
  const SweepSpec spec = sweep_spec_from(KeyValueConfig::parse(
      "algos = ceal,minibatch\nclients = 2\nhorizon = 100,200\ndim = 2\nsigma = 0.5\nalpha = 0.5\n"
      "beta = 1\nseeds = 2\nbase_seed = 4\nbatch_sizes = 10\n"));
  const auto runs = expand_sweep(spec);
  REQUIRE(runs.size() == 8);
  CHECK(runs[0].id == "ceal_M2_T100_d2_sigma0.5_seed4");
  CHECK(runs[1].id == "ceal_M2_T100_d2_sigma0.5_seed5");
  CHECK(runs[4].id == "minibatch_b10_M2_T100_d2_sigma0.5_seed4");
  CHECK(runs[4].spec.minibatch.batch_size == 10);
  CHECK(runs[7].spec.seed() == 5);
}
