#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "ceal/acceptance.hpp"
#include "ceal/config.hpp"
#include "ceal/report.hpp"
#include "ceal/sweep.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kAcceptanceFailed = 1,
  kMissingFile = 2,
  kSchema = 3,
  kRange = 4,
  kRuntime = 5,
};

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed) {
  ceal::KeyValueConfig cfg = ceal::KeyValueConfig::load(config_path);
  if (seed) cfg.set("seed", std::to_string(*seed));
  const ceal::RunSpec spec = ceal::run_spec_from(cfg);
  const ceal::RunTrace trace = ceal::execute_run(spec);
  const std::filesystem::path out(out_dir);
  ceal::write_file_atomic((out / "trace.csv").string(), ceal::trace_csv(trace));
  ceal::write_file_atomic((out / "summary.json").string(),
                          ceal::run_summary_json(spec, trace).dump(2) + "\n");
  std::cout << ceal::to_string(spec.algo) << ": final regret " << trace.final_regret()
            << ", uplink bits " << trace.uplink_bits_total << ", downlink bits "
            << trace.downlink_bits_total << ", rounds " << trace.num_rounds << "\n"
            << "wrote " << (out / "trace.csv").string() << " and " << (out / "summary.json").string()
            << "\n";
  return kOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              std::optional<std::size_t> workers, std::optional<std::uint64_t> seed,
              std::optional<std::size_t> max_runs) {
  ceal::KeyValueConfig cfg = ceal::KeyValueConfig::load(config_path);
  if (seed) cfg.set("base_seed", std::to_string(*seed));
  if (!out_dir.empty()) cfg.set("output_dir", out_dir);
  if (workers) cfg.set("workers", std::to_string(*workers));
  const ceal::SweepSpec spec = ceal::sweep_spec_from(cfg);
  ceal::SweepOptions options;
  options.max_new_runs = max_runs;
  const ceal::SweepResult res = ceal::run_sweep(spec, options);
  std::cout << "runs: " << res.total << " total, " << res.executed << " executed, " << res.skipped
            << " already done\n";
  if (res.complete) {
    std::cout << "wrote " << res.summary_path << "\n";
  } else {
    std::cout << "sweep incomplete; rerun to resume\n";
  }
  return kOk;
}

int cmd_accept(const std::set<int>& only, std::uint64_t seed, const std::string& out_dir) {
  ceal::AcceptanceOptions options;
  options.only = only;
  options.seed = seed;
  options.log = &std::cout;
  const auto results = ceal::run_acceptance(options);
  std::size_t passed = 0;
  ceal::Json report = {{"schema_version", ceal::kSchemaVersion}, {"seed", seed}};
  ceal::Json rows = ceal::Json::array();
  for (const auto& r : results) {
    passed += r.passed ? 1 : 0;
    rows.push_back({{"id", r.id},
                    {"name", r.name},
                    {"passed", r.passed},
                    {"detail", r.detail},
                    {"limit_seconds", r.limit_seconds}});
  }
  report["criteria"] = rows;
  std::cout << passed << "/" << results.size() << " criteria passed\n";
  if (!out_dir.empty()) {
    ceal::write_file_atomic((std::filesystem::path(out_dir) / "acceptance.json").string(),
                            report.dump(2) + "\n");
  }
  return passed == results.size() ? kOk : kAcceptanceFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Communication-efficient distributed SGD simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string run_out;
  std::string sweep_out;
  std::string accept_out;
  std::optional<std::size_t> workers;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_runs;
  std::set<int> only;

  auto* run = app.add_subcommand("run", "Run a single experiment");
  run->add_option("--config", config_path, "Run config file")->required();
  run->add_option("--out", run_out, "Output directory")->default_val("run_out");
  run->add_option("--seed", seed, "Override the config seed");

  auto* sweep = app.add_subcommand("sweep", "Run a grid of experiments");
  sweep->add_option("--config", config_path, "Sweep spec file")->required();
  sweep->add_option("--out", sweep_out, "Output directory (overrides output_dir)");
  sweep->add_option("--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed, "Override base_seed");
  sweep->add_option("--max-runs", max_runs, "Stop after this many new runs");

  auto* accept = app.add_subcommand("accept", "Run the acceptance suite");
  accept->add_option("--only", only, "Criterion ids to run")->delimiter(',');
  accept->add_option("--seed", seed, "Base seed");
  accept->add_option("--out", accept_out, "Directory for acceptance.json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, run_out, seed);
    if (sweep->parsed()) return cmd_sweep(config_path, sweep_out, workers, seed, max_runs);
    return cmd_accept(only, seed.value_or(1), accept_out);
  } catch (const ceal::ConfigFileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMissingFile;
  } catch (const ceal::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kSchema;
  } catch (const ceal::RangeError& e) {
    std::cerr << "range error: " << e.what() << "\n";
    return kRange;
  } catch (const ceal::InputError& e) {
    std::cerr << "range error: " << e.what() << "\n";
    return kRange;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kRuntime;
  }
}
