#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ceal/config.hpp"
#include "ceal/metrics.hpp"
#include "ceal/report.hpp"

namespace ceal {

struct SweepRun {
  std::string id;  // also the trace file stem
  RunSpec spec;
};

// Grid (algo x batch size x M x T x d x sigma) crossed with seeds
// base_seed, base_seed + 1, ...; order is fixed and defines summary order.
std::vector<SweepRun> expand_sweep(const SweepSpec& spec);

struct SweepOptions {
  // Stop after this many newly executed runs (leaves the sweep incomplete;
  // used to simulate an interruption).
  std::optional<std::size_t> max_new_runs;
};

struct SweepResult {
  std::size_t total = 0;
  std::size_t executed = 0;
  std::size_t skipped = 0;  // already in the manifest
  bool complete = false;
  std::string summary_path;  // empty when incomplete
};

// Layout under spec.output_dir:
//   runs/<id>.csv    per-run trace
//   manifest.jsonl   one line per finished run ({"id", "summary"})
//   summary.json     written once every run is in the manifest
// Runs already listed in the manifest (with their CSV present) are skipped.
SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options = {});

// Aggregated report: runs, scaling fits per (algo, batch size, sigma) and,
// when both algorithms are present, the matched-regret bit comparison.
Json sweep_summary(const SweepSpec& spec, const std::vector<RunSummary>& runs);

}  // namespace ceal
