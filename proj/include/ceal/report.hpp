#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "ceal/comparison.hpp"
#include "ceal/config.hpp"
#include "ceal/metrics.hpp"
#include "ceal/trace.hpp"

namespace ceal {

using Json = nlohmann::json;

// Written into every JSON artifact.
inline constexpr const char* kSchemaVersion = "cealsim-1";

// Columns: t, cumulative_regret, bits_up, bits_down, k, j. One row per
// timestep; bit columns are cumulative and include the messages sent at the
// end of that timestep. Minibatch rows use j = 0.
void write_trace_csv(std::ostream& out, const RunTrace& trace);
std::string trace_csv(const RunTrace& trace);

Json to_json(const RunSummary& summary);
RunSummary run_summary_from_json(const Json& j);
Json to_json(const LinearFit& fit);
Json to_json(const ScalingReport& report);
Json to_json(const MatchedComparison& comparison);
Json to_json(const RunSpec& spec);

// Single-run summary: spec echo, totals, events and per-epoch records.
Json run_summary_json(const RunSpec& spec, const RunTrace& trace);

// Runs the configured algorithm on the configured instance.
RunTrace execute_run(const RunSpec& spec);
RunSummary summarize_run(const RunSpec& spec, const RunTrace& trace);

// Writes via a temporary file and rename, so readers never see partial output.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace ceal
