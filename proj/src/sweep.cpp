#include "ceal/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "ceal/comparison.hpp"

namespace ceal {

namespace fs = std::filesystem;

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::map<std::string, RunSummary> load_manifest(const fs::path& path) {
  std::map<std::string, RunSummary> done;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    // A torn final line from an interrupted append is ignored; that run
    // simply reruns.
    const Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("id") || !j.contains("summary")) continue;
    done[j.at("id").get<std::string>()] = run_summary_from_json(j.at("summary"));
  }
  return done;
}

Json fit_or_error(const std::function<Json()>& fit) {
  try {
    return fit();
  } catch (const InputError& e) {
    return {{"error", e.what()}};
  }
}

}  // namespace

std::vector<SweepRun> expand_sweep(const SweepSpec& spec) {
  std::vector<SweepRun> runs;
  for (Algo algo : spec.algos) {
    const std::vector<std::uint64_t> batches =
        algo == Algo::minibatch ? spec.batch_sizes : std::vector<std::uint64_t>{0};
    for (auto batch : batches) {
      for (auto m : spec.clients) {
        for (auto t : spec.horizons) {
          for (auto d : spec.dims) {
            for (auto sigma : spec.sigmas) {
              for (std::size_t s = 0; s < spec.seeds; ++s) {
                const std::uint64_t seed = spec.base_seed + s;
                KeyValueConfig cell = spec.base;
                cell.set("algo", to_string(algo));
                cell.set("clients", std::to_string(m));
                cell.set("horizon", std::to_string(t));
                cell.set("dim", std::to_string(d));
                cell.set("sigma", format_number(sigma));
                cell.set("seed", std::to_string(seed));
                std::string id = to_string(algo);
                if (algo == Algo::minibatch) {
                  cell.set("batch_size", std::to_string(batch));
                  id += "_b" + std::to_string(batch);
                }
                id += "_M" + std::to_string(m) + "_T" + std::to_string(t) + "_d" +
                      std::to_string(d) + "_sigma" + short_number(sigma) + "_seed" +
                      std::to_string(seed);
                runs.push_back({id, run_spec_from(cell)});
              }
            }
          }
        }
      }
    }
  }
  return runs;
}

SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options) {
  const std::vector<SweepRun> runs = expand_sweep(spec);
  const fs::path out_dir(spec.output_dir);
  const fs::path runs_dir = out_dir / "runs";
  const fs::path manifest_path = out_dir / "manifest.jsonl";
  fs::create_directories(runs_dir);

  std::map<std::string, RunSummary> done = load_manifest(manifest_path);
  std::vector<std::size_t> pending;
  SweepResult result;
  result.total = runs.size();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const bool finished =
        done.count(runs[i].id) != 0 && fs::exists(runs_dir / (runs[i].id + ".csv"));
    if (finished) {
      ++result.skipped;
    } else {
      done.erase(runs[i].id);
      pending.push_back(i);
    }
  }

  const std::size_t budget = options.max_new_runs.value_or(pending.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mutex;
  std::ofstream manifest(manifest_path, std::ios::app);
  if (!manifest) throw std::runtime_error("cannot open " + manifest_path.string());

  auto worker = [&] {
    while (!failed) {
      const std::size_t slot = next++;
      if (slot >= pending.size() || slot >= budget) return;
      const SweepRun& run = runs[pending[slot]];
      try {
        const RunTrace trace = execute_run(run.spec);
        write_file_atomic((runs_dir / (run.id + ".csv")).string(), trace_csv(trace));
        const RunSummary summary = summarize_run(run.spec, trace);
        const Json line = {{"id", run.id}, {"summary", to_json(summary)}};
        std::lock_guard lock(mutex);
        manifest << line.dump() << '\n' << std::flush;
        done[run.id] = summary;
        ++result.executed;
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(spec.workers, pending.size()));
  std::vector<std::thread> threads;
  for (std::size_t w = 1; w < workers; ++w) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);

  result.complete = result.skipped + result.executed == result.total;
  if (!result.complete) return result;

  std::vector<RunSummary> summaries;
  summaries.reserve(runs.size());
  for (const auto& run : runs) summaries.push_back(done.at(run.id));
  const fs::path summary_path = out_dir / "summary.json";
  write_file_atomic(summary_path.string(), sweep_summary(spec, summaries).dump(2) + "\n");
  result.summary_path = summary_path.string();
  return result;
}

Json sweep_summary(const SweepSpec& spec, const std::vector<RunSummary>& runs) {
  Json out;
  out["schema_version"] = kSchemaVersion;
  Json grid = {{"clients", spec.clients},   {"horizons", spec.horizons}, {"dims", spec.dims},
               {"sigmas", spec.sigmas},     {"seeds", spec.seeds},       {"base_seed", spec.base_seed},
               {"batch_sizes", spec.batch_sizes}};
  Json algos = Json::array();
  for (Algo a : spec.algos) algos.push_back(to_string(a));
  grid["algos"] = algos;
  grid["overrides"] = spec.base.entries();
  out["grid"] = grid;

  Json run_list = Json::array();
  for (const auto& r : runs) run_list.push_back(to_json(r));
  out["runs"] = run_list;

  // Fits per (algo, batch size, sigma); log(MT) fits additionally per d.
  std::map<std::tuple<std::string, std::uint64_t, double>, std::vector<RunSummary>> groups;
  for (const auto& r : runs) groups[{r.algo, r.batch_size, r.sigma}].push_back(r);
  ScalingOptions fit_opts;
  fit_opts.min_seeds = 1;
  Json fits = Json::array();
  for (const auto& [key, members] : groups) {
    const auto& [algo, batch, sigma] = key;
    Json g = {{"algo", algo}, {"batch_size", batch}, {"sigma", sigma}};
    std::map<std::size_t, std::vector<RunSummary>> by_dim;
    for (const auto& r : members) by_dim[r.dim].push_back(r);
    Json per_dim = Json::array();
    for (const auto& [d, rs] : by_dim) {
      per_dim.push_back(
          {{"dim", d},
           {"regret_log_mt",
            fit_or_error([&] { return to_json(regret_scaling_fit(rs, ScalingModel::log_mt, fit_opts)); })},
           {"regret_linear_t",
            fit_or_error([&] { return to_json(regret_scaling_fit(rs, ScalingModel::t, fit_opts)); })},
           {"rounds_log_mt", fit_or_error([&] { return to_json(rounds_scaling_fit(rs, fit_opts)); })},
           {"bits_log_mt", fit_or_error([&] {
              const auto b = bits_scaling_fit(rs, ScalingModel::log_mt, fit_opts);
              return Json{{"uplink", to_json(b.uplink)}, {"downlink", to_json(b.downlink)}};
            })}});
    }
    g["by_dim"] = per_dim;
    g["bits_d_log_mt"] = fit_or_error([&] {
      const auto b = bits_scaling_fit(members, ScalingModel::d_log_mt, fit_opts);
      return Json{{"uplink", to_json(b.uplink)}, {"downlink", to_json(b.downlink)}};
    });
    fits.push_back(g);
  }
  out["fits"] = fits;

  const bool both = std::count(spec.algos.begin(), spec.algos.end(), Algo::ceal) > 0 &&
                    std::count(spec.algos.begin(), spec.algos.end(), Algo::minibatch) > 0;
  if (!both) return out;

  // Matched-regret bit comparison per grid cell.
  struct CellStats {
    double regret = 0.0;
    double bits = 0.0;
    std::size_t n = 0;
    double step = 0.0;
  };
  using CellKey = std::tuple<std::size_t, std::uint64_t, std::size_t, double>;
  std::map<CellKey, CellStats> ceal_cells;
  std::map<std::pair<CellKey, std::uint64_t>, CellStats> mb_cells;
  for (const auto& r : runs) {
    const CellKey key{r.clients, r.horizon, r.dim, r.sigma};
    CellStats& c = r.algo == "ceal" ? ceal_cells[key] : mb_cells[{key, r.batch_size}];
    c.regret += r.final_regret;
    c.bits += static_cast<double>(r.uplink_bits + r.downlink_bits);
    c.step = r.step_size;
    ++c.n;
  }
  std::vector<std::uint64_t> seeds;
  for (std::size_t s = 0; s < spec.seeds; ++s) seeds.push_back(spec.base_seed + s);

  Json table = Json::array();
  for (const auto& [key, cs] : ceal_cells) {
    const auto& [m, t, d, sigma] = key;
    const double ceal_regret = cs.regret / static_cast<double>(cs.n);
    const double ceal_bits = cs.bits / static_cast<double>(cs.n);
    Json row = {{"clients", m},          {"horizon", t},          {"dim", d},
                {"sigma", sigma},        {"ceal_regret", ceal_regret},
                {"ceal_bits", ceal_bits}};
    Json entries = Json::array();
    for (auto batch : spec.batch_sizes) {
      const auto it = mb_cells.find({key, batch});
      if (it == mb_cells.end()) continue;
      const CellStats& mb = it->second;
      Json e = {{"batch_size", batch},
                {"configured_step", mb.step},
                {"configured_regret", mb.regret / static_cast<double>(mb.n)},
                {"configured_bits", mb.bits / static_cast<double>(mb.n)}};
      if (spec.match_regret) {
        KeyValueConfig cell = spec.base;
        cell.set("algo", "minibatch");
        cell.set("clients", std::to_string(m));
        cell.set("horizon", std::to_string(t));
        cell.set("dim", std::to_string(d));
        cell.set("sigma", format_number(sigma));
        cell.set("batch_size", std::to_string(batch));
        const RunSpec rs = run_spec_from(cell);
        const ProblemInstance instance = build_instance(rs.instance);
        e["matched"] = to_json(
            match_minibatch(instance, ceal_regret, ceal_bits, batch, seeds, rs.minibatch));
      }
      entries.push_back(e);
    }
    row["minibatch"] = entries;
    table.push_back(row);
  }
  out["comparison"] = table;
  return out;
}

}  // namespace ceal
