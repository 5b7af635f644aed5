#include "ceal/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ceal/minibatch.hpp"
#include "ceal/protocol.hpp"

namespace ceal {

namespace {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json events_json(const ProtocolEvents& e) {
  return {{"radius_clips", e.radius_clips}, {"capacity_violations", e.capacity_violations}};
}

}  // namespace

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << "t,cumulative_regret,bits_up,bits_down,k,j\n";
  std::uint64_t up = 0;
  std::uint64_t down = 0;
  for (const Segment& seg : trace.segments) {
    for (std::uint64_t i = 0; i < seg.samples; ++i) {
      const std::uint64_t t = seg.start_t + i;
      if (i + 1 == seg.samples) {
        up += seg.uplink_bits;
        down += seg.downlink_bits;
      }
      out << t << ',' << format_real(trace.per_step_regret.at(t - 1)) << ',' << up << ',' << down
          << ',' << seg.k << ',' << seg.j << '\n';
    }
  }
}

std::string trace_csv(const RunTrace& trace) {
  std::ostringstream os;
  write_trace_csv(os, trace);
  return os.str();
}

Json to_json(const RunSummary& s) {
  return {{"algo", s.algo},
          {"clients", s.clients},
          {"horizon", s.horizon},
          {"dim", s.dim},
          {"sigma", s.sigma},
          {"seed", s.seed},
          {"batch_size", s.batch_size},
          {"step_size", s.step_size},
          {"final_regret", s.final_regret},
          {"uplink_bits", s.uplink_bits},
          {"downlink_bits", s.downlink_bits},
          {"num_rounds", s.num_rounds},
          {"events", events_json(s.events)}};
}

RunSummary run_summary_from_json(const Json& j) {
  RunSummary s;
  s.algo = j.at("algo").get<std::string>();
  s.clients = j.at("clients").get<std::size_t>();
  s.horizon = j.at("horizon").get<std::uint64_t>();
  s.dim = j.at("dim").get<std::size_t>();
  s.sigma = j.at("sigma").get<double>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.batch_size = j.at("batch_size").get<std::uint64_t>();
  s.step_size = j.at("step_size").get<double>();
  s.final_regret = j.at("final_regret").get<double>();
  s.uplink_bits = j.at("uplink_bits").get<std::uint64_t>();
  s.downlink_bits = j.at("downlink_bits").get<std::uint64_t>();
  s.num_rounds = j.at("num_rounds").get<std::uint64_t>();
  s.events.radius_clips = j.at("events").at("radius_clips").get<std::uint64_t>();
  s.events.capacity_violations = j.at("events").at("capacity_violations").get<std::uint64_t>();
  return s;
}

Json to_json(const LinearFit& fit) {
  return {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r2}, {"n", fit.n}};
}

Json to_json(const ScalingReport& report) {
  Json points = Json::array();
  for (const auto& p : report.points) {
    points.push_back({{"clients", p.clients},
                      {"horizon", p.horizon},
                      {"dim", p.dim},
                      {"runs", p.runs},
                      {"x", p.x},
                      {"mean", p.mean},
                      {"lower", p.lower},
                      {"upper", p.upper},
                      {"ratio", p.ratio}});
  }
  return {{"quantity", report.quantity},
          {"model", to_string(report.model)},
          {"fit", to_json(report.fit)},
          {"max_ratio", report.max_ratio},
          {"min_ratio", report.min_ratio},
          {"ratio_spread", report.ratio_spread()},
          {"max_confidence_ratio", report.max_confidence_ratio},
          {"points", points}};
}

Json to_json(const MatchedComparison& c) {
  return {{"batch_size", c.batch_size},
          {"ceal_regret", c.ceal_regret},
          {"ceal_bits", c.ceal_bits},
          {"minibatch_regret", c.minibatch_regret},
          {"minibatch_bits", c.minibatch_bits},
          {"minibatch_step", c.minibatch_step},
          {"matched", c.matched},
          {"ceal_fewer_bits", c.ceal_fewer_bits()}};
}

Json to_json(const RunSpec& spec) {
  const InstanceSpec& in = spec.instance;
  Json j = {{"algo", to_string(spec.algo)},
            {"dim", in.dim},
            {"alpha", in.alpha},
            {"beta", in.beta},
            {"sigma", in.sigma},
            {"clients", in.clients},
            {"horizon", in.horizon},
            {"seed", spec.seed()},
            {"instance_seed", in.instance_seed},
            {"noise", to_string(in.noise)},
            {"step_size", spec.step_size()}};
  if (spec.algo == Algo::ceal) {
    j["delta"] = spec.ceal.delta;
    j["gamma0"] = spec.ceal.gamma0;
    j["phi0"] = spec.ceal.phi0;
    j["quantize"] = spec.ceal.quantize.value_or(in.sigma > 0.0);
  } else {
    j["batch_size"] = spec.minibatch.batch_size;
    j["float_bits"] = spec.minibatch.float_bits;
  }
  return j;
}

Json run_summary_json(const RunSpec& spec, const RunTrace& trace) {
  Json epochs = Json::array();
  for (const auto& e : trace.epochs) {
    epochs.push_back({{"k", e.k},
                      {"j_set", e.j_set},
                      {"t_k", e.t_k},
                      {"uplink_bits", e.uplink_bits},
                      {"downlink_bits", e.downlink_bits},
                      {"grad_norm", e.grad_norm_true},
                      {"gap", e.gap},
                      {"completed", e.completed}});
  }
  return {{"schema_version", kSchemaVersion},
          {"config", to_json(spec)},
          {"final_regret", trace.final_regret()},
          {"uplink_bits", trace.uplink_bits_total},
          {"downlink_bits", trace.downlink_bits_total},
          {"uplink_bits_per_client",
           static_cast<double>(trace.uplink_bits_total) / static_cast<double>(trace.clients)},
          {"num_rounds", trace.num_rounds},
          {"capacity_bits", trace.capacity},
          {"events", events_json(trace.events)},
          {"epochs", epochs}};
}

RunTrace execute_run(const RunSpec& spec) {
  const ProblemInstance instance = build_instance(spec.instance);
  return spec.algo == Algo::ceal ? run_ceal(instance, spec.ceal)
                                 : run_minibatch(instance, spec.minibatch);
}

RunSummary summarize_run(const RunSpec& spec, const RunTrace& trace) {
  return summarize(trace, spec.instance.sigma, spec.step_size(),
                   spec.algo == Algo::minibatch ? spec.minibatch.batch_size : 0);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace ceal
