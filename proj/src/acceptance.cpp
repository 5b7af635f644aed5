#include "ceal/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "ceal/codec.hpp"
#include "ceal/comparison.hpp"
#include "ceal/metrics.hpp"
#include "ceal/norm_estimation.hpp"
#include "ceal/protocol.hpp"
#include "ceal/quantizer.hpp"
#include "ceal/report.hpp"

namespace ceal {

namespace {

struct Check {
  bool passed = false;
  std::string detail;
};

InstanceSpec standard_instance(std::size_t clients, std::size_t dim, std::uint64_t horizon,
                               double sigma) {
  InstanceSpec s;
  s.dim = dim;
  s.alpha = 0.5;
  s.beta = 1.0;
  s.sigma = sigma;
  s.clients = clients;
  s.horizon = horizon;
  return s;
}

std::vector<std::uint64_t> seed_list(std::uint64_t base, std::size_t count) {
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < count; ++i) seeds.push_back(base + i);
  return seeds;
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

Vector random_in_ball(std::size_t d, double r, Rng& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  Vector v(d);
  for (double& x : v) x = normal(rng);
  const double n = norm2(v);
  const double len = r * std::pow(unif(rng), 1.0 / static_cast<double>(d));
  for (double& x : v) x *= len / n;
  return v;
}

Check quantizer_contract(std::uint64_t seed) {
  Rng rng = make_stream(seed, {101});
  std::uniform_int_distribution<std::size_t> dims(1, 32);
  std::uniform_real_distribution<double> unif;
  std::size_t ok = 0;
  double worst = 0.0;
  const std::size_t cases = 10000;
  for (std::size_t i = 0; i < cases; ++i) {
    const std::size_t d = dims(rng);
    const double r = std::pow(10.0, -1.0 + 2.0 * unif(rng));
    const double eps = r * std::pow(10.0, -3.0 + 3.0 * unif(rng));
    Vector y = random_in_ball(d, r, rng);
    if (i % 10 == 0) {
      const double n = norm2(y);
      for (double& x : y) x *= r / n;  // on the sphere
    }
    const QuantizedVector q = quantize(y, eps, r, rng);
    const double err = distance(dequantize(q), y);
    if (err <= eps) ++ok;
    worst = std::max(worst, err / eps);
  }

  // Bias: repeated quantization of one fixed vector.
  const std::size_t d = 4;
  const double r = 1.0;
  const double eps = 0.1;
  const Vector y = {0.3137, -0.5521, 0.0712, -0.2049};
  const std::size_t reps = 100000;
  std::vector<double> sum(d, 0.0), sum_sq(d, 0.0);
  for (std::size_t i = 0; i < reps; ++i) {
    const Vector z = dequantize(quantize(y, eps, r, rng));
    for (std::size_t c = 0; c < d; ++c) {
      const double e = z[c] - y[c];
      sum[c] += e;
      sum_sq[c] += e * e;
    }
  }
  bool unbiased = true;
  double worst_z = 0.0;
  const double n = static_cast<double>(reps);
  for (std::size_t c = 0; c < d; ++c) {
    const double mean = sum[c] / n;
    const double var = std::max(0.0, (sum_sq[c] / n - mean * mean) * n / (n - 1.0));
    const double se = std::sqrt(var / n);
    const double z = se > 0.0 ? std::abs(mean) / se : (mean == 0.0 ? 0.0 : INFINITY);
    worst_z = std::max(worst_z, z);
    if (!(z <= 5.0)) unbiased = false;
  }
  return {ok == cases && unbiased, std::to_string(ok) + "/" + std::to_string(cases) +
                                       " within eps (max err/eps " + fmt(worst) +
                                       "), max |bias|/SE " + fmt(worst_z, 3)};
}

std::string unary_oracle(std::int64_t offset) {
  std::string s = offset >= 0 ? "1" : "0";
  s.append(static_cast<std::size_t>(offset >= 0 ? offset : -offset), '1');
  return s + "0";
}

Check codec_contract(std::uint64_t seed) {
  Rng rng = make_stream(seed, {102});
  std::uniform_int_distribution<std::size_t> dims(1, 32);
  std::uniform_real_distribution<double> unif;
  std::size_t roundtrip = 0;
  std::size_t sized = 0;
  const std::size_t cases = 10000;
  for (std::size_t i = 0; i < cases; ++i) {
    const std::size_t d = dims(rng);
    const double r = std::pow(10.0, -1.0 + 2.0 * unif(rng));
    const double eps = r * std::pow(10.0, -2.0 + 2.0 * unif(rng));
    const QuantizedVector q = quantize(random_in_ball(d, r, rng), eps, r, rng);
    const Message m = encode(q);
    const std::int64_t mid = q.num_intervals / 2;
    std::uint64_t expected = 2 * d;
    for (auto level : q.levels) expected += static_cast<std::uint64_t>(std::llabs(level - mid));
    if (m.bit_count() == expected) ++sized;
    if (decode(m, d, q.precision, q.radius, q.num_intervals) == q) ++roundtrip;
  }
  const std::string minus3 = encode_offsets(std::vector<std::int64_t>{-3}).to_string();
  const std::string plus4 = encode_offsets(std::vector<std::int64_t>{4}).to_string();
  const bool examples = minus3 == "0111" + std::string("0") && plus4 == "11111" + std::string("0") &&
                        minus3 == unary_oracle(-3) && plus4 == unary_oracle(4);
  return {roundtrip == cases && sized == cases && examples,
          "roundtrip " + std::to_string(roundtrip) + "/" + std::to_string(cases) + ", size " +
              std::to_string(sized) + "/" + std::to_string(cases) + ", -3 -> " + minus3 +
              ", 4 -> " + plus4};
}

Check message_size(std::uint64_t seed) {
  std::vector<double> max_per_d;
  std::size_t violations = 0;
  std::size_t messages = 0;
  std::ostringstream detail;
  for (std::uint64_t horizon : {1000ULL, 10000ULL, 100000ULL}) {
    const ProblemInstance inst = build_instance(standard_instance(8, 8, horizon, 1.0));
    CealConfig cfg;
    cfg.seed = seed;
    const RunTrace trace = run_ceal(inst, cfg);
    double worst = 0.0;
    for (const auto& m : trace.messages) {
      ++messages;
      const double bound = 8.0 * (3.0 + 2.0 * (m.radius / m.precision + 1.0));
      if (!(static_cast<double>(m.bits) <= bound)) ++violations;
      worst = std::max(worst, static_cast<double>(m.bits) / 8.0);
    }
    max_per_d.push_back(worst);
    detail << "T=" << horizon << " max bits/d " << fmt(worst) << "; ";
  }
  const double hi = *std::max_element(max_per_d.begin(), max_per_d.end());
  const double lo = *std::min_element(max_per_d.begin(), max_per_d.end());
  const double spread = lo > 0.0 ? hi / lo : INFINITY;
  detail << violations << "/" << messages << " over bound, spread " << fmt(spread);
  return {violations == 0 && messages > 0 && spread < 2.0, detail.str()};
}

Check normest_zero_noise() {
  ScheduleConstants c;
  c.sigma = 0.0;
  c.clients = 1;
  c.dim = 3;
  const Schedule schedule(c);
  NormEstOptions opts;
  opts.quantized = false;
  bool ok = true;
  std::ostringstream detail;
  for (double n : {1.0, 0.5, 0.25, 0.1}) {
    const double a = n / std::sqrt(3.0);
    const Vector target = {a, -a, a};
    const NormEstResult res = run_normest(target, NoiseModel{NoiseKind::gaussian, 0.0, 3},
                                          schedule, opts, 1);
    const int expected = static_cast<int>(std::ceil(std::log2(9.0 / (2.0 * n))));
    ok = ok && res.terminated && res.j_final == expected;
    detail << "|y|=" << n << " j=" << res.j_final << " (closed form " << expected << "); ";
  }
  return {ok, detail.str()};
}

Check normest_accuracy(std::uint64_t seed) {
  ScheduleConstants c;
  c.sigma = 1.0;
  c.clients = 8;
  c.dim = 4;
  c.delta = 0.05;
  const Schedule schedule(c);
  const NoiseModel noise{NoiseKind::gaussian, 1.0, 4};
  const double norms[] = {1.0, 0.5, 0.25, 0.1};
  Rng rng = make_stream(seed, {105});
  std::size_t hits = 0;
  const std::size_t trials = 500;
  for (std::size_t i = 0; i < trials; ++i) {
    Vector target = random_in_ball(4, 1.0, rng);
    const double scale = norms[i % 4] / norm2(target);
    for (double& x : target) x *= scale;
    const NormEstResult res = run_normest(target, noise, schedule, {}, seed * 1000003 + i);
    if (res.terminated && distance(res.estimate, target) <= tau_for(res.j_final)) ++hits;
  }
  const double frac = static_cast<double>(hits) / static_cast<double>(trials);
  return {frac >= 0.95, std::to_string(hits) + "/" + std::to_string(trials) + " within tau_j (" +
                            fmt(100.0 * frac, 4) + "%)"};
}

Check contraction(std::uint64_t seed) {
  const ProblemInstance inst = build_instance(standard_instance(8, 4, 100000, 1.0));
  const double eta = default_step_size(inst);
  const double bound = 1.0 - inst.alpha * eta / 9.0;
  std::size_t total = 0;
  std::size_t ok = 0;
  for (auto s : seed_list(seed, 20)) {
    CealConfig cfg;
    cfg.seed = s;
    const RunTrace trace = run_ceal(inst, cfg);
    for (std::size_t k = 0; k + 1 < trace.epochs.size(); ++k) {
      if (!trace.epochs[k].completed || !(trace.epochs[k].gap > 0.0)) continue;
      ++total;
      if (trace.epochs[k + 1].gap / trace.epochs[k].gap <= bound) ++ok;
    }
  }
  const double frac = total ? static_cast<double>(ok) / static_cast<double>(total) : 0.0;
  return {total > 0 && frac >= 0.95, std::to_string(ok) + "/" + std::to_string(total) +
                                         " epochs with ratio <= " + fmt(bound, 6)};
}

// The M x T grid shared by the regret and bits scaling criteria.
const std::vector<RunSummary>& scaling_sweep(std::uint64_t seed) {
  static std::optional<std::vector<RunSummary>> cache;
  static std::uint64_t cached_seed = 0;
  if (cache && cached_seed == seed) return *cache;
  std::vector<RunSummary> runs;
  for (std::size_t m : {2, 8, 32}) {
    for (std::uint64_t t : {1000ULL, 10000ULL, 100000ULL}) {
      const ProblemInstance inst = build_instance(standard_instance(m, 4, t, 1.0));
      for (auto s : seed_list(seed, 10)) {
        CealConfig cfg;
        cfg.seed = s;
        runs.push_back(summarize(run_ceal(inst, cfg), 1.0, default_step_size(inst)));
      }
    }
  }
  cache = std::move(runs);
  cached_seed = seed;
  return *cache;
}

Check regret_scaling(std::uint64_t seed) {
  const auto& runs = scaling_sweep(seed);
  const ScalingReport rounds = rounds_scaling_fit(runs);
  const ScalingReport log_model = regret_scaling_fit(runs, ScalingModel::log_mt);
  const ScalingReport linear_t = regret_scaling_fit(runs, ScalingModel::t);
  const bool a = rounds.fit.r2 >= 0.9;
  const bool b = log_model.fit.r2 >= 0.85 && log_model.ratio_spread() < 5.0;
  const bool c = linear_t.fit.r2 < log_model.fit.r2;
  std::ostringstream detail;
  detail << "(a) rounds R2 " << fmt(rounds.fit.r2) << (a ? " ok" : " FAIL") << "; (b) regret R2 "
         << fmt(log_model.fit.r2) << ", ratio spread " << fmt(log_model.ratio_spread())
         << (b ? " ok" : " FAIL") << "; (c) linear-T R2 " << fmt(linear_t.fit.r2)
         << (c ? " ok" : " FAIL") << "; max R/(ln MT ln(M/delta)) "
         << fmt(log_model.max_confidence_ratio);
  return {a && b && c, detail.str()};
}

Check bits_scaling(std::uint64_t seed) {
  std::vector<double> dims, per_client;
  for (std::size_t d : {2, 4, 8, 16}) {
    const ProblemInstance inst = build_instance(standard_instance(8, d, 10000, 1.0));
    double sum = 0.0;
    const auto seeds = seed_list(seed, 10);
    for (auto s : seeds) {
      CealConfig cfg;
      cfg.seed = s;
      sum += static_cast<double>(run_ceal(inst, cfg).uplink_bits_total) / 8.0;
    }
    dims.push_back(static_cast<double>(d));
    per_client.push_back(sum / static_cast<double>(seeds.size()));
  }
  const LinearFit vs_d = fit_line(dims, per_client);
  const auto& runs = scaling_sweep(seed);
  const BitsScalingReport totals = bits_scaling_fit(runs, ScalingModel::log_mt);
  const bool a = vs_d.r2 >= 0.95;
  const bool b = totals.uplink.fit.r2 >= 0.9 && totals.downlink.fit.r2 >= 0.9;
  std::ostringstream detail;
  detail << "per-client uplink vs d R2 " << fmt(vs_d.r2) << (a ? " ok" : " FAIL")
         << "; uplink vs log(MT) R2 " << fmt(totals.uplink.fit.r2) << ", downlink R2 "
         << fmt(totals.downlink.fit.r2) << (b ? " ok" : " FAIL");
  return {a && b, detail.str()};
}

Check determinism(std::uint64_t seed) {
  RunSpec ceal_spec;
  ceal_spec.instance = standard_instance(4, 4, 20000, 1.0);
  ceal_spec.instance.minimizer = MinimizerKind::random;
  ceal_spec.instance.instance_seed = seed;
  ceal_spec.set_seed(seed);
  RunSpec mb_spec = ceal_spec;
  mb_spec.algo = Algo::minibatch;
  bool ok = true;
  std::ostringstream detail;
  for (const RunSpec* spec : {&ceal_spec, &mb_spec}) {
    const std::string first = trace_csv(execute_run(*spec));
    const std::string second = trace_csv(execute_run(*spec));
    const bool same = first == second;
    ok = ok && same;
    detail << to_string(spec->algo) << (same ? " identical" : " DIFFERENT") << " (" << first.size()
           << " bytes); ";
  }
  return {ok, detail.str()};
}

Check baseline_comparison(std::uint64_t seed) {
  const ProblemInstance inst = build_instance(standard_instance(8, 8, 100000, 1.0));
  const auto seeds = seed_list(seed, 5);
  double regret = 0.0;
  double bits = 0.0;
  for (auto s : seeds) {
    CealConfig cfg;
    cfg.seed = s;
    const RunTrace trace = run_ceal(inst, cfg);
    regret += trace.final_regret();
    bits += static_cast<double>(trace.uplink_bits_total + trace.downlink_bits_total);
  }
  regret /= static_cast<double>(seeds.size());
  bits /= static_cast<double>(seeds.size());
  bool ok = true;
  std::ostringstream detail;
  detail << "CEAL regret " << fmt(regret, 6) << " bits " << fmt(bits, 6) << "; ";
  for (std::uint64_t b : {10ULL, 100ULL, 1000ULL}) {
    const MatchedComparison c = match_minibatch(inst, regret, bits, b, seeds);
    const bool pass = c.matched && c.ceal_fewer_bits();
    ok = ok && pass;
    detail << "b=" << b << ": eta " << fmt(c.minibatch_step) << " regret "
           << fmt(c.minibatch_regret, 6) << (c.matched ? "" : " (unmatched)") << " bits "
           << fmt(c.minibatch_bits, 6) << (pass ? " ok" : " FAIL") << "; ";
  }
  return {ok, detail.str()};
}

struct Criterion {
  int id;
  const char* name;
  double limit;
  std::function<Check(std::uint64_t)> run;
};

}  // namespace

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << " (" << fmt(r.seconds, 3)
     << " s";
  if (r.limit_seconds > 0.0) os << " / limit " << r.limit_seconds << " s";
  os << "): " << r.detail;
  return os.str();
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  const std::vector<Criterion> criteria = {
      {1, "quantizer contract", 10.0, quantizer_contract},
      {2, "codec roundtrip and size", 5.0, codec_contract},
      {3, "message size bound", 120.0, message_size},
      {4, "norm estimation zero-noise index", 1.0, [](std::uint64_t) { return normest_zero_noise(); }},
      {5, "norm estimation accuracy", 120.0, normest_accuracy},
      {6, "per-epoch contraction", 120.0, contraction},
      {7, "rounds and regret scaling", 900.0, regret_scaling},
      {8, "communication scaling", 600.0, bits_scaling},
      {9, "determinism", 0.0, determinism},
      {10, "baseline bit comparison", 0.0, baseline_comparison},
  };
  std::vector<CriterionResult> results;
  for (const auto& c : criteria) {
    if (!options.only.empty() && options.only.count(c.id) == 0) continue;
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.limit_seconds = c.limit;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Check check = c.run(options.seed);
      r.passed = check.passed;
      r.detail = check.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit > 0.0 && r.seconds > c.limit) {
      r.passed = false;
      r.detail += " [time limit exceeded]";
    }
    if (options.log) *options.log << format_result(r) << std::endl;
    results.push_back(r);
  }
  return results;
}

}  // namespace ceal
