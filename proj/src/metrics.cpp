#include "ceal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "ceal/errors.hpp"

namespace ceal {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("fit_line needs >= 2 paired points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InputError("fit_line needs at least two distinct x values");
  LinearFit f;
  f.n = x.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += r * r;
  }
  f.r2 = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return f;
}

RunSummary summarize(const RunTrace& trace, double sigma, double step_size,
                     std::uint64_t batch_size) {
  RunSummary s;
  s.algo = trace.algo;
  s.clients = trace.clients;
  s.horizon = trace.horizon;
  s.dim = trace.dim;
  s.sigma = sigma;
  s.seed = trace.seed;
  s.batch_size = batch_size;
  s.step_size = step_size;
  s.final_regret = trace.final_regret();
  s.uplink_bits = trace.uplink_bits_total;
  s.downlink_bits = trace.downlink_bits_total;
  s.num_rounds = trace.num_rounds;
  s.events = trace.events;
  return s;
}

std::string to_string(ScalingModel model) {
  switch (model) {
    case ScalingModel::log_mt:
      return "log(MT)";
    case ScalingModel::mt:
      return "MT";
    case ScalingModel::t:
      return "T";
    case ScalingModel::d_log_mt:
      return "d*log(MT)";
  }
  return "?";
}

double empirical_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InputError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - w) + values[hi] * w;
}

namespace {

double model_x(ScalingModel model, std::size_t clients, std::uint64_t horizon, std::size_t dim) {
  const double mt = static_cast<double>(clients) * static_cast<double>(horizon);
  switch (model) {
    case ScalingModel::log_mt:
      return std::log(mt);
    case ScalingModel::mt:
      return mt;
    case ScalingModel::t:
      return static_cast<double>(horizon);
    case ScalingModel::d_log_mt:
      return static_cast<double>(dim) * std::log(mt);
  }
  return 0.0;
}

}  // namespace

ScalingReport scaling_fit(std::span<const RunSummary> runs, const std::string& quantity,
                          const SummaryValue& value, ScalingModel model,
                          const ScalingOptions& options) {
  std::map<std::tuple<std::size_t, std::uint64_t, std::size_t>, std::vector<double>> groups;
  for (const auto& r : runs) groups[{r.clients, r.horizon, r.dim}].push_back(value(r));

  if (groups.size() < options.min_points) {
    std::ostringstream os;
    os << quantity << " scaling fit needs >= " << options.min_points << " grid points, got "
       << groups.size();
    throw InputError(os.str());
  }

  ScalingReport rep;
  rep.quantity = quantity;
  rep.model = model;
  std::vector<double> xs, ys;
  for (const auto& [key, vals] : groups) {
    const auto& [m, t, d] = key;
    if (vals.size() < options.min_seeds) {
      std::ostringstream os;
      os << quantity << " scaling fit needs >= " << options.min_seeds << " seeds per point; (M="
         << m << ", T=" << t << ", d=" << d << ") has " << vals.size();
      throw InputError(os.str());
    }
    PointStats p;
    p.clients = m;
    p.horizon = t;
    p.dim = d;
    p.runs = vals.size();
    p.x = model_x(model, m, t, d);
    p.mean = std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(vals.size());
    p.lower = empirical_quantile(vals, options.delta / 2.0);
    p.upper = empirical_quantile(vals, 1.0 - options.delta / 2.0);
    p.ratio = p.mean / p.x;
    rep.points.push_back(p);
    xs.push_back(p.x);
    ys.push_back(p.mean);
  }
  rep.fit = fit_line(xs, ys);
  rep.max_ratio = rep.points.front().ratio;
  rep.min_ratio = rep.points.front().ratio;
  for (const auto& p : rep.points) {
    rep.max_ratio = std::max(rep.max_ratio, p.ratio);
    rep.min_ratio = std::min(rep.min_ratio, p.ratio);
    const double mt = static_cast<double>(p.clients) * static_cast<double>(p.horizon);
    const double conf = std::log(static_cast<double>(p.clients) / options.delta);
    rep.max_confidence_ratio = std::max(rep.max_confidence_ratio, p.mean / (std::log(mt) * conf));
  }
  return rep;
}

ScalingReport regret_scaling_fit(std::span<const RunSummary> runs, ScalingModel model,
                                 const ScalingOptions& options) {
  return scaling_fit(
      runs, "final_regret", [](const RunSummary& r) { return r.final_regret; }, model, options);
}

ScalingReport rounds_scaling_fit(std::span<const RunSummary> runs, const ScalingOptions& options) {
  return scaling_fit(
      runs, "num_rounds", [](const RunSummary& r) { return static_cast<double>(r.num_rounds); },
      ScalingModel::log_mt, options);
}

BitsScalingReport bits_scaling_fit(std::span<const RunSummary> runs, ScalingModel model,
                                   const ScalingOptions& options) {
  BitsScalingReport rep;
  rep.uplink = scaling_fit(
      runs, "uplink_bits", [](const RunSummary& r) { return static_cast<double>(r.uplink_bits); },
      model, options);
  rep.downlink = scaling_fit(
      runs, "downlink_bits",
      [](const RunSummary& r) { return static_cast<double>(r.downlink_bits); }, model, options);
  return rep;
}

}  // namespace ceal
