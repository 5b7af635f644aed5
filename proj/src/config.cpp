#include "ceal/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <sstream>

namespace ceal {

namespace pt = boost::property_tree;

std::string to_string(Algo algo) { return algo == Algo::ceal ? "ceal" : "minibatch"; }

Algo parse_algo(const std::string& name) {
  if (name == "ceal") return Algo::ceal;
  if (name == "minibatch") return Algo::minibatch;
  throw SchemaError("algo must be 'ceal' or 'minibatch', got '" + name + "'");
}

namespace {

KeyValueConfig from_ptree(const pt::ptree& tree) {
  KeyValueConfig cfg;
  for (const auto& [key, node] : tree) {
    if (!node.empty()) throw SchemaError("sections are not supported (found [" + key + "])");
    cfg.set(key, node.data());
  }
  return cfg;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw SchemaError("empty entry in list '" + value + "'");
    out.push_back(item);
  }
  if (out.empty()) throw SchemaError("empty list");
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw SchemaError("key '" + key + "': expected a real number, got '" + text + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw SchemaError("key '" + key + "': expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw SchemaError("key '" + key + "': expected true/false, got '" + text + "'");
}

Vector parse_vector(const std::string& key, const std::string& text) {
  Vector v;
  for (const auto& item : split_list(text)) v.push_back(parse_double(key, item));
  return v;
}

bool looks_like_list(const std::string& text) {
  return !text.empty() && (std::isdigit(static_cast<unsigned char>(text[0])) || text[0] == '-' ||
                           text[0] == '+' || text[0] == '.');
}

void require_positive(const std::string& key, double v) {
  if (!(v > 0.0)) throw RangeError("key '" + key + "' must be > 0");
}

void check_known(const KeyValueConfig& cfg, const std::vector<std::string>& known) {
  for (const auto& [key, value] : cfg.entries()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw SchemaError("unknown key '" + key + "'");
    }
  }
}

const std::vector<std::string> kGridKeys = {"clients", "horizon", "dim", "sigma"};

}  // namespace

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  if (!std::filesystem::exists(path)) throw ConfigFileError("config file not found: " + path);
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw SchemaError(std::string("cannot parse config: ") + e.what());
  }
  return from_ptree(tree);
}

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
  std::istringstream in(text);
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw SchemaError(std::string("cannot parse config: ") + e.what());
  }
  return from_ptree(tree);
}

const std::string& KeyValueConfig::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw SchemaError("missing required key '" + key + "'");
  return it->second;
}

std::optional<std::string> KeyValueConfig::find(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::string>& run_config_keys() {
  static const std::vector<std::string> keys = {
      "algo",   "dim",        "alpha",     "beta",       "sigma",   "clients",
      "horizon", "seed",      "instance_seed", "curvature", "minimizer", "domain_radius",
      "noise",  "start",      "eta",       "delta",      "gamma0",  "phi0",
      "quantize", "capacity", "batch_size", "float_bits"};
  return keys;
}

const std::vector<std::string>& sweep_config_keys() {
  static const std::vector<std::string> keys = [] {
    auto k = run_config_keys();
    for (const char* extra : {"algos", "seeds", "base_seed", "batch_sizes", "output_dir",
                              "workers", "match_regret"}) {
      k.emplace_back(extra);
    }
    return k;
  }();
  return keys;
}

void RunSpec::set_seed(std::uint64_t seed) {
  ceal.seed = seed;
  minibatch.seed = seed;
}

double RunSpec::step_size() const {
  const auto& explicit_eta = algo == Algo::ceal ? ceal.eta : minibatch.step_size;
  return explicit_eta.value_or(1.0 / (10.0 * instance.beta));
}

RunSpec run_spec_from(const KeyValueConfig& cfg) {
  check_known(cfg, run_config_keys());
  RunSpec spec;
  if (auto a = cfg.find("algo")) spec.algo = parse_algo(*a);

  InstanceSpec& in = spec.instance;
  const std::uint64_t dim = parse_uint("dim", cfg.get("dim"));
  if (dim == 0) throw RangeError("key 'dim' must be >= 1");
  in.dim = dim;
  in.alpha = parse_double("alpha", cfg.get("alpha"));
  in.beta = parse_double("beta", cfg.get("beta"));
  require_positive("alpha", in.alpha);
  if (!(in.beta >= in.alpha)) throw RangeError("key 'beta' must be >= alpha");
  in.sigma = parse_double("sigma", cfg.get("sigma"));
  if (!(in.sigma >= 0.0)) throw RangeError("key 'sigma' must be >= 0");
  in.clients = parse_uint("clients", cfg.get("clients"));
  if (in.clients == 0) throw RangeError("key 'clients' must be >= 1");
  in.horizon = parse_uint("horizon", cfg.get("horizon"));
  if (in.horizon == 0) throw RangeError("key 'horizon' must be >= 1");
  if (auto s = cfg.find("instance_seed")) in.instance_seed = parse_uint("instance_seed", *s);

  if (auto c = cfg.find("curvature")) {
    if (*c == "linspace") {
      in.curvature = CurvatureKind::linspace;
    } else if (*c == "random") {
      in.curvature = CurvatureKind::random;
    } else if (looks_like_list(*c)) {
      in.curvature = CurvatureKind::list;
      in.curvature_values = parse_vector("curvature", *c);
      if (in.curvature_values.size() != in.dim) throw RangeError("curvature list needs dim entries");
      for (double l : in.curvature_values) {
        if (l < in.alpha || l > in.beta) throw RangeError("curvature entries must lie in [alpha, beta]");
      }
    } else {
      throw SchemaError("key 'curvature': expected linspace|random|<list>, got '" + *c + "'");
    }
  }
  if (auto m = cfg.find("minimizer")) {
    if (*m == "origin") {
      in.minimizer = MinimizerKind::origin;
    } else if (*m == "random") {
      in.minimizer = MinimizerKind::random;
    } else if (looks_like_list(*m)) {
      in.minimizer = MinimizerKind::list;
      in.minimizer_values = parse_vector("minimizer", *m);
      if (in.minimizer_values.size() != in.dim) throw RangeError("minimizer list needs dim entries");
    } else {
      throw SchemaError("key 'minimizer': expected origin|random|<list>, got '" + *m + "'");
    }
  }
  if (auto r = cfg.find("domain_radius"); r && *r != "auto") {
    in.domain_radius = parse_double("domain_radius", *r);
    require_positive("domain_radius", *in.domain_radius);
  }
  if (auto n = cfg.find("noise")) {
    try {
      in.noise = parse_noise_kind(*n);
    } catch (const InputError& e) {
      throw SchemaError(e.what());
    }
  }

  StartSpec start;
  if (auto s = cfg.find("start")) {
    if (*s == "corner") {
      start.kind = StartKind::corner;
    } else if (*s == "random") {
      start.kind = StartKind::random;
    } else if (looks_like_list(*s)) {
      start.kind = StartKind::list;
      start.values = parse_vector("start", *s);
      if (start.values.size() != in.dim) throw RangeError("start list needs dim entries");
    } else {
      throw SchemaError("key 'start': expected corner|random|<list>, got '" + *s + "'");
    }
  }

  const std::uint64_t seed = cfg.has("seed") ? parse_uint("seed", cfg.get("seed")) : 1;
  std::optional<double> eta;
  if (auto e = cfg.find("eta")) eta = parse_double("eta", *e);

  CealConfig& c = spec.ceal;
  c.seed = seed;
  c.start = start;
  c.eta = eta;
  if (auto v = cfg.find("delta")) c.delta = parse_double("delta", *v);
  if (auto v = cfg.find("gamma0")) c.gamma0 = parse_double("gamma0", *v);
  if (auto v = cfg.find("phi0")) c.phi0 = parse_double("phi0", *v);
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw RangeError("key 'delta' must lie in (0, 1)");
  if (!(c.gamma0 > 0.0 && c.gamma0 < 1.0)) throw RangeError("key 'gamma0' must lie in (0, 1)");
  if (!(c.phi0 > 0.0 && c.phi0 < 1.0)) throw RangeError("key 'phi0' must lie in (0, 1)");
  if (auto q = cfg.find("quantize"); q && *q != "auto") c.quantize = parse_bool("quantize", *q);
  if (auto cap = cfg.find("capacity")) {
    if (*cap == "bound") {
      c.capacity.kind = CapacityPolicy::Kind::message_bound;
    } else if (*cap == "none") {
      c.capacity.kind = CapacityPolicy::Kind::unlimited;
    } else {
      c.capacity.kind = CapacityPolicy::Kind::fixed;
      c.capacity.bits = parse_uint("capacity", *cap);
      if (c.capacity.bits == 0) throw RangeError("key 'capacity' must be >= 1 (or bound|none)");
    }
  }

  MinibatchConfig& mb = spec.minibatch;
  mb.seed = seed;
  mb.start = start;
  mb.step_size = eta;
  if (auto b = cfg.find("batch_size")) mb.batch_size = parse_uint("batch_size", *b);
  if (mb.batch_size == 0) throw RangeError("key 'batch_size' must be >= 1");
  if (auto f = cfg.find("float_bits")) mb.float_bits = parse_uint("float_bits", *f);
  if (mb.float_bits == 0) throw RangeError("key 'float_bits' must be >= 1");

  if (eta) {
    require_positive("eta", *eta);
    const double bound = 1.0 / (5.0 * in.beta);
    if (spec.algo == Algo::ceal && !(*eta < bound)) {
      std::ostringstream os;
      os << "key 'eta' = " << *eta << " must satisfy eta < 1/(5*beta) = " << bound;
      throw RangeError(os.str());
    }
  }
  if (spec.algo == Algo::ceal && in.sigma == 0.0 && c.quantize.value_or(false)) {
    throw RangeError("quantize = true needs sigma > 0");
  }
  return spec;
}

SweepSpec sweep_spec_from(const KeyValueConfig& cfg) {
  check_known(cfg, sweep_config_keys());
  SweepSpec spec;
  for (const auto& [key, value] : cfg.entries()) {
    const bool grid = std::find(kGridKeys.begin(), kGridKeys.end(), key) != kGridKeys.end();
    const bool sweep_only = key == "algos" || key == "seeds" || key == "base_seed" ||
                            key == "batch_sizes" || key == "output_dir" || key == "workers" ||
                            key == "match_regret" || key == "seed" || key == "algo" ||
                            key == "batch_size";
    if (!grid && !sweep_only) spec.base.set(key, value);
  }

  const std::string algos = cfg.find("algos").value_or(cfg.find("algo").value_or("ceal"));
  for (const auto& a : split_list(algos)) spec.algos.push_back(parse_algo(a));
  for (const auto& v : split_list(cfg.get("clients"))) {
    spec.clients.push_back(parse_uint("clients", v));
  }
  for (const auto& v : split_list(cfg.get("horizon"))) {
    spec.horizons.push_back(parse_uint("horizon", v));
  }
  for (const auto& v : split_list(cfg.get("dim"))) spec.dims.push_back(parse_uint("dim", v));
  for (const auto& v : split_list(cfg.get("sigma"))) spec.sigmas.push_back(parse_double("sigma", v));
  const std::string batches =
      cfg.find("batch_sizes").value_or(cfg.find("batch_size").value_or("100"));
  for (const auto& v : split_list(batches)) spec.batch_sizes.push_back(parse_uint("batch_sizes", v));
  if (auto s = cfg.find("seeds")) spec.seeds = parse_uint("seeds", *s);
  if (auto s = cfg.find("base_seed")) spec.base_seed = parse_uint("base_seed", *s);
  if (auto s = cfg.find("seed")) spec.base_seed = parse_uint("seed", *s);
  if (auto s = cfg.find("output_dir")) spec.output_dir = *s;
  if (auto s = cfg.find("workers")) spec.workers = parse_uint("workers", *s);
  if (auto s = cfg.find("match_regret")) spec.match_regret = parse_bool("match_regret", *s);

  if (spec.seeds == 0) throw RangeError("key 'seeds' must be >= 1");
  if (spec.workers == 0) throw RangeError("key 'workers' must be >= 1");
  for (auto b : spec.batch_sizes) {
    if (b == 0) throw RangeError("batch sizes must be >= 1");
  }

  // Validate every grid cell up front so a bad cell fails before any run.
  for (Algo algo : spec.algos) {
    for (auto m : spec.clients) {
      for (auto t : spec.horizons) {
        for (auto d : spec.dims) {
          for (auto s : spec.sigmas) {
            KeyValueConfig cell = spec.base;
            cell.set("algo", to_string(algo));
            cell.set("clients", std::to_string(m));
            cell.set("horizon", std::to_string(t));
            cell.set("dim", std::to_string(d));
            std::ostringstream os;
            os.precision(17);
            os << s;
            cell.set("sigma", os.str());
            run_spec_from(cell);
          }
        }
      }
    }
  }
  return spec;
}

}  // namespace ceal
