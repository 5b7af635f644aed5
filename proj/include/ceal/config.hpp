#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ceal/errors.hpp"
#include "ceal/minibatch.hpp"
#include "ceal/objective.hpp"
#include "ceal/protocol.hpp"

namespace ceal {

// Config problems, each mapped to its own CLI exit code.
class ConfigFileError : public std::runtime_error {  // missing / unreadable file
 public:
  using std::runtime_error::runtime_error;
};
class SchemaError : public InputError {  // unknown key, bad type, malformed value
 public:
  using InputError::InputError;
};
class RangeError : public InputError {  // well-formed value outside its allowed range
 public:
  using InputError::InputError;
};

enum class Algo { ceal, minibatch };
std::string to_string(Algo algo);
Algo parse_algo(const std::string& name);

// Flat key = value file (INI syntax, '#' or ';' comments, no sections).
class KeyValueConfig {
 public:
  static KeyValueConfig load(const std::string& path);
  static KeyValueConfig parse(const std::string& text);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  std::optional<std::string> find(const std::string& key) const;
  void set(const std::string& key, const std::string& value) { entries_[key] = value; }
  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

struct RunSpec {
  Algo algo = Algo::ceal;
  InstanceSpec instance;
  CealConfig ceal;
  MinibatchConfig minibatch;

  std::uint64_t seed() const { return algo == Algo::ceal ? ceal.seed : minibatch.seed; }
  void set_seed(std::uint64_t seed);
  // Step size actually used (explicit or default 1/(10 beta)).
  double step_size() const;
};

// Builds and range-checks a single-run spec. Throws SchemaError / RangeError.
RunSpec run_spec_from(const KeyValueConfig& cfg);

struct SweepSpec {
  std::vector<Algo> algos;
  std::vector<std::size_t> clients;
  std::vector<std::uint64_t> horizons;
  std::vector<std::size_t> dims;
  std::vector<double> sigmas;
  std::vector<std::uint64_t> batch_sizes;  // minibatch runs, one per entry
  std::size_t seeds = 1;
  std::uint64_t base_seed = 1;
  std::string output_dir = "sweep_out";
  std::size_t workers = 1;
  bool match_regret = true;
  KeyValueConfig base;  // scalar keys shared by every run in the grid
};

SweepSpec sweep_spec_from(const KeyValueConfig& cfg);

// Keys understood by run configs and sweep specs (for docs and validation).
const std::vector<std::string>& run_config_keys();
const std::vector<std::string>& sweep_config_keys();

}  // namespace ceal
