#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hidnet/classifier.hpp"
#include "hidnet/dataset.hpp"
#include "hidnet/diffusion.hpp"

namespace hidnet {

struct ConfigKey {
  const char* key;
  const char* default_value;
  const char* help;
};

// Every recognised key with its default.
const std::vector<ConfigKey>& config_keys();

// Flat `key = value` configuration. `#` starts a comment. If the text contains
// any `#@ key = value` lines (the resolved-config header written into CSV
// outputs) only those lines are read, so an output file can be fed back in.
class Config {
 public:
  static Config parse(std::istream& in);
  static Config parse_file(const std::string& path);

  // Unknown keys are rejected.
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;  // value or default

  std::string get_string(const std::string& key) const { return get(key); }
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;  // comma separated
  std::vector<std::int64_t> get_ints(const std::string& key) const;

  // All keys with resolved values, sorted by key.
  std::map<std::string, std::string> resolved() const;
  // `#@ key = value` lines for the resolved configuration.
  void write_header(std::ostream& out) const;

 private:
  std::map<std::string, std::string> values_;
};

DiffusionConfig diffusion_config(const Config& c);
TrainConfig train_config(const Config& c);
SyntheticSpec synthetic_spec(const Config& c);

}  // namespace hidnet
