#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace swme {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key-value text with one level of [sections]:
//
//   [model]
//   variant = HSWME   # comment
//
// Keys before the first section header are rejected.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);
  std::string serialize() const;
  std::uint64_t hash() const;  // FNV-1a of serialize()

  bool has(const std::string& section, const std::string& key) const;
  void set(const std::string& section, const std::string& key, const std::string& value);
  std::string get(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key, const std::string& def) const;
  double get_double(const std::string& section, const std::string& key, double def) const;
  int get_int(const std::string& section, const std::string& key, int def) const;
  bool get_bool(const std::string& section, const std::string& key, bool def) const;
  std::vector<double> get_list(const std::string& section, const std::string& key,
                               const std::vector<double>& def) const;

  const std::map<std::string, std::map<std::string, std::string>>& sections() const { return data_; }
  bool operator==(const Config& o) const { return data_ == o.data_; }

 private:
  std::map<std::string, std::map<std::string, std::string>> data_;
};

std::string hex64(std::uint64_t v);

}  // namespace swme
