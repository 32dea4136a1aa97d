#include "swme/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace swme {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
  return true;
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_name(section)) throw ConfigError(where + "bad section name");
      cfg.data_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    if (section.empty()) throw ConfigError(where + "key outside of a section");
    const std::string key = trim(line.substr(0, eq));
    if (!valid_name(key)) throw ConfigError(where + "bad key name");
    if (cfg.data_[section].count(key)) throw ConfigError(where + "duplicate key '" + key + "'");
    cfg.data_[section][key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

std::string Config::serialize() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [sec, kv] : data_) {
    if (!first) os << "\n";
    first = false;
    os << "[" << sec << "]\n";
    for (const auto& [k, v] : kv) os << k << " = " << v << "\n";
  }
  return os.str();
}

std::uint64_t Config::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : serialize()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

bool Config::has(const std::string& s, const std::string& k) const {
  auto it = data_.find(s);
  return it != data_.end() && it->second.count(k);
}

void Config::set(const std::string& s, const std::string& k, const std::string& v) {
  if (!valid_name(s) || !valid_name(k)) throw ConfigError("bad config name " + s + "." + k);
  data_[s][k] = v;
}

std::string Config::get(const std::string& s, const std::string& k) const {
  if (!has(s, k)) throw ConfigError("missing key " + s + "." + k);
  return data_.at(s).at(k);
}

std::string Config::get(const std::string& s, const std::string& k, const std::string& def) const {
  return has(s, k) ? data_.at(s).at(k) : def;
}

namespace {

double to_double(const std::string& v, const std::string& what) {
  double x = 0.0;
  const char* b = v.data();
  const char* e = b + v.size();
  auto res = std::from_chars(b, e, x);
  if (res.ec != std::errc() || res.ptr != e) throw ConfigError(what + ": not a number: '" + v + "'");
  return x;
}

}  // namespace

double Config::get_double(const std::string& s, const std::string& k, double def) const {
  return has(s, k) ? to_double(get(s, k), s + "." + k) : def;
}

int Config::get_int(const std::string& s, const std::string& k, int def) const {
  if (!has(s, k)) return def;
  const std::string v = get(s, k);
  int x = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ConfigError(s + "." + k + ": not an integer: '" + v + "'");
  return x;
}

bool Config::get_bool(const std::string& s, const std::string& k, bool def) const {
  if (!has(s, k)) return def;
  const std::string v = get(s, k);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(s + "." + k + ": not a boolean: '" + v + "'");
}

std::vector<double> Config::get_list(const std::string& s, const std::string& k,
                                     const std::vector<double>& def) const {
  if (!has(s, k)) return def;
  std::vector<double> out;
  std::stringstream ss(get(s, k));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), s + "." + k));
  return out;
}

}  // namespace swme
