#include "orbit/config.hpp"

#include <fstream>
#include <sstream>

namespace orbit {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

Scalar to_number(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const Scalar v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' is not a number: " + value);
  }
}

}  // namespace

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + " has no '='");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) + " is malformed");
    kv[key] = value;
  }
  return kv;
}

PotentialSpec potential_from_config(const std::map<std::string, std::string>& kv) {
  PotentialSpec spec;
  const auto get = [&](const char* key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  const std::string* alpha = get("alpha");
  if (!alpha) throw ConfigError("missing required key 'alpha'");
  spec.alpha = to_number("alpha", *alpha);

  const std::string* profile = get("profile");
  if (!profile) throw ConfigError("missing required key 'profile'");
  if (*profile == "power")
    spec.profile = ProfileKind::Power;
  else if (*profile == "anisotropic")
    spec.profile = ProfileKind::Anisotropic;
  else
    throw ConfigError("unknown profile '" + *profile + "' (expected power|anisotropic)");

  if (const auto* v = get("dimension")) spec.dimension = static_cast<int>(to_number("dimension", *v));
  if (const auto* v = get("coefficient")) spec.coefficient = to_number("coefficient", *v);
  if (const auto* v = get("anisotropy")) spec.anisotropy = to_number("anisotropy", *v);
  if (const auto* v = get("beta")) spec.beta = to_number("beta", *v);
  if (const auto* v = get("m0")) spec.m0 = to_number("m0", *v);
  if (const auto* v = get("r0")) spec.r0 = to_number("r0", *v);

  try {
    validate_spec(spec);
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("invalid potential config: ") + ex.what());
  }
  return spec;
}

PotentialSpec load_potential_config(const std::string& path) {
  return potential_from_config(parse_kv_file(path));
}

}  // namespace orbit
