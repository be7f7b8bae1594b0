#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <regex>
#include <sstream>

#include "cvconc/cavity.hpp"
#include "cvconc/errors.hpp"
#include "cvconc/kerr.hpp"

namespace cvconc::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& raw) {
  const std::string text = trim(raw);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError("not a number: '" + raw + "'");
  }
  return value;
}

int parse_int(const std::string& raw) {
  const std::string text = trim(raw);
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError("not an integer: '" + raw + "'");
  }
  return value;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& cavity_keys() {
  static const std::map<std::string, Setter> keys = {
      {"lambda", [](RunConfig& c, const std::string& v) { c.cavity.lambda = parse_number(v); }},
      {"phi", [](RunConfig& c, const std::string& v) { c.cavity.phi = parse_angle(v); }},
      {"phi0_lo", [](RunConfig& c, const std::string& v) { c.cavity.phi0_lo = parse_angle(v); }},
      {"phi0_hi", [](RunConfig& c, const std::string& v) { c.cavity.phi0_hi = parse_angle(v); }},
      {"steps", [](RunConfig& c, const std::string& v) { c.cavity.steps = parse_int(v); }},
      {"scan_spacing",
       [](RunConfig& c, const std::string& v) { c.cavity.scan_spacing = parse_angle(v); }},
      {"tolerance", [](RunConfig& c, const std::string& v) { c.cavity.tolerance = parse_number(v); }},
  };
  return keys;
}

const std::map<std::string, Setter>& kerr_keys() {
  static const std::map<std::string, Setter> keys = {
      {"lambda", [](RunConfig& c, const std::string& v) { c.kerr.lambda = parse_number(v); }},
      {"alpha", [](RunConfig& c, const std::string& v) { c.kerr.alpha = parse_number(v); }},
      {"phi", [](RunConfig& c, const std::string& v) { c.kerr.phi = parse_angle(v); }},
      {"fock_cut_n", [](RunConfig& c, const std::string& v) { c.kerr.fock_cut_n = parse_int(v); }},
      {"n_max", [](RunConfig& c, const std::string& v) { c.kerr.n_max = parse_int(v); }},
      {"half_width", [](RunConfig& c, const std::string& v) { c.kerr.half_width = parse_number(v); }},
      {"step", [](RunConfig& c, const std::string& v) { c.kerr.step = parse_number(v); }},
      {"delta_f", [](RunConfig& c, const std::string& v) { c.kerr.delta_f = parse_delta_list(v); }},
  };
  return keys;
}

const std::map<std::string, Setter>& keys_for(const std::string& section) {
  if (section == "cavity") return cavity_keys();
  if (section == "kerr") return kerr_keys();
  throw ConfigError("unknown section [" + section + "]");
}

void apply(RunConfig& config, const std::string& section, const std::string& key,
           const std::string& value) {
  const auto& keys = keys_for(section);
  const auto it = keys.find(key);
  if (it == keys.end()) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
  try {
    it->second(config, value);
  } catch (const ConfigError& e) {
    throw ConfigError(section + "." + key + ": " + e.what());
  }
}

}  // namespace

double parse_angle(const std::string& raw) {
  static const std::regex pi_form(R"(^([+-]?)(?:([0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?)\s*\*\s*)?pi(?:\s*/\s*([0-9]*\.?[0-9]+))?$)");
  const std::string text = trim(raw);
  std::smatch m;
  if (!std::regex_match(text, m, pi_form)) return parse_number(text);
  double value = kPi;
  if (m[2].matched) value *= parse_number(m[2].str());
  if (m[3].matched) {
    const double den = parse_number(m[3].str());
    if (den == 0.0) throw ConfigError("division by zero in angle '" + raw + "'");
    value /= den;
  }
  return m[1].str() == "-" ? -value : value;
}

std::vector<double> parse_delta_list(const std::string& raw) {
  const std::string text = trim(raw);
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw ConfigError("range must be lo:hi:step, got '" + raw + "'");
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    const double step = parse_number(parts[2]);
    if (!(step > 0.0) || !(hi >= lo)) throw ConfigError("empty or invalid range '" + raw + "'");
    const long count = std::lround(std::floor((hi - lo) / step + 1e-9));
    if (count > 100000) throw ConfigError("range '" + raw + "' has too many points");
    for (long k = 0; k <= count; ++k) out.push_back(lo + k * step);
  } else {
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) out.push_back(parse_number(part));
  }
  if (out.empty()) throw ConfigError("delta_f list is empty");
  return out;
}

Formats parse_formats(const std::string& raw) {
  Formats f{false, false, false};
  std::stringstream ss(raw);
  for (std::string part; std::getline(ss, part, ',');) {
    part = trim(part);
    if (part == "csv") {
      f.csv = true;
    } else if (part == "json") {
      f.json = true;
    } else if (part == "svg") {
      f.svg = true;
    } else {
      throw ConfigError("unknown format '" + part + "' (expected csv, json, svg)");
    }
  }
  return f;
}

RunConfig load_config(Scheme scheme, const std::optional<std::filesystem::path>& path,
                      const std::vector<std::string>& overrides) {
  RunConfig config;
  config.scheme = scheme;

  if (path) {
    if (!std::filesystem::is_regular_file(*path)) {
      throw ConfigError("config file not found: " + path->string());
    }
    boost::property_tree::ptree tree;
    try {
      boost::property_tree::read_ini(path->string(), tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw ConfigError(std::string("malformed config: ") + e.what());
    }
    for (const auto& [section, body] : tree) {
      if (!body.data().empty()) {
        throw ConfigError("key '" + section + "' must sit inside a [cavity] or [kerr] section");
      }
      keys_for(section);
      for (const auto& [key, value] : body) apply(config, section, key, value.data());
    }
  }

  const std::string active = scheme == Scheme::kCavity ? "cavity" : "kerr";
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("override must be key=value, got '" + item + "'");
    std::string key = trim(item.substr(0, eq));
    std::string section = active;
    if (const auto dot = key.find('.'); dot != std::string::npos) {
      section = key.substr(0, dot);
      key = key.substr(dot + 1);
    }
    apply(config, section, key, item.substr(eq + 1));
  }

  validate(config);
  return config;
}

void validate(const RunConfig& config) {
  try {
    if (config.scheme == Scheme::kCavity) {
      const auto& c = config.cavity;
      CavityParams(c.lambda, c.phi, c.phi0_lo);
      if (!std::isfinite(c.phi0_lo) || !std::isfinite(c.phi0_hi) || !(c.phi0_hi > c.phi0_lo)) {
        throw ConfigError("cavity.phi0_lo must be below cavity.phi0_hi");
      }
      if (c.steps < 2) throw ConfigError("cavity.steps must be at least 2");
      if (!(c.scan_spacing > 0.0) || !(c.tolerance > 0.0)) {
        throw ConfigError("cavity.scan_spacing and cavity.tolerance must be positive");
      }
    } else {
      const auto& k = config.kerr;
      KerrParams(k.lambda, k.alpha, k.phi, k.fock_cut_n, k.n_max);
      GridSpec{k.half_width, k.step}.validate();
      if (k.delta_f.empty()) throw ConfigError("kerr.delta_f is empty");
      for (std::size_t i = 0; i < k.delta_f.size(); ++i) {
        if (!(k.delta_f[i] >= 0.0)) throw ConfigError("kerr.delta_f values must be non-negative");
        if (i > 0 && !(k.delta_f[i] > k.delta_f[i - 1])) {
          throw ConfigError("kerr.delta_f values must be strictly increasing");
        }
      }
    }
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (!config.formats.csv && !config.formats.json && !config.formats.svg) {
    throw ConfigError("no output format selected");
  }
}

}  // namespace cvconc::cli
