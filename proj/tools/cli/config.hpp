#ifndef CVCONC_CLI_CONFIG_HPP
#define CVCONC_CLI_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvconc/angles.hpp"

namespace cvconc::cli {

/// Bad config file, bad override, or an out-of-range parameter. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scheme { kCavity, kKerr };

struct CavityConfig {
  double lambda = 0.5;
  double phi = kPi / 10;
  double phi0_lo = -kPi;
  double phi0_hi = kPi;
  int steps = 401;
  double scan_spacing = kPi / 200;
  double tolerance = 1e-6;
};

struct KerrConfig {
  double lambda = 0.5;
  double alpha = 10.0;
  double phi = kPi / 100;
  int fock_cut_n = 10;
  int n_max = -1;
  double half_width = 5.0;
  double step = 0.1;
  std::vector<double> delta_f = {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4};
};

struct Formats {
  bool csv = true;
  bool json = true;
  bool svg = false;
};

struct RunConfig {
  Scheme scheme = Scheme::kCavity;
  CavityConfig cavity;
  KerrConfig kerr;
  std::filesystem::path output_dir = "out";
  Formats formats;
  unsigned threads = 0;
};

/// Radians as a plain number or a multiple of pi: "0.3", "pi", "-pi/10", "2*pi", "3*pi/4".
double parse_angle(const std::string& text);

/// Either "lo:hi:step" (inclusive, step > 0) or a comma-separated list.
std::vector<double> parse_delta_list(const std::string& text);

/// "csv,json,svg" in any order and subset.
Formats parse_formats(const std::string& text);

/// Reads an INI file (sections [cavity] and [kerr]) when a path is given, then applies
/// overrides of the form "section.key=value" or "key=value" (meaning the active scheme's
/// section), then checks every parameter against the scheme's constraints.
/// Throws ConfigError on any problem.
RunConfig load_config(Scheme scheme, const std::optional<std::filesystem::path>& path,
                      const std::vector<std::string>& overrides);

/// Constructs the core parameter objects once so their validation runs before any output.
void validate(const RunConfig& config);

}  // namespace cvconc::cli

#endif  // CVCONC_CLI_CONFIG_HPP
