#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kmzi/setup.hpp"

namespace kmzi::cli {

/// Bad flags, values or combinations.  Maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output could not be written.  Exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input CSV does not follow the documented schema.  Exit code 4.
class MalformedInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Metric { Sensitivity, Qfi, QcrbLossy, Limits };
enum class Axis { Phi, R, Alpha, Loss };

Metric parse_metric(const std::string& s);
Axis parse_axis(const std::string& s);
const char* to_string(Metric m);
const char* to_string(Axis a);

/// Sweep range used when --min/--max are not given.
std::pair<double, double> default_range(Axis a);

struct ScanSpec {
  Metric metric = Metric::Sensitivity;
  SetupParams base;  // m, n and k are taken from pairs and ks
  Axis axis = Axis::Phi;
  double min = 2.6;
  double max = 3.7;
  unsigned steps = 2;
  std::vector<std::pair<unsigned, unsigned>> pairs{{0, 0}};
  std::vector<unsigned> ks{1};
  std::string out;  // empty writes to stdout
  std::string svg;  // empty disables the plot
  bool oracle_check = false;
  bool limits_lossless = false;
  unsigned threads = 0;  // 0 picks the hardware concurrency

  std::vector<double> grid() const;
  SetupParams point(unsigned m, unsigned n, unsigned k, double x) const;
};

/// Setting keys understood by apply_setting, in the spelling of the long
/// flags without the leading dashes.
const std::vector<std::string>& setting_keys();

/// Flat "key = value" lines, '#' starts a comment.  Throws IoError when the
/// file cannot be read and UsageError on a malformed line or unknown key.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Overrides one field.  Throws UsageError on unknown keys or bad values.
void apply_setting(ScanSpec& spec, const std::string& key, const std::string& value);

/// Checks the cross-field invariants; `fixed` lists keys set explicitly.
void check_spec(const ScanSpec& spec, const std::vector<std::string>& fixed);

/// Defaults, then the config file (if any), then the command-line settings.
ScanSpec resolve_spec(const std::optional<std::string>& config_path,
                      const std::vector<std::pair<std::string, std::string>>& settings);

std::vector<std::pair<unsigned, unsigned>> parse_pairs(const std::string& s);
std::vector<unsigned> parse_k_list(const std::string& s);
double parse_double(const std::string& key, const std::string& s);
unsigned parse_unsigned(const std::string& key, const std::string& s);
bool parse_bool(const std::string& key, const std::string& s);

}  // namespace kmzi::cli
