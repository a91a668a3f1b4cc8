#include "kmzi/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "kmzi/error.hpp"

namespace kmzi::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

const char* axis_key(Axis a) {
  switch (a) {
    case Axis::Phi: return "phi";
    case Axis::R: return "r";
    case Axis::Alpha: return "alpha";
    case Axis::Loss: return "loss";
  }
  return "";
}

}  // namespace

Metric parse_metric(const std::string& s) {
  if (s == "sensitivity") return Metric::Sensitivity;
  if (s == "qfi") return Metric::Qfi;
  if (s == "qcrb-lossy") return Metric::QcrbLossy;
  if (s == "limits") return Metric::Limits;
  throw UsageError("unknown metric '" + s + "' (sensitivity, qfi, qcrb-lossy, limits)");
}

Axis parse_axis(const std::string& s) {
  if (s == "phi") return Axis::Phi;
  if (s == "r") return Axis::R;
  if (s == "alpha") return Axis::Alpha;
  if (s == "loss") return Axis::Loss;
  throw UsageError("unknown axis '" + s + "' (phi, r, alpha, loss)");
}

const char* to_string(Metric m) {
  switch (m) {
    case Metric::Sensitivity: return "sensitivity";
    case Metric::Qfi: return "qfi";
    case Metric::QcrbLossy: return "qcrb-lossy";
    case Metric::Limits: return "limits";
  }
  return "";
}

const char* to_string(Axis a) { return axis_key(a); }

std::pair<double, double> default_range(Axis a) {
  switch (a) {
    case Axis::Phi: return {2.6, 3.7};
    case Axis::R: return {0.1, 1.2};
    case Axis::Alpha: return {0.1, 2.0};
    case Axis::Loss: return {0.0, 1.0};
  }
  return {0.0, 1.0};
}

std::vector<double> ScanSpec::grid() const {
  std::vector<double> g(steps);
  for (unsigned i = 0; i < steps; ++i) {
    g[i] = i + 1 == steps ? max : min + (max - min) * i / (steps - 1);
  }
  return g;
}

SetupParams ScanSpec::point(unsigned m, unsigned n, unsigned k, double x) const {
  SetupParams p = base;
  p.m = m;
  p.n = n;
  p.k = k;
  switch (axis) {
    case Axis::Phi: p.phi = x; break;
    case Axis::R: p.r = x; break;
    case Axis::Alpha: p.alpha = x; break;
    case Axis::Loss: p.loss = x; break;
  }
  return p;
}

const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys = {
      "metric", "axis", "min",  "max", "steps",        "k",               "pairs",   "r",
      "alpha",  "phi",  "loss", "out", "svg",   "oracle-check", "limits-lossless", "threads"};
  return keys;
}

double parse_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
    throw UsageError("--" + key + ": '" + s + "' is not a finite number");
  }
  return v;
}

unsigned parse_unsigned(const std::string& key, const std::string& s) {
  unsigned v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc() || res.ptr != end) {
    throw UsageError("--" + key + ": '" + s + "' is not a nonnegative integer");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw UsageError("--" + key + ": '" + s + "' is not a boolean");
}

std::vector<std::pair<unsigned, unsigned>> parse_pairs(const std::string& s) {
  std::vector<std::pair<unsigned, unsigned>> out;
  for (const auto& item : split(s, ';')) {
    if (item.empty()) continue;
    const auto mn = split(item, ',');
    if (mn.size() != 2) throw UsageError("--pairs: '" + item + "' is not of the form m,n");
    out.emplace_back(parse_unsigned("pairs", mn[0]), parse_unsigned("pairs", mn[1]));
  }
  if (out.empty()) throw UsageError("--pairs: at least one m,n pair is required");
  return out;
}

std::vector<unsigned> parse_k_list(const std::string& s) {
  std::vector<unsigned> out;
  for (const auto& item : split(s, ',')) {
    const unsigned k = parse_unsigned("k", item);
    if (k != 1 && k != 2) throw UsageError("--k: values must be 1 or 2");
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  unsigned lineno = 0;
  const auto& keys = setting_keys();
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

void apply_setting(ScanSpec& spec, const std::string& key, const std::string& value) {
  if (key == "metric") spec.metric = parse_metric(value);
  else if (key == "axis") spec.axis = parse_axis(value);
  else if (key == "min") spec.min = parse_double(key, value);
  else if (key == "max") spec.max = parse_double(key, value);
  else if (key == "steps") spec.steps = parse_unsigned(key, value);
  else if (key == "k") spec.ks = parse_k_list(value);
  else if (key == "pairs") spec.pairs = parse_pairs(value);
  else if (key == "r") spec.base.r = parse_double(key, value);
  else if (key == "alpha") spec.base.alpha = parse_double(key, value);
  else if (key == "phi") spec.base.phi = parse_double(key, value);
  else if (key == "loss") spec.base.loss = parse_double(key, value);
  else if (key == "out") spec.out = value;
  else if (key == "svg") spec.svg = value;
  else if (key == "oracle-check") spec.oracle_check = parse_bool(key, value);
  else if (key == "limits-lossless") spec.limits_lossless = parse_bool(key, value);
  else if (key == "threads") spec.threads = parse_unsigned(key, value);
  else throw UsageError("unknown setting '" + key + "'");
}

void check_spec(const ScanSpec& spec, const std::vector<std::string>& fixed) {
  const std::string ax = axis_key(spec.axis);
  if (std::find(fixed.begin(), fixed.end(), ax) != fixed.end()) {
    throw UsageError("--" + ax + " is fixed but also the swept axis");
  }
  if (spec.steps < 2) throw UsageError("--steps must be at least 2");
  if (!(spec.min < spec.max)) throw UsageError("--min must be smaller than --max");
  if (spec.pairs.empty()) throw UsageError("--pairs is empty");
  if (spec.ks.empty()) throw UsageError("--k is empty");
  try {
    SetupParams p = spec.base;
    validate(p);
    for (double x : {spec.min, spec.max}) validate(spec.point(0, 0, 1, x));
  } catch (const kmzi::InvalidArgument& e) {
    throw UsageError(std::string("out-of-range value: ") + e.what());
  }
}

ScanSpec resolve_spec(const std::optional<std::string>& config_path,
                      const std::vector<std::pair<std::string, std::string>>& settings) {
  ScanSpec spec;
  std::vector<std::string> fixed;
  if (config_path) {
    for (const auto& [k, v] : read_config_file(*config_path)) {
      apply_setting(spec, k, v);
      fixed.push_back(k);
    }
  }
  for (const auto& [k, v] : settings) {
    apply_setting(spec, k, v);
    fixed.push_back(k);
  }
  const auto [lo, hi] = default_range(spec.axis);
  if (std::find(fixed.begin(), fixed.end(), "min") == fixed.end()) spec.min = lo;
  if (std::find(fixed.begin(), fixed.end(), "max") == fixed.end()) spec.max = hi;
  check_spec(spec, fixed);
  return spec;
}

}  // namespace kmzi::cli
