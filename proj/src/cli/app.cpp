#include "kmzi/cli/app.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "kmzi/cli/config.hpp"
#include "kmzi/cli/csv.hpp"
#include "kmzi/cli/scan.hpp"
#include "kmzi/cli/svg.hpp"
#include "kmzi/cli/validate.hpp"
#include "kmzi/error.hpp"
#include "kmzi/metrology/analytic.hpp"

namespace kmzi::cli {

namespace {

struct ScanFlags {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> opts;
  std::string config;
  CLI::Option* config_opt = nullptr;
  CLI::Option* oracle_check = nullptr;
  CLI::Option* limits_lossless = nullptr;

  std::vector<std::pair<std::string, std::string>> given() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& key : setting_keys()) {
      const auto it = opts.find(key);
      if (it != opts.end() && it->second->count() > 0) out.emplace_back(key, values.at(key));
    }
    if (oracle_check->count() > 0) out.emplace_back("oracle-check", "true");
    if (limits_lossless->count() > 0) out.emplace_back("limits-lossless", "true");
    return out;
  }
};

void add_value_option(CLI::App& app, ScanFlags& f, const std::string& key,
                      const std::string& help) {
  f.opts[key] = app.add_option("--" + key, f.values[key], help);
}

void add_scan_flags(CLI::App& app, ScanFlags& f) {
  add_value_option(app, f, "metric", "sensitivity | qfi | qcrb-lossy | limits");
  add_value_option(app, f, "axis", "swept parameter: phi | r | alpha | loss");
  add_value_option(app, f, "min", "start of the sweep");
  add_value_option(app, f, "max", "end of the sweep");
  add_value_option(app, f, "steps", "number of grid points (>= 2)");
  add_value_option(app, f, "k", "comma list of Kerr orders, e.g. 1,2");
  add_value_option(app, f, "pairs", "photon additions m,n;m,n;...");
  add_value_option(app, f, "r", "squeezing parameter (default 0.9)");
  add_value_option(app, f, "alpha", "coherent amplitude (default 1)");
  add_value_option(app, f, "phi", "phase shift (default 3.12)");
  add_value_option(app, f, "loss", "loss rate in [0, 1] (default 0)");
  add_value_option(app, f, "out", "CSV output path (default stdout)");
  add_value_option(app, f, "svg", "also render an SVG plot to this path");
  add_value_option(app, f, "threads", "worker threads (default: hardware concurrency)");
  f.oracle_check = app.add_flag("--oracle-check", "cross-check every point against the Fock oracle");
  f.limits_lossless = app.add_flag("--limits-lossless", "reference limits from the l=0 photon number");
  f.config_opt = app.add_option("--config", f.config, "key = value settings file");
}

PlotOptions default_plot(const ScanSpec& spec) {
  PlotOptions p;
  p.x = to_string(spec.axis);
  switch (spec.metric) {
    case Metric::Sensitivity: p.y = "delta_phi"; p.log_y = true; break;
    case Metric::Qfi: p.y = "f_ideal"; break;
    case Metric::QcrbLossy: p.y = "qcrb_lossy"; p.log_y = true; break;
    case Metric::Limits: p.y = "nbar"; p.reference_lines = false; break;
  }
  return p;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

int cmd_scan(const ScanFlags& f, std::ostream& out) {
  const ScanSpec spec =
      resolve_spec(f.config_opt->count() ? std::optional(f.config) : std::nullopt, f.given());
  std::ofstream file;
  if (!spec.out.empty()) file = open_output(spec.out);
  std::ostream& os = spec.out.empty() ? out : file;
  write_csv(os, run_scan(spec));
  os.flush();
  if (!os) throw IoError("write to " + (spec.out.empty() ? "stdout" : spec.out) + " failed");
  if (!spec.svg.empty()) {
    if (spec.out.empty()) throw UsageError("--svg needs --out so the CSV can be re-read");
    file.close();
    emit_svg(spec.out, spec.svg, default_plot(spec));
  }
  return kExitOk;
}

int cmd_limits(const ScanFlags& f, std::ostream& out) {
  auto settings = f.given();
  for (const auto& [k, v] : settings) {
    static const std::vector<std::string> allowed = {"pairs", "r", "alpha", "loss", "out",
                                                     "limits-lossless"};
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw UsageError("--" + k + " is not accepted by limits");
    }
  }
  ScanSpec spec = resolve_spec(std::nullopt, settings);
  std::ofstream file;
  if (!spec.out.empty()) file = open_output(spec.out);
  std::ostream& os = spec.out.empty() ? out : file;
  os << "m,n,r,alpha,loss,nbar,sql,hl,sub_hl,shl\n";
  for (const auto& [m, n] : spec.pairs) {
    SetupParams p = spec.base;
    p.m = m;
    p.n = n;
    if (spec.limits_lossless) p.loss = 0.0;
    const PrecisionLimits lim = precision_limits(metrology::mean_photon_number(p));
    os << m << ',' << n << ',' << format_number(spec.base.r) << ','
       << format_number(spec.base.alpha) << ',' << format_number(spec.base.loss);
    for (double v : {lim.nbar, lim.sql, lim.hl, lim.sub_hl, lim.shl}) os << ',' << format_number(v);
    os << '\n';
  }
  os.flush();
  if (!os) throw IoError("write failed");
  return kExitOk;
}

int cmd_validate(const std::string& preset, const std::string& stirling_row, std::ostream& out) {
  const ValidateGrid grid = validate_preset(preset);
  metrology::StirlingTable st = metrology::kStirling;
  if (!stirling_row.empty()) {
    std::vector<double> row;
    std::stringstream ss(stirling_row);
    std::string item;
    while (std::getline(ss, item, ',')) row.push_back(parse_double("stirling", item));
    if (row.size() != 4) throw UsageError("--stirling takes four comma-separated values");
    std::copy(row.begin(), row.end(), st[3].begin());
  }
  out << "validate preset " << preset << ": analytic path vs Fock oracle\n";
  const ValidateReport rep = run_validate(grid, out, st);
  out << (rep.ok() ? "validate: PASS\n" : "validate: FAIL\n");
  return rep.ok() ? kExitOk : kExitValidation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kerr Mach-Zehnder phase-estimation metrics", "kmzi"};
  app.require_subcommand(1);

  ScanFlags scan_flags, limit_flags;
  auto* scan = app.add_subcommand("scan", "parameter sweep written as CSV");
  add_scan_flags(*scan, scan_flags);

  auto* limits = app.add_subcommand("limits", "SQL, HL, sub-HL and SHL for given pairs");
  add_scan_flags(*limits, limit_flags);

  std::string preset = "small", stirling_row;
  auto* validate = app.add_subcommand("validate", "compare the analytic path with the Fock oracle");
  validate->add_option("preset", preset, "smoke | small | full")->capture_default_str();
  validate->add_option("--stirling", stirling_row, "override the w=4 Stirling row (testing)");

  PlotOptions plot_opts;
  std::string plot_in, plot_out;
  bool no_ref = false;
  auto* plot = app.add_subcommand("plot", "render a scan CSV as SVG");
  plot->add_option("--in", plot_in, "scan CSV")->required();
  plot->add_option("--out", plot_out, "SVG output path")->required();
  plot->add_option("--x", plot_opts.x, "x column")->capture_default_str();
  plot->add_option("--y", plot_opts.y, "y column")->capture_default_str();
  plot->add_flag("--log", plot_opts.log_y, "log-scale y axis");
  plot->add_flag("--no-reference", no_ref, "omit sql/hl/sub_hl/shl curves");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (args.empty()) {
      err << app.help();
    } else {
      err << "kmzi: " << e.what() << "\nRun 'kmzi --help' for usage.\n";
    }
    return kExitUsage;
  }

  try {
    if (scan->parsed()) return cmd_scan(scan_flags, out);
    if (limits->parsed()) return cmd_limits(limit_flags, out);
    if (validate->parsed()) return cmd_validate(preset, stirling_row, out);
    if (plot->parsed()) {
      plot_opts.reference_lines = !no_ref;
      emit_svg(plot_in, plot_out, plot_opts);
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "kmzi: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "kmzi: " << e.what() << '\n';
    return kExitIo;
  } catch (const MalformedInput& e) {
    err << "kmzi: malformed input: " << e.what() << '\n';
    return kExitMalformed;
  } catch (const kmzi::InvalidArgument& e) {
    err << "kmzi: " << e.what() << '\n';
    return kExitUsage;
  } catch (const kmzi::Error& e) {
    err << "kmzi: " << e.what() << '\n';
    return kExitValidation;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace kmzi::cli
