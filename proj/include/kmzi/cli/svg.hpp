#pragma once

#include <string>

#include "kmzi/cli/csv.hpp"

namespace kmzi::cli {

struct PlotOptions {
  std::string x = "phi";
  std::string y = "delta_phi";
  bool log_y = false;
  bool reference_lines = true;  // sql, hl, sub_hl, shl when present
};

/// One polyline per (m, n, k) series plus dashed reference curves.
/// Throws MalformedInput when a column is missing or holds no data.
std::string render_svg(const CsvTable& table, const PlotOptions& opts);

/// Reads csv_path, renders and writes svg_path (IoError on failure).
void emit_svg(const std::string& csv_path, const std::string& svg_path, const PlotOptions& opts);

}  // namespace kmzi::cli
