#pragma once

#include <vector>

#include "kmzi/cli/config.hpp"
#include "kmzi/cli/csv.hpp"

namespace kmzi::cli {

struct PointOptions {
  Metric metric = Metric::Sensitivity;
  bool limits_lossless = false;
  bool oracle_check = false;
};

/// Evaluates one parameter point.  Library errors become flags with the
/// affected cells left empty.
ScanRow evaluate_point(const SetupParams& p, const PointOptions& opts);

/// Rows ordered by pair, then k, then grid point, whatever the thread count.
std::vector<ScanRow> run_scan(const ScanSpec& spec);

}  // namespace kmzi::cli
