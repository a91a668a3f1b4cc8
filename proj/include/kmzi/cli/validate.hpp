#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kmzi/metrology/analytic.hpp"

namespace kmzi::cli {

struct ValidateGrid {
  std::vector<unsigned> mn;  // m = n values
  std::vector<double> r, alpha, loss, phi;
  std::vector<unsigned> k;
};

/// "full": the complete acceptance grid; "small": m=n in {0,1};
/// "smoke": one (r, alpha) point at m=n=0, for quick exit-code checks.
ValidateGrid validate_preset(const std::string& name);

struct MetricDeviation {
  std::string metric;
  double tolerance = 0.0;
  double max_rel = 0.0;
  std::string worst_point;
  unsigned samples = 0;
  unsigned skipped = 0;

  bool ok() const { return max_rel <= tolerance; }
};

struct ValidateReport {
  std::vector<MetricDeviation> metrics;
  bool ok() const;
};

/// Compares the analytic path against the Fock oracle on every grid point.
/// Progress and the summary table go to log.
ValidateReport run_validate(const ValidateGrid& grid, std::ostream& log,
                            const metrology::StirlingTable& stirling = metrology::kStirling);

}  // namespace kmzi::cli
