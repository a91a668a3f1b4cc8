#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace kmzi::cli {

/// One CSV record.  Metric cells left empty (nullopt) were not requested by
/// the metric or failed; the reason is in flags.
struct ScanRow {
  unsigned k = 1, m = 0, n = 0;
  double r = 0.0, alpha = 0.0, phi = 0.0, loss = 0.0;
  std::optional<double> mean_id, var_id, delta_phi, nbar, sql, hl, sub_hl, shl;
  std::optional<double> f_ideal, qcrb, f_lossy, qcrb_lossy, mu1_opt, mu2_opt;
  std::vector<std::string> flags;

  void flag(const std::string& f);
};

const std::vector<std::string>& scan_header();

/// %.17g, with "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double v);

void write_header(std::ostream& os);
void write_row(std::ostream& os, const ScanRow& row);
void write_csv(std::ostream& os, const std::vector<ScanRow>& rows);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Throws MalformedInput naming the column when it is absent.
  std::size_t column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

/// Strict reader: header mandatory, every row the width of the header, at
/// least one row.  Throws IoError or MalformedInput.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(std::istream& is);

/// Parses a cell written by format_number.  Empty cells give nullopt;
/// anything else unparsable throws MalformedInput.
std::optional<double> parse_cell(const std::string& cell);

}  // namespace kmzi::cli
