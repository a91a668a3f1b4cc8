#include "kmzi/cli/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "kmzi/cli/config.hpp"

namespace kmzi::cli {

void ScanRow::flag(const std::string& f) {
  if (std::find(flags.begin(), flags.end(), f) == flags.end()) flags.push_back(f);
}

const std::vector<std::string>& scan_header() {
  static const std::vector<std::string> h = {
      "k",   "m",  "n",      "r",   "alpha",   "phi",  "loss",    "mean_ID",    "var_ID",
      "delta_phi", "nbar", "sql", "hl", "sub_hl", "shl", "f_ideal", "qcrb",
      "f_lossy",     "qcrb_lossy", "mu1_opt", "mu2_opt", "flags"};
  return h;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_header(std::ostream& os) {
  const auto& h = scan_header();
  for (std::size_t i = 0; i < h.size(); ++i) os << (i ? "," : "") << h[i];
  os << '\n';
}

void write_row(std::ostream& os, const ScanRow& row) {
  auto cell = [&](const std::optional<double>& v) {
    os << ',';
    if (v) os << format_number(*v);
  };
  os << row.k << ',' << row.m << ',' << row.n;
  for (double v : {row.r, row.alpha, row.phi, row.loss}) os << ',' << format_number(v);
  for (const auto* v : {&row.mean_id, &row.var_id, &row.delta_phi, &row.nbar, &row.sql, &row.hl,
                        &row.sub_hl, &row.shl, &row.f_ideal, &row.qcrb, &row.f_lossy,
                        &row.qcrb_lossy, &row.mu1_opt, &row.mu2_opt}) {
    cell(*v);
  }
  os << ',';
  for (std::size_t i = 0; i < row.flags.size(); ++i) os << (i ? "|" : "") << row.flags[i];
  os << '\n';
}

void write_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  write_header(os);
  for (const auto& r : rows) write_row(os, r);
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw MalformedInput("column '" + name + "' is absent");
  return static_cast<std::size_t>(it - header.begin());
}

bool CsvTable::has_column(const std::string& name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

CsvTable parse_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  if (!std::getline(is, line) || line.empty()) throw MalformedInput("CSV header is missing");
  if (line.back() == '\r') line.pop_back();
  t.header = split_line(line);
  unsigned lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != t.header.size()) {
      throw MalformedInput("line " + std::to_string(lineno) + " has " +
                           std::to_string(cells.size()) + " fields, expected " +
                           std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  if (t.rows.empty()) throw MalformedInput("CSV has no data rows");
  return t;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  return parse_csv(in);
}

std::optional<double> parse_cell(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  if (cell == "inf") return HUGE_VAL;
  if (cell == "-inf") return -HUGE_VAL;
  if (cell == "nan") return std::nan("");
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto res = std::from_chars(cell.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw MalformedInput("'" + cell + "' is not a number");
  }
  return v;
}

}  // namespace kmzi::cli
