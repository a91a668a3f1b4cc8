#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kmzi/cli/app.hpp"
#include "kmzi/cli/config.hpp"
#include "kmzi/cli/csv.hpp"
#include "kmzi/cli/scan.hpp"
#include "kmzi/cli/svg.hpp"

using namespace kmzi::cli;
namespace fs = std::filesystem;

namespace {

int run_args(std::vector<std::string> args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  if (out_text) *out_text = out.str();
  return code;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "kmzi_unit";
  fs::create_directories(dir);
  return dir / name;
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("documented scan flags resolve to a spec") {
  const ScanSpec s = resolve_spec(std::nullopt, {{"metric", "sensitivity"},
                                                 {"axis", "phi"},
                                                 {"min", "2.6"},
                                                 {"max", "3.7"},
                                                 {"steps", "200"},
                                                 {"k", "2"},
                                                 {"pairs", "0,0;1,1;2,2"}});
  CHECK(s.metric == Metric::Sensitivity);
  CHECK(s.axis == Axis::Phi);
  CHECK(s.steps == 200);
  CHECK(s.ks == std::vector<unsigned>{2});
  REQUIRE(s.pairs.size() == 3);
  CHECK(s.pairs[2] == std::pair<unsigned, unsigned>{2, 2});
  CHECK(s.base.r == 0.9);
  CHECK(s.base.alpha == 1.0);
  const auto g = s.grid();
  CHECK(g.front() == 2.6);
  CHECK(g.back() == 3.7);
}

TEST_CASE("usage errors") {
  CHECK_THROWS_AS(resolve_spec(std::nullopt, {{"loss", "1.5"}}), UsageError);
  CHECK_THROWS_AS(resolve_spec(std::nullopt, {{"steps", "1"}}), UsageError);
  CHECK_THROWS_AS(resolve_spec(std::nullopt, {{"min", "3"}, {"max", "2"}}), UsageError);
  CHECK_THROWS_AS(resolve_spec(std::nullopt, {{"axis", "r"}, {"r", "0.5"}}), UsageError);
  CHECK_THROWS_AS(resolve_spec(std::nullopt, {{"pairs", "1;2"}}), UsageError);
  CHECK_THROWS_AS(resolve_spec(std::nullopt, {{"k", "3"}}), UsageError);
  CHECK_THROWS_AS(resolve_spec(std::nullopt, {{"r", "abc"}}), UsageError);
  CHECK(run_args({}) == kExitUsage);
  CHECK(run_args({"scan", "--loss", "1.5"}) == kExitUsage);
  CHECK(run_args({"scan", "--frobnicate"}) == kExitUsage);
  CHECK(run_args({"validate", "huge"}) == kExitUsage);
}

TEST_CASE("axis ranges default per axis") {
  const ScanSpec s = resolve_spec(std::nullopt, {{"axis", "r"}});
  CHECK(s.min == 0.1);
  CHECK(s.max == 1.2);
  const ScanSpec a = resolve_spec(std::nullopt, {{"axis", "alpha"}});
  CHECK(a.min == 0.1);
  CHECK(a.max == 2.0);
}

TEST_CASE("config file values are overridden by flags") {
  const auto path = scratch("scan.conf");
  {
    std::ofstream f(path);
    f << "# canonical point\nmetric = qfi\naxis = r\nsteps = 5\nalpha = 0.5  # comment\n";
  }
  const ScanSpec s = resolve_spec(path.string(), {{"steps", "7"}});
  CHECK(s.metric == Metric::Qfi);
  CHECK(s.axis == Axis::R);
  CHECK(s.steps == 7);
  CHECK(s.base.alpha == 0.5);
  {
    std::ofstream f(path);
    f << "colour = blue\n";
  }
  CHECK_THROWS_AS(resolve_spec(path.string(), {}), UsageError);
  CHECK_THROWS_AS(resolve_spec(scratch("missing.conf").string(), {}), IoError);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(HUGE_VAL) == "inf");
  CHECK(format_number(-HUGE_VAL) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(*parse_cell("0.10000000000000001") == 0.1);
  CHECK(std::isinf(*parse_cell("inf")));
  CHECK(!parse_cell(""));
  CHECK_THROWS_AS(parse_cell("x1"), MalformedInput);
}

TEST_CASE("header follows the row field order") {
  std::ostringstream os;
  write_header(os);
  CHECK(os.str() ==
        "k,m,n,r,alpha,phi,loss,mean_ID,var_ID,delta_phi,nbar,sql,hl,sub_hl,shl,f_ideal,qcrb,"
        "f_lossy,qcrb_lossy,mu1_opt,mu2_opt,flags\n");
}

TEST_CASE("CSV reader rejects malformed input") {
  std::istringstream empty("k,m,n\n");
  CHECK_THROWS_AS(parse_csv(empty), MalformedInput);
  std::istringstream ragged("k,m,n\n1,0\n");
  CHECK_THROWS_AS(parse_csv(ragged), MalformedInput);
  std::istringstream none("");
  CHECK_THROWS_AS(parse_csv(none), MalformedInput);
}

TEST_CASE("repeated one-point scans are byte-identical") {
  std::string a, b;
  CHECK(run_args({"scan", "--steps", "2", "--min", "3.1", "--max", "3.12"}, &a) == kExitOk);
  CHECK(run_args({"scan", "--steps", "2", "--min", "3.1", "--max", "3.12"}, &b) == kExitOk);
  CHECK(a == b);
  CHECK(count(a, "\n") == 3);
}

TEST_CASE("thread count does not change the output") {
  ScanSpec s = resolve_spec(std::nullopt, {{"metric", "qcrb-lossy"},
                                           {"axis", "loss"},
                                           {"steps", "5"},
                                           {"k", "1,2"},
                                           {"pairs", "0,0;1,1"}});
  std::ostringstream one, four;
  s.threads = 1;
  write_csv(one, run_scan(s));
  s.threads = 4;
  write_csv(four, run_scan(s));
  CHECK(one.str() == four.str());
}

TEST_CASE("stationary points keep their row with a flag") {
  ScanSpec s = resolve_spec(std::nullopt, {{"r", "0"}, {"alpha", "0"}, {"steps", "2"}});
  const auto rows = run_scan(s);
  REQUIRE(rows.size() == 2);
  CHECK(!rows[0].delta_phi);
  CHECK(std::find(rows[0].flags.begin(), rows[0].flags.end(), "sensitivity-undefined") !=
        rows[0].flags.end());
}

TEST_CASE("lossy scan flags infinite bounds") {
  ScanSpec s = resolve_spec(std::nullopt, {{"metric", "qcrb-lossy"}, {"axis", "loss"}, {"steps", "2"}});
  const auto rows = run_scan(s);
  REQUIRE(rows.size() == 2);
  CHECK(std::isinf(*rows[1].qcrb_lossy));
  CHECK(std::find(rows[1].flags.begin(), rows[1].flags.end(), "qcrb-lossy-inf") !=
        rows[1].flags.end());
  std::ostringstream os;
  write_row(os, rows[1]);
  CHECK(os.str().find(",inf,") != std::string::npos);
}

TEST_CASE("oracle check agrees on a small point") {
  ScanSpec s = resolve_spec(std::nullopt, {{"r", "0.3"}, {"alpha", "0.5"}, {"steps", "2"},
                                           {"k", "1,2"}, {"oracle-check", "true"}});
  for (const auto& row : run_scan(s)) CHECK(row.flags.empty());
}

TEST_CASE("SVG for a loss scan: one series and four reference curves") {
  const auto csv = scratch("fig5.csv"), svg = scratch("fig5.svg");
  CHECK(run_args({"scan", "--metric", "qcrb-lossy", "--axis", "loss", "--min", "0", "--max",
                  "0.9", "--steps", "10", "--k", "2", "--out", csv.string(), "--svg",
                  svg.string()}) == kExitOk);
  std::ifstream in(svg);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(count(ss.str(), "class=\"series\"") == 1);
  CHECK(count(ss.str(), "class=\"reference\"") == 4);
}

TEST_CASE("plot errors map to exit 4") {
  const auto empty = scratch("empty.csv"), svg = scratch("bad.svg");
  {
    std::ofstream f(empty);
    write_header(f);
  }
  CHECK(run_args({"plot", "--in", empty.string(), "--out", svg.string()}) == kExitMalformed);
  const auto csv = scratch("one.csv");
  CHECK(run_args({"scan", "--steps", "2", "--out", csv.string()}) == kExitOk);
  std::ostringstream out, err;
  CHECK(run({"plot", "--in", csv.string(), "--y", "no_such", "--out", svg.string()}, out, err) ==
        kExitMalformed);
  CHECK(err.str().find("no_such") != std::string::npos);
  CHECK(run_args({"plot", "--in", scratch("absent.csv").string(), "--out", svg.string()}) ==
        kExitIo);
}

TEST_CASE("unwritable output is an I/O error") {
  CHECK(run_args({"scan", "--steps", "2", "--out", "/nonexistent-dir/x.csv"}) == kExitIo);
}

TEST_CASE("squeezing improves sensitivity at phi = 3.12") {
  // k=2 at fixed phi turns around past r ~ 0.5 (m=n=2) .. 0.9 (m=n=0)
  for (const auto& [k, rmax] : {std::pair{"1", "1.2"}, std::pair{"2", "0.5"}}) {
    ScanSpec s = resolve_spec(std::nullopt, {{"axis", "r"}, {"max", rmax}, {"steps", "12"},
                                             {"k", k}, {"pairs", "0,0;1,1;2,2"}});
    const auto rows = run_scan(s);
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
      if (rows[i].m != rows[i + 1].m) continue;
      REQUIRE(rows[i].delta_phi);
      CHECK(*rows[i + 1].delta_phi < *rows[i].delta_phi);
    }
  }
}

TEST_CASE("Kerr QFI exceeds the linear one along r") {
  ScanSpec s = resolve_spec(std::nullopt, {{"metric", "qfi"}, {"axis", "r"}, {"steps", "8"},
                                           {"k", "1,2"}, {"pairs", "0,0;1,1"}});
  const auto rows = run_scan(s);
  const std::size_t half = 8;
  for (std::size_t i = 0; i < half; ++i) {
    CHECK(*rows[half + i].f_ideal >= *rows[i].f_ideal);         // pair 0,0
    CHECK(*rows[3 * half + i].f_ideal >= *rows[2 * half + i].f_ideal);  // pair 1,1
  }
}
