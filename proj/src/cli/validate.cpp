#include "kmzi/cli/validate.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "kmzi/cli/config.hpp"
#include "kmzi/error.hpp"
#include "kmzi/fock/pipeline.hpp"
#include "kmzi/metrology/lossy.hpp"

namespace kmzi::cli {

namespace {

constexpr double kTol = 1e-6;
constexpr double kSensitivityTol = 1e-5;
// |d<I_D>/dphi| below this fraction of sqrt(<I_D^2>) counts as stationary.
constexpr double kStationaryRatio = 1e-6;
// Tighter than the library default so truncation stays far below kTol in <n^4>.
constexpr double kValidateTailTol = 1e-14;

class Tracker {
 public:
  void record(const std::string& metric, double tol, double analytic, double oracle,
              const std::string& where, double scale = 0.0) {
    auto& d = get(metric, tol);
    const double den = std::max({std::abs(oracle), scale * 1e-12, 1e-300});
    const double rel = std::abs(analytic - oracle) / den;
    ++d.samples;
    if (!(rel <= d.max_rel)) {
      d.max_rel = std::isnan(rel) ? HUGE_VAL : rel;
      d.worst_point = where;
    }
  }
  void skip(const std::string& metric, double tol) { ++get(metric, tol).skipped; }

  std::vector<MetricDeviation> take() {
    std::vector<MetricDeviation> out;
    for (const auto& name : order_) out.push_back(map_[name]);
    return out;
  }

 private:
  MetricDeviation& get(const std::string& metric, double tol) {
    auto it = map_.find(metric);
    if (it == map_.end()) {
      order_.push_back(metric);
      MetricDeviation d;
      d.metric = metric;
      d.tolerance = tol;
      it = map_.emplace(metric, d).first;
    }
    return it->second;
  }
  std::map<std::string, MetricDeviation> map_;
  std::vector<std::string> order_;
};

}  // namespace

ValidateGrid validate_preset(const std::string& name) {
  ValidateGrid g;
  g.r = {0.3, 0.9};
  g.alpha = {0.5, 1.0};
  g.loss = {0.0, 0.3};
  g.phi = {0.7, 3.12};
  g.k = {1, 2};
  if (name == "smoke") {
    g.mn = {0};
    g.r = {0.3};
    g.alpha = {0.5};
  } else if (name == "small") {
    g.mn = {0, 1};
  } else if (name == "full") {
    g.mn = {0, 1, 2};
  } else {
    throw UsageError("unknown preset '" + name + "' (smoke, small, full)");
  }
  return g;
}

bool ValidateReport::ok() const {
  for (const auto& m : metrics) {
    if (!m.ok()) return false;
  }
  return !metrics.empty();
}

ValidateReport run_validate(const ValidateGrid& grid, std::ostream& log,
                            const metrology::StirlingTable& stirling) {
  Tracker t;
  const auto t0 = std::chrono::steady_clock::now();
  for (unsigned mn : grid.mn) {
    for (double r : grid.r) {
      for (double alpha : grid.alpha) {
        for (double loss : grid.loss) {
          SetupParams base;
          base.m = base.n = mn;
          base.r = r;
          base.alpha = alpha;
          base.loss = loss;
          fock::OracleOptions oopt;
          oopt.tail_tol = kValidateTailTol;
          const fock::OraclePipeline o(base, oopt);
          const metrology::AnalyticEvaluator a0(base);
          const std::string where0 = describe(base);

          t.record("N_mn", kTol, a0.normalization(), o.normalization(), where0);
          const MomentTable ma = a0.photon_moments(stirling);
          const MomentTable mo = o.moments();
          for (int w = 0; w < 4; ++w) {
            t.record("<n^" + std::to_string(w + 1) + ">", kTol, ma.raw[w], mo.raw[w], where0);
          }
          for (unsigned k : {1u, 2u}) {
            t.record("F" + std::to_string(k), kTol, metrology::qfi_from_moments(ma, k), o.qfi(k),
                     where0);
          }
          for (auto [mu1, mu2] : {std::pair{0.0, 0.0}, std::pair{-0.5, 0.3}}) {
            t.record("C_Q k=2", kTol, metrology::cq_k2(ma, loss, mu1, mu2), o.cq_k2(mu1, mu2),
                     where0);
          }
          for (double g : {0.0, 0.5}) {
            t.record("C_Q k=1", kTol, metrology::cq_k1(ma, loss, g), o.cq_k1(g), where0);
          }

          for (double phi : grid.phi) {
            for (unsigned k : grid.k) {
              SetupParams p = base;
              p.phi = phi;
              p.k = k;
              const std::string where = describe(p);
              const metrology::AnalyticEvaluator a(p);
              const auto sa = a.intensity();
              const auto so = o.intensity(phi, k);
              const double scale = std::sqrt(std::abs(so.meansq));
              t.record("<I_D>", kTol, sa.mean, so.mean, where, scale);
              t.record("<I_D^2>", kTol, sa.meansq, so.meansq, where);
              t.record("nbar", kTol, a.mean_photon_number(), o.nbar(phi, k), where);
              if (std::abs(sa.dmean_dphi) < kStationaryRatio * scale) {
                t.skip("delta_phi", kSensitivityTol);
                continue;
              }
              try {
                t.record("delta_phi", kSensitivityTol, a.phase_sensitivity(),
                         o.delta_phi(phi, k), where);
              } catch (const SensitivityUndefined&) {
                t.skip("delta_phi", kSensitivityTol);
              }
            }
          }
          const double secs =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          char buf[200];
          std::snprintf(buf, sizeof buf, "  m=n=%u r=%g alpha=%g loss=%g cutoff=%u  [%.1fs]\n",
                        mn, r, alpha, loss, o.cutoff(), secs);
          log << buf << std::flush;
        }
      }
    }
  }

  ValidateReport rep;
  rep.metrics = t.take();
  log << "\nmetric       max_rel_dev   tolerance   samples  status  worst point\n";
  for (const auto& m : rep.metrics) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-12s %.3e     %.0e       %4u     %-6s  %s", m.metric.c_str(),
                  m.max_rel, m.tolerance, m.samples, m.ok() ? "ok" : "FAIL",
                  m.worst_point.c_str());
    log << buf;
    if (m.skipped) log << "  (" << m.skipped << " stationary points skipped)";
    log << '\n';
  }
  return rep;
}

}  // namespace kmzi::cli
