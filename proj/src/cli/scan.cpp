#include "kmzi/cli/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "kmzi/error.hpp"
#include "kmzi/fock/pipeline.hpp"
#include "kmzi/jet/series.hpp"
#include "kmzi/metrology/analytic.hpp"
#include "kmzi/metrology/lossy.hpp"

namespace kmzi::cli {

namespace {

constexpr double kOracleTolerance = 1e-6;
constexpr double kOracleSensitivityTolerance = 1e-5;

// Runs f, turning library errors into row flags.
template <class F>
bool guarded(ScanRow& row, F&& f) {
  try {
    f();
    return true;
  } catch (const SensitivityUndefined&) {
    row.flag("sensitivity-undefined");
  } catch (const jet::SingularSeries&) {
    row.flag("singular-series");
  } catch (const DegenerateInput&) {
    row.flag("degenerate-nbar");
  } catch (const FormulaInconsistency&) {
    row.flag("formula-inconsistent");
  } catch (const NonConverged&) {
    row.flag("oracle-nonconverged");
  } catch (const kmzi::Error&) {
    row.flag("error");
  }
  return false;
}

double rel_dev(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

void fill_limits(ScanRow& row, const SetupParams& p, bool lossless) {
  guarded(row, [&] {
    SetupParams q = p;
    if (lossless) q.loss = 0.0;
    const double nbar = metrology::mean_photon_number(q);
    row.nbar = nbar;
    const PrecisionLimits lim = precision_limits(nbar);
    row.sql = lim.sql;
    row.hl = lim.hl;
    row.sub_hl = lim.sub_hl;
    row.shl = lim.shl;
  });
}

void check_against_oracle(ScanRow& row, const SetupParams& p, const PointOptions& opts) {
  const Metric metric = opts.metric;
  guarded(row, [&] {
    const fock::OraclePipeline o(p);
    bool ok = true;
    auto cmp = [&](const std::optional<double>& a, double b, double tol) {
      if (a && std::isfinite(*a) && rel_dev(*a, b) > tol) ok = false;
    };
    switch (metric) {
      case Metric::Sensitivity: {
        const auto s = o.intensity(p.phi, p.k);
        cmp(row.mean_id, s.mean, kOracleTolerance);
        cmp(row.var_id, s.variance(), kOracleTolerance);
        if (row.delta_phi) cmp(row.delta_phi, o.delta_phi(p.phi, p.k), kOracleSensitivityTolerance);
        break;
      }
      case Metric::Qfi:
        cmp(row.f_ideal, o.qfi(p.k), kOracleTolerance);
        break;
      case Metric::QcrbLossy:
        cmp(row.f_ideal, o.qfi(p.k), kOracleTolerance);
        if (p.k == 2 && row.mu1_opt && row.mu2_opt) {
          const auto m = metrology::photon_moments(p);
          cmp(metrology::cq_k2(m, p.loss, *row.mu1_opt, *row.mu2_opt),
              o.cq_k2(*row.mu1_opt, *row.mu2_opt), kOracleTolerance);
        } else if (p.k == 1 && row.mu1_opt) {
          const auto m = metrology::photon_moments(p);
          cmp(metrology::cq_k1(m, p.loss, *row.mu1_opt), o.cq_k1(*row.mu1_opt),
              kOracleTolerance);
        }
        break;
      case Metric::Limits:
        break;
    }
    // with --limits-lossless the nbar column is taken at l = 0
    if (!(opts.limits_lossless && p.loss > 0.0)) cmp(row.nbar, o.nbar(p.phi, p.k), kOracleTolerance);
    if (!ok) row.flag("oracle-mismatch");
  });
}

}  // namespace

ScanRow evaluate_point(const SetupParams& p, const PointOptions& opts) {
  ScanRow row;
  row.k = p.k;
  row.m = p.m;
  row.n = p.n;
  row.r = p.r;
  row.alpha = p.alpha;
  row.phi = p.phi;
  row.loss = p.loss;

  std::optional<metrology::AnalyticEvaluator> ev;
  if (!guarded(row, [&] { ev.emplace(p); })) {
    fill_limits(row, p, opts.limits_lossless);
    return row;
  }
  const auto& a = *ev;
  switch (opts.metric) {
    case Metric::Sensitivity:
      guarded(row, [&] {
        const auto s = a.intensity();
        row.mean_id = s.mean;
        row.var_id = s.variance();
      });
      guarded(row, [&] { row.delta_phi = a.phase_sensitivity(); });
      break;
    case Metric::Qfi:
      guarded(row, [&] {
        const auto q = a.qfi_ideal(p.k);
        row.f_ideal = q.f;
        row.qcrb = q.qcrb;
      });
      break;
    case Metric::QcrbLossy:
      guarded(row, [&] {
        const auto m = a.photon_moments();
        row.f_ideal = metrology::qfi_from_moments(m, p.k);
        row.qcrb = *row.f_ideal > 0.0 ? 1.0 / std::sqrt(*row.f_ideal) : HUGE_VAL;
        const auto L = p.k == 1 ? metrology::qfi_lossy_k1(m, p.loss)
                                : metrology::qfi_lossy_k2(m, p.loss);
        row.f_lossy = L.f_lossy;
        row.qcrb_lossy = L.qcrb_lossy;
        if (std::isfinite(L.mu1_opt)) row.mu1_opt = L.mu1_opt;
        if (p.k == 2 && std::isfinite(L.mu2_opt)) row.mu2_opt = L.mu2_opt;
        if (L.fallback) row.flag("mu-fallback");
      });
      break;
    case Metric::Limits:
      break;
  }
  fill_limits(row, p, opts.limits_lossless);
  if (row.qcrb && std::isinf(*row.qcrb)) row.flag("qcrb-inf");
  if (row.qcrb_lossy && std::isinf(*row.qcrb_lossy)) row.flag("qcrb-lossy-inf");
  if (opts.oracle_check) check_against_oracle(row, p, opts);
  return row;
}

std::vector<ScanRow> run_scan(const ScanSpec& spec) {
  std::vector<SetupParams> points;
  const auto grid = spec.grid();
  for (const auto& [m, n] : spec.pairs) {
    for (unsigned k : spec.ks) {
      for (double x : grid) points.push_back(spec.point(m, n, k, x));
    }
  }
  const PointOptions opts{spec.metric, spec.limits_lossless, spec.oracle_check};
  std::vector<ScanRow> rows(points.size());

  unsigned nthreads = spec.threads ? spec.threads : std::thread::hardware_concurrency();
  nthreads = std::clamp<unsigned>(nthreads, 1, static_cast<unsigned>(points.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    while (!failed) {
      const std::size_t i = next++;
      if (i >= points.size()) return;
      try {
        rows[i] = evaluate_point(points[i], opts);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

}  // namespace kmzi::cli
