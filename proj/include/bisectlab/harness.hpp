#pragma once

// Experiment harness: declarative sweep specs over (n, p, q) grids, seeded
// per-trial recovery runs, deterministic multi-threaded execution, CSV
// emission, and the perturbation-calibration table.

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "bisectlab/census.hpp"
#include "bisectlab/graph.hpp"
#include "bisectlab/model.hpp"
#include "bisectlab/refine.hpp"
#include "bisectlab/rng.hpp"
#include "bisectlab/spectral.hpp"
#include "bisectlab/thresholds.hpp"

namespace bisectlab {

// ---------------------------------------------------------------------------
// Experiment specification
// ---------------------------------------------------------------------------

enum class Measurement {
  exact_recovery,
  overlap,
  minority_stats,
  both_label_minorities,
  stage_errors,
  norm_estimate,
  timing,
};

inline constexpr std::array<Measurement, 7> all_measurements = {
    Measurement::exact_recovery,     Measurement::overlap,
    Measurement::minority_stats,     Measurement::both_label_minorities,
    Measurement::stage_errors,       Measurement::norm_estimate,
    Measurement::timing,
};

inline const char* measurement_name(Measurement m) {
  switch (m) {
    case Measurement::exact_recovery: return "exact_recovery";
    case Measurement::overlap: return "overlap";
    case Measurement::minority_stats: return "minority_stats";
    case Measurement::both_label_minorities: return "both_label_minorities";
    case Measurement::stage_errors: return "stage_errors";
    case Measurement::norm_estimate: return "norm_estimate";
    case Measurement::timing: return "timing";
  }
  return "unknown";
}

inline Measurement measurement_from_name(std::string_view name) {
  for (Measurement m : all_measurements)
    if (name == measurement_name(m)) return m;
  throw std::invalid_argument("unknown measurement: " + std::string(name));
}

// One grid point. Points are entered either as probabilities (p, q) or as
// log-density coefficients (a, b) with p = a ln(n)/n and q = b ln(n)/n, where
// n is the class size (each class has n nodes, the graph has 2n).
struct GridPoint {
  std::int64_t n = 0;
  double p = 0.0;
  double q = 0.0;
  bool from_ab = false;  // true when the point was entered as (n, a, b)
  double a = std::numeric_limits<double>::quiet_NaN();
  double b = std::numeric_limits<double>::quiet_NaN();
};

// Builds a (p, q)-form grid point, deriving (a, b) for reporting.
inline GridPoint grid_point_pq(std::int64_t n, double p, double q) {
  GridPoint pt;
  pt.n = n;
  pt.p = p;
  pt.q = q;
  pt.from_ab = false;
  if (n > 1) {
    double ln_n = std::log(static_cast<double>(n));
    pt.a = static_cast<double>(n) * p / ln_n;
    pt.b = static_cast<double>(n) * q / ln_n;
  }
  return pt;
}

// Builds an (a, b)-form grid point, resolving the probabilities.
inline GridPoint grid_point_ab(std::int64_t n, double a, double b) {
  if (n < 2) throw std::invalid_argument("(n, a, b) grid points need n >= 2");
  GridPoint pt;
  pt.n = n;
  pt.from_ab = true;
  pt.a = a;
  pt.b = b;
  double ln_n = std::log(static_cast<double>(n));
  pt.p = a * ln_n / static_cast<double>(n);
  pt.q = b * ln_n / static_cast<double>(n);
  return pt;
}

struct ExperimentSpec {
  std::vector<GridPoint> grid;
  std::int64_t trials = 1;
  std::uint64_t master_seed = 0;
  double epsilon = 0.5;
  std::int64_t m = 10;                     // replica block count
  std::vector<Measurement> measurements;   // emission order for CSV columns
};

inline void validate_spec(const ExperimentSpec& spec) {
  if (spec.grid.empty()) throw std::invalid_argument("experiment grid is empty");
  if (spec.trials < 1) throw std::invalid_argument("experiment needs trials >= 1");
  if (spec.m < 2) throw std::invalid_argument("experiment needs m >= 2");
  if (!(spec.epsilon > 0.0)) throw std::invalid_argument("experiment needs epsilon > 0");
  if (spec.measurements.empty())
    throw std::invalid_argument("experiment needs at least one measurement");
  for (std::size_t i = 0; i < spec.measurements.size(); ++i)
    for (std::size_t j = i + 1; j < spec.measurements.size(); ++j)
      if (spec.measurements[i] == spec.measurements[j])
        throw std::invalid_argument("duplicate measurement in experiment spec");
  for (const GridPoint& pt : spec.grid) {
    if (pt.n < 1) throw std::invalid_argument("grid point needs n >= 1");
    if (!(pt.p >= 0.0 && pt.p <= 1.0 && pt.q >= 0.0 && pt.q <= 1.0))
      throw std::invalid_argument("grid point needs probabilities in [0, 1]");
  }
}

inline bool spec_wants(const ExperimentSpec& spec, Measurement m) {
  return std::find(spec.measurements.begin(), spec.measurements.end(), m) !=
         spec.measurements.end();
}

// ---------------------------------------------------------------------------
// Trial execution
// ---------------------------------------------------------------------------

struct TrialResult {
  std::int64_t point = 0;   // index into ExperimentSpec::grid
  std::int64_t trial = 0;
  std::uint64_t seed = 0;   // derived seed actually used

  bool exact = false;                 // final labelling matches hidden (up to sign)
  double delta_final = std::numeric_limits<double>::quiet_NaN();  // overlap error
  std::int64_t minority_count = -1;   // hidden-labelling nodes with margin <= 0
  std::int64_t fragile_count = -1;    // |V_epsilon| under the hidden labelling
  bool both_label_minorities = false; // minorities present inside both classes
  std::array<std::int64_t, 3> stage_errors{-1, -1, -1};
  double centered_norm = std::numeric_limits<double>::quiet_NaN();
  double seconds_sense = 0.0;
  double seconds_spectral = 0.0;
  double seconds_replica = 0.0;
  double seconds_relabel = 0.0;

  std::string error;  // empty on success; failure reason otherwise
};

// Runs one seeded trial: generate, recover, and measure against the hidden
// labelling. Failures are captured in TrialResult::error; they never throw.
inline TrialResult run_trial(const ExperimentSpec& spec, std::int64_t point_index,
                             std::int64_t trial_index) {
  TrialResult out;
  out.point = point_index;
  out.trial = trial_index;
  out.seed = mix_seed(spec.master_seed, static_cast<std::uint64_t>(point_index),
                      static_cast<std::uint64_t>(trial_index));
  const GridPoint& pt = spec.grid.at(static_cast<std::size_t>(point_index));
  try {
    PlantedInstance inst = generate(ModelParams{pt.n, pt.p, pt.q}, out.seed);

    ReplicaConfig cfg;
    cfg.m = spec.m;
    cfg.epsilon = spec.epsilon;
    cfg.seed = out.seed;
    RecoveryTrace trace = recover(inst.graph, cfg, &inst.hidden);

    out.stage_errors = trace.stage_errors;
    out.seconds_sense = trace.sense_seconds;
    out.seconds_spectral = trace.spectral_seconds;
    out.seconds_replica = trace.replica_seconds;
    out.seconds_relabel = trace.relabel_seconds;
    if (!trace.error.empty()) {
      out.error = trace.error;
    } else {
      out.delta_final = overlap_error(trace.final_labelling, inst.hidden);
      out.exact = trace.stage_errors[2] == 0;
    }

    if (spec_wants(spec, Measurement::minority_stats) ||
        spec_wants(spec, Measurement::both_label_minorities)) {
      Sense sense = model_sense(inst.params);
      MajorityCensus cen = census(inst.graph, inst.hidden, sense, spec.epsilon,
                                  inst.params);
      out.minority_count = cen.minority_count;
      out.fragile_count = static_cast<std::int64_t>(cen.v_epsilon.size());
      bool plus_minority = false, minus_minority = false;
      for (std::size_t v = 0; v < cen.margins.size(); ++v) {
        if (cen.margins[v] > 0) continue;
        (inst.hidden.signs[v] == 1 ? plus_minority : minus_minority) = true;
      }
      out.both_label_minorities = plus_minority && minus_minority;
    }

    if (spec_wants(spec, Measurement::norm_estimate))
      out.centered_norm = centered_norm_estimate(inst, out.seed);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct PointSummary {
  std::int64_t point = 0;
  GridPoint grid;
  std::int64_t trials = 0;
  double success_rate = std::numeric_limits<double>::quiet_NaN();
  double mean_delta = std::numeric_limits<double>::quiet_NaN();
  double mean_minority_fraction = std::numeric_limits<double>::quiet_NaN();
  double both_label_rate = std::numeric_limits<double>::quiet_NaN();
  double exact_P_ref = std::numeric_limits<double>::quiet_NaN();  // P(n-1, n, p, q)
  ThresholdReport report;
  std::int64_t error_count = 0;
};

struct SweepResult {
  std::vector<TrialResult> rows;        // ordered by (point, trial)
  std::vector<PointSummary> summaries;  // one per grid point
};

namespace detail {

inline PointSummary summarize_point(const ExperimentSpec& spec, std::int64_t point_index,
                                    const std::vector<TrialResult>& rows) {
  const GridPoint& pt = spec.grid.at(static_cast<std::size_t>(point_index));
  PointSummary s;
  s.point = point_index;
  s.grid = pt;
  s.trials = spec.trials;

  std::int64_t ok = 0;
  double exact_sum = 0.0, delta_sum = 0.0, minority_sum = 0.0, both_sum = 0.0;
  bool have_minority = spec_wants(spec, Measurement::minority_stats) ||
                       spec_wants(spec, Measurement::both_label_minorities);
  for (const TrialResult& r : rows) {
    if (r.point != point_index) continue;
    if (!r.error.empty()) {
      ++s.error_count;
      continue;
    }
    ++ok;
    exact_sum += r.exact ? 1.0 : 0.0;
    delta_sum += r.delta_final;
    if (have_minority) {
      minority_sum += static_cast<double>(r.minority_count) /
                      static_cast<double>(2 * pt.n);
      both_sum += r.both_label_minorities ? 1.0 : 0.0;
    }
  }
  if (ok > 0) {
    s.success_rate = exact_sum / static_cast<double>(ok);
    s.mean_delta = delta_sum / static_cast<double>(ok);
    if (have_minority) {
      s.mean_minority_fraction = minority_sum / static_cast<double>(ok);
      s.both_label_rate = both_sum / static_cast<double>(ok);
    }
  }
  if (pt.n >= 2)
    s.exact_P_ref = exact_crossing(pt.n - 1, pt.n, pt.p, pt.q).value;
  s.report = threshold_report(pt.n, pt.p, pt.q);
  return s;
}

}  // namespace detail

// Runs every (point, trial) cell of the spec on `workers` threads. Results are
// slotted by index, so the output is identical for every worker count; only
// the timing measurement (wall clock) varies between runs.
inline SweepResult run_sweep(const ExperimentSpec& spec, std::int64_t workers = 0) {
  validate_spec(spec);
  if (workers < 0) throw std::invalid_argument("run_sweep needs workers >= 0");
  if (workers == 0) {
    unsigned hc = std::thread::hardware_concurrency();
    workers = hc == 0 ? 1 : static_cast<std::int64_t>(hc);
  }

  const std::int64_t points = static_cast<std::int64_t>(spec.grid.size());
  const std::int64_t total = points * spec.trials;
  SweepResult result;
  result.rows.resize(static_cast<std::size_t>(total));

  std::atomic<std::int64_t> next{0};
  auto work = [&] {
    for (;;) {
      std::int64_t cell = next.fetch_add(1);
      if (cell >= total) return;
      std::int64_t point_index = cell / spec.trials;
      std::int64_t trial_index = cell % spec.trials;
      result.rows[static_cast<std::size_t>(cell)] =
          run_trial(spec, point_index, trial_index);
    }
  };

  if (workers <= 1 || total <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    std::int64_t count = std::min<std::int64_t>(workers, total);
    pool.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  result.summaries.reserve(static_cast<std::size_t>(points));
  for (std::int64_t pi = 0; pi < points; ++pi)
    result.summaries.push_back(detail::summarize_point(spec, pi, result.rows));
  return result;
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

namespace detail {

inline std::string csv_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string csv_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out += (c == ',' || c == '\n' || c == '\r' || c == '"') ? ';' : c;
  return out;
}

inline void append_measurement_headers(Measurement m, std::ostream& os) {
  switch (m) {
    case Measurement::exact_recovery: os << ",exact"; break;
    case Measurement::overlap: os << ",delta_final"; break;
    case Measurement::minority_stats: os << ",minority_count,fragile_count"; break;
    case Measurement::both_label_minorities: os << ",both_label_minorities"; break;
    case Measurement::stage_errors: os << ",err_spectral,err_replica,err_final"; break;
    case Measurement::norm_estimate: os << ",centered_norm"; break;
    case Measurement::timing:
      os << ",seconds_sense,seconds_spectral,seconds_replica,seconds_relabel";
      break;
  }
}

inline void append_measurement_values(Measurement m, const TrialResult& r,
                                      std::ostream& os) {
  switch (m) {
    case Measurement::exact_recovery:
      os << ',' << (r.exact ? 1 : 0);
      break;
    case Measurement::overlap:
      os << ',' << csv_double(r.delta_final);
      break;
    case Measurement::minority_stats:
      os << ',' << r.minority_count << ',' << r.fragile_count;
      break;
    case Measurement::both_label_minorities:
      os << ',' << (r.both_label_minorities ? 1 : 0);
      break;
    case Measurement::stage_errors:
      os << ',' << r.stage_errors[0] << ',' << r.stage_errors[1] << ','
         << r.stage_errors[2];
      break;
    case Measurement::norm_estimate:
      os << ',' << csv_double(r.centered_norm);
      break;
    case Measurement::timing:
      os << ',' << csv_double(r.seconds_sense) << ',' << csv_double(r.seconds_spectral)
         << ',' << csv_double(r.seconds_replica) << ',' << csv_double(r.seconds_relabel);
      break;
  }
}

}  // namespace detail

// Writes one row per trial: point fields, trial index, seed, then the
// requested measurements in spec order, then the error column.
inline void write_rows_csv(const ExperimentSpec& spec, const std::vector<TrialResult>& rows,
                           std::ostream& os) {
  os << "point,n,p,q,a,b,trial,seed";
  for (Measurement m : spec.measurements) detail::append_measurement_headers(m, os);
  os << ",error\n";
  for (const TrialResult& r : rows) {
    const GridPoint& pt = spec.grid.at(static_cast<std::size_t>(r.point));
    os << r.point << ',' << pt.n << ',' << detail::csv_double(pt.p) << ','
       << detail::csv_double(pt.q) << ',' << detail::csv_double(pt.a) << ','
       << detail::csv_double(pt.b) << ',' << r.trial << ',' << r.seed;
    for (Measurement m : spec.measurements) detail::append_measurement_values(m, r, os);
    os << ',' << detail::csv_escape(r.error) << '\n';
  }
}

// Writes one row per grid point with aggregate statistics and the threshold
// criteria evaluated at that point.
inline void write_summary_csv(const SweepResult& result, std::ostream& os) {
  os << "point,n,p,q,a,b,trials,success_rate,mean_delta,mean_minority_fraction,"
        "both_label_rate,exact_P_ref,exact_log_nP,sparse_stat,dense_stat,weak_stat,"
        "regime,hypothesis_unmet,error_count\n";
  for (const PointSummary& s : result.summaries) {
    const ThresholdReport& rep = s.report;
    os << s.point << ',' << s.grid.n << ',' << detail::csv_double(s.grid.p) << ','
       << detail::csv_double(s.grid.q) << ',' << detail::csv_double(s.grid.a) << ','
       << detail::csv_double(s.grid.b) << ',' << s.trials << ','
       << detail::csv_double(s.success_rate) << ',' << detail::csv_double(s.mean_delta)
       << ',' << detail::csv_double(s.mean_minority_fraction) << ','
       << detail::csv_double(s.both_label_rate) << ','
       << detail::csv_double(s.exact_P_ref) << ','
       << detail::csv_double(rep.exact_log_nP) << ','
       << (rep.sparse_stat ? detail::csv_double(*rep.sparse_stat) : "nan") << ','
       << (rep.dense_stat ? detail::csv_double(*rep.dense_stat) : "nan") << ','
       << detail::csv_double(rep.weak_stat) << ',' << regime_name(rep.regime) << ','
       << (rep.hypothesis_unmet ? 1 : 0) << ',' << s.error_count << '\n';
  }
}

// ---------------------------------------------------------------------------
// Perturbation calibration
// ---------------------------------------------------------------------------

// One cell of the calibration grid: crossing probability at class size m with
// edge probabilities (p, q), perturbed by moving ell successes.
struct CalibrationPoint {
  std::int64_t m = 0;
  double p = 0.0;
  double q = 0.0;
  std::int64_t ell = 0;
};

struct CalibrationRow {
  CalibrationPoint point;
  double log_numerator = 0.0;   // ln((P_perturbed - 2 m^-2)_+ / P_exact)
  double ratio = 0.0;           // log_numerator / (ell sqrt(ln m / (m p)))
  bool hypothesis_met = false;  // m p >= 64 ln m and ell <= sqrt(m p ln m)
};

struct CalibrationTable {
  std::vector<CalibrationRow> rows;
  double max_ratio = -std::numeric_limits<double>::infinity();  // over finite ratios
};

// Measures how fast the perturbed crossing probability grows with the
// perturbation size ell, normalized by the theoretical scale
// ell * sqrt(ln m / (m p)). Rows violating the preconditions are still
// computed and flagged via hypothesis_met. ell = 0 rows have ratio 0.
inline CalibrationTable calibrate_perturbation(const std::vector<CalibrationPoint>& grid) {
  CalibrationTable table;
  table.rows.reserve(grid.size());
  for (const CalibrationPoint& pt : grid) {
    if (pt.m < 2) throw std::invalid_argument("calibration needs m >= 2");
    if (pt.ell < 0) throw std::invalid_argument("calibration needs ell >= 0");
    check_prob_pair(pt.p, pt.q);
    CalibrationRow row;
    row.point = pt;
    double md = static_cast<double>(pt.m);
    double ln_m = std::log(md);
    double exact_log = exact_crossing(pt.m, pt.m, pt.p, pt.q).log_value;
    double pert_log = perturbed_crossing(pt.m, pt.m, pt.p, pt.q, pt.ell).log_value;
    // ln(P_perturbed - 2/m^2), clamped to -inf when the difference is <= 0.
    double floor_log = std::log(2.0) - 2.0 * ln_m;
    double diff_log = pert_log > floor_log
                          ? pert_log + std::log1p(-std::exp(floor_log - pert_log))
                          : neg_inf;
    row.log_numerator = diff_log - exact_log;
    if (pt.ell == 0) {
      row.ratio = 0.0;
    } else {
      double denom = static_cast<double>(pt.ell) * std::sqrt(ln_m / (md * pt.p));
      row.ratio = row.log_numerator / denom;
    }
    row.hypothesis_met = md * pt.p >= 64.0 * ln_m &&
                         static_cast<double>(pt.ell) <= std::sqrt(md * pt.p * ln_m);
    if (std::isfinite(row.ratio)) table.max_ratio = std::max(table.max_ratio, row.ratio);
    table.rows.push_back(row);
  }
  return table;
}

// The calibration grid used by the command-line tool and the acceptance
// checks: m in {2000, 10000}, p in {0.02, 0.1}, q/p in {0.3, 0.6}, and ell
// running over powers of two up to sqrt(m p ln m), plus the ell = 0 row.
inline std::vector<CalibrationPoint> default_calibration_grid() {
  std::vector<CalibrationPoint> grid;
  for (std::int64_t m : {2000, 10000}) {
    for (double p : {0.02, 0.1}) {
      for (double frac : {0.3, 0.6}) {
        double q = p * frac;
        double cap = std::sqrt(static_cast<double>(m) * p *
                               std::log(static_cast<double>(m)));
        grid.push_back({m, p, q, 0});
        for (std::int64_t ell = 1; static_cast<double>(ell) <= cap; ell *= 2)
          grid.push_back({m, p, q, ell});
      }
    }
  }
  return grid;
}

inline void write_calibration_csv(const CalibrationTable& table, std::ostream& os) {
  os << "m,p,q,ell,log_numerator,ratio,hypothesis_met\n";
  for (const CalibrationRow& row : table.rows) {
    os << row.point.m << ',' << detail::csv_double(row.point.p) << ','
       << detail::csv_double(row.point.q) << ',' << row.point.ell << ','
       << detail::csv_double(row.log_numerator) << ',' << detail::csv_double(row.ratio)
       << ',' << (row.hypothesis_met ? 1 : 0) << '\n';
  }
}

}  // namespace bisectlab
