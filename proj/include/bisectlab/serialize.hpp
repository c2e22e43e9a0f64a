#pragma once

// JSON parsing and emission for the experiment harness and the command-line
// tool: experiment specs in, reports and traces out.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bisectlab/harness.hpp"
#include "bisectlab/model.hpp"
#include "bisectlab/oracles.hpp"
#include "bisectlab/refine.hpp"
#include "bisectlab/thresholds.hpp"

namespace bisectlab {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// ExperimentSpec <- JSON
// ---------------------------------------------------------------------------
//
// Expected shape:
//   {
//     "grid": [{"n": 300, "a": 8, "b": 0.5}, {"n": 100, "p": 0.5, "q": 0.1}],
//     "trials": 50,
//     "master_seed": 123,          // optional, default 0
//     "epsilon": 0.5,              // optional, default 0.5
//     "m": 10,                     // optional, default 10
//     "measurements": ["exact_recovery", "overlap"]
//   }
// Each grid point gives n plus either (p, q) or (a, b), never both.

namespace detail {

inline double json_number(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw std::invalid_argument(std::string(key) + " must be a number");
  return v.get<double>();
}

inline std::int64_t json_integer(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer())
    throw std::invalid_argument(std::string(key) + " must be an integer");
  return v.get<std::int64_t>();
}

}  // namespace detail

inline GridPoint grid_point_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("grid point must be an object");
  std::int64_t n = detail::json_integer(j, "n");
  bool has_pq = j.contains("p") || j.contains("q");
  bool has_ab = j.contains("a") || j.contains("b");
  if (has_pq == has_ab)
    throw std::invalid_argument("grid point needs either (p, q) or (a, b)");
  if (has_pq) {
    if (!j.contains("p") || !j.contains("q"))
      throw std::invalid_argument("grid point needs both p and q");
    return grid_point_pq(n, detail::json_number(j, "p"), detail::json_number(j, "q"));
  }
  if (!j.contains("a") || !j.contains("b"))
    throw std::invalid_argument("grid point needs both a and b");
  return grid_point_ab(n, detail::json_number(j, "a"), detail::json_number(j, "b"));
}

inline ExperimentSpec experiment_spec_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("experiment spec must be an object");
  ExperimentSpec spec;
  if (!j.contains("grid") || !j.at("grid").is_array())
    throw std::invalid_argument("experiment spec needs a grid array");
  for (const json& pt : j.at("grid")) spec.grid.push_back(grid_point_from_json(pt));
  spec.trials = detail::json_integer(j, "trials");
  if (j.contains("master_seed")) {
    const json& v = j.at("master_seed");
    if (!v.is_number_integer())
      throw std::invalid_argument("master_seed must be an integer");
    spec.master_seed = v.get<std::uint64_t>();
  }
  if (j.contains("epsilon")) spec.epsilon = detail::json_number(j, "epsilon");
  if (j.contains("m")) spec.m = detail::json_integer(j, "m");
  if (j.contains("measurements")) {
    if (!j.at("measurements").is_array())
      throw std::invalid_argument("measurements must be an array of names");
    for (const json& name : j.at("measurements")) {
      if (!name.is_string())
        throw std::invalid_argument("measurements must be an array of names");
      spec.measurements.push_back(measurement_from_name(name.get<std::string>()));
    }
  } else {
    spec.measurements.assign(all_measurements.begin(), all_measurements.end());
  }
  validate_spec(spec);
  return spec;
}

inline ExperimentSpec experiment_spec_from_string(const std::string& text) {
  return experiment_spec_from_json(json::parse(text));
}

// ---------------------------------------------------------------------------
// Reports -> JSON
// ---------------------------------------------------------------------------

namespace detail {

// JSON has no inf/nan literals; emit those as strings so output stays valid.
inline json json_real(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

}  // namespace detail

inline json to_json(const ThresholdReport& r) {
  json j;
  j["n"] = r.n;
  j["p"] = r.p;
  j["q"] = r.q;
  j["exact_log_nP"] = detail::json_real(r.exact_log_nP);
  j["sparse_stat"] = r.sparse_stat ? detail::json_real(*r.sparse_stat) : json(nullptr);
  j["dense_stat"] = r.dense_stat ? detail::json_real(*r.dense_stat) : json(nullptr);
  j["weak_stat"] = detail::json_real(r.weak_stat);
  j["a"] = detail::json_real(r.a);
  j["b"] = detail::json_real(r.b);
  j["sigma"] = detail::json_real(r.sigma);
  j["regime"] = regime_name(r.regime);
  j["hypothesis_unmet"] = r.hypothesis_unmet;
  return j;
}

inline json to_json(const RecoveryTrace& t) {
  json j;
  j["sense"] = t.sense_report.sense == Sense::assortative ? "assortative"
                                                          : "disassortative";
  j["lambda1"] = detail::json_real(t.sense_report.lambda1);
  j["lambda2"] = detail::json_real(t.sense_report.lambda2);
  j["low_confidence"] = t.sense_report.low_confidence;
  j["stage_errors"] = {t.stage_errors[0], t.stage_errors[1], t.stage_errors[2]};
  j["sense_seconds"] = t.sense_seconds;
  j["spectral_seconds"] = t.spectral_seconds;
  j["replica_seconds"] = t.replica_seconds;
  j["relabel_seconds"] = t.relabel_seconds;
  j["m_used"] = t.m_used;
  j["epsilon"] = t.epsilon;
  j["seed"] = t.seed;
  j["error"] = t.error;
  return j;
}

inline json to_json(const LikelihoodBreakdown& b) {
  json j;
  j["log_likelihood"] = detail::json_real(b.log_likelihood);
  j["same_pairs"] = b.same_pairs;
  j["cross_pairs"] = b.cross_pairs;
  j["same_edges"] = b.same_edges;
  j["cross_edges"] = b.cross_edges;
  return j;
}

namespace detail {

inline json labelling_to_json(const Labelling& lab) {
  json signs = json::array();
  for (std::int8_t s : lab.signs) signs.push_back(static_cast<int>(s));
  return signs;
}

}  // namespace detail

inline json to_json(const MapResult& r) {
  json j;
  j["max_log_likelihood"] = detail::json_real(r.max_log_likelihood);
  j["unique"] = r.unique;
  json argmaxes = json::array();
  for (const Labelling& lab : r.argmaxes) argmaxes.push_back(detail::labelling_to_json(lab));
  j["argmaxes"] = argmaxes;
  return j;
}

inline json to_json(const MinBisectionResult& r) {
  json j;
  j["min_cut"] = r.min_cut;
  j["unique"] = r.unique;
  json argmins = json::array();
  for (const Labelling& lab : r.argmins) argmins.push_back(detail::labelling_to_json(lab));
  j["argmins"] = argmins;
  return j;
}

inline json to_json(const SwapCheckReport& r) {
  json j;
  j["pair_exists"] = r.pair_exists;
  j["witness_guaranteed"] = r.witness_guaranteed;
  j["witness_adjacent"] = r.witness_adjacent;
  j["witness_plus"] = r.witness_plus;
  j["witness_minus"] = r.witness_minus;
  j["margin_plus"] = r.margin_plus;
  j["margin_minus"] = r.margin_minus;
  j["log_likelihood_before"] = detail::json_real(r.log_likelihood_before);
  j["log_likelihood_after"] = detail::json_real(r.log_likelihood_after);
  return j;
}

}  // namespace bisectlab
