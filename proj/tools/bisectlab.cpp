// Command-line front end: generate planted-bisection instances, run the
// recovery pipeline, evaluate threshold criteria, query the small-instance
// oracles, and drive experiment sweeps.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bisectlab/harness.hpp"
#include "bisectlab/io.hpp"
#include "bisectlab/oracles.hpp"
#include "bisectlab/refine.hpp"
#include "bisectlab/serialize.hpp"

namespace bl = bisectlab;

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct GenArgs {
  std::int64_t n = 0;
  double p = 0.0, q = 0.0;
  std::uint64_t seed = 0;
  std::string out_graph, out_labels;
};

int run_gen(const GenArgs& a) {
  bl::PlantedInstance inst = bl::generate({a.n, a.p, a.q}, a.seed);
  bl::write_graph_file(a.out_graph, inst.graph);
  bl::write_labelling_file(a.out_labels, inst.hidden);
  std::cerr << "wrote " << inst.graph.num_nodes() << " nodes, " << inst.graph.num_edges()
            << " edges to " << a.out_graph << "; hidden labelling to " << a.out_labels
            << "\n";
  return 0;
}

struct RecoverArgs {
  std::string graph, labels;
  double epsilon = 0.5;
  std::int64_t m = 10;
  bool conservative_m = false;
  std::uint64_t seed = 0;
  bool json = false;
};

int run_recover(const RecoverArgs& a) {
  bl::Graph g = bl::read_graph_file(a.graph);
  bl::Labelling hidden;
  bool have_hidden = !a.labels.empty();
  if (have_hidden) hidden = bl::read_labelling_file(a.labels);

  bl::ReplicaConfig cfg;
  cfg.m = a.m;
  cfg.epsilon = a.epsilon;
  cfg.seed = a.seed;
  cfg.use_conservative_m = a.conservative_m;
  bl::RecoveryTrace trace = bl::recover(g, cfg, have_hidden ? &hidden : nullptr);

  if (a.json) {
    std::cout << bl::to_json(trace).dump(2) << "\n";
  } else {
    bl::write_labelling(std::cout, trace.final_labelling);
  }
  if (!trace.error.empty()) {
    std::cerr << "recovery failed: " << trace.error << "\n";
    return 1;
  }
  if (have_hidden)
    std::cerr << "stage errors: spectral=" << trace.stage_errors[0]
              << " replica=" << trace.stage_errors[1]
              << " final=" << trace.stage_errors[2] << "\n";
  return 0;
}

struct ThresholdArgs {
  std::int64_t n = 0;
  double p = -1.0, q = -1.0, a = -1.0, b = -1.0;
};

int run_threshold(const ThresholdArgs& t) {
  bool has_pq = t.p >= 0.0 || t.q >= 0.0;
  bool has_ab = t.a >= 0.0 || t.b >= 0.0;
  if (has_pq == has_ab)
    throw std::runtime_error("threshold needs either --p/--q or --a/--b");
  bl::GridPoint pt = has_pq ? bl::grid_point_pq(t.n, t.p, t.q)
                            : bl::grid_point_ab(t.n, t.a, t.b);
  std::cout << bl::to_json(bl::threshold_report(pt.n, pt.p, pt.q)).dump(2) << "\n";
  return 0;
}

struct OracleArgs {
  std::string which, graph, labels;
  double p = 0.5, q = 0.5;
};

int run_oracle(const OracleArgs& a) {
  bl::Graph g = bl::read_graph_file(a.graph);
  bl::json out;
  if (a.which == "map") {
    out = bl::to_json(bl::map_bruteforce(g, a.p, a.q));
  } else if (a.which == "minbisect") {
    out = bl::to_json(bl::min_bisection_bruteforce(g));
  } else if (a.which == "likelihood") {
    if (a.labels.empty()) throw std::runtime_error("likelihood needs --labels");
    bl::Labelling tau = bl::read_labelling_file(a.labels);
    out = bl::to_json(bl::log_likelihood(g, tau, a.p, a.q));
  } else if (a.which == "swapcheck") {
    if (a.labels.empty()) throw std::runtime_error("swapcheck needs --labels");
    bl::Labelling tau = bl::read_labelling_file(a.labels);
    bl::Sense sense = a.p > a.q ? bl::Sense::assortative : bl::Sense::disassortative;
    out = bl::to_json(bl::minority_swap_check(g, tau, a.p, a.q, sense));
  } else {
    throw std::runtime_error("unknown oracle: " + a.which);
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct SweepArgs {
  std::string spec_path, out_path;
  std::int64_t workers = 0;
};

int run_sweep_cmd(const SweepArgs& a) {
  bl::ExperimentSpec spec = bl::experiment_spec_from_string(read_text_file(a.spec_path));
  if (const char* env = std::getenv("BISECTLAB_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      throw std::runtime_error("BISECTLAB_SEED must be an unsigned integer");
    spec.master_seed = static_cast<std::uint64_t>(v);
  }
  bl::SweepResult result = bl::run_sweep(spec, a.workers);

  std::ofstream rows(a.out_path);
  if (!rows) throw std::runtime_error("cannot open " + a.out_path);
  bl::write_rows_csv(spec, result.rows, rows);

  std::string summary_path = a.out_path + ".summary.csv";
  std::ofstream summary(summary_path);
  if (!summary) throw std::runtime_error("cannot open " + summary_path);
  bl::write_summary_csv(result, summary);

  std::int64_t errors = 0;
  for (const bl::PointSummary& s : result.summaries) errors += s.error_count;
  std::cerr << "wrote " << result.rows.size() << " rows to " << a.out_path << " and "
            << result.summaries.size() << " point summaries to " << summary_path;
  if (errors > 0) std::cerr << " (" << errors << " trial errors recorded)";
  std::cerr << "\n";
  return 0;
}

int run_calibrate(const std::string& out_path) {
  bl::CalibrationTable table = bl::calibrate_perturbation(bl::default_calibration_grid());
  if (out_path.empty()) {
    bl::write_calibration_csv(table, std::cout);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    bl::write_calibration_csv(table, out);
  }
  std::cerr << "max ratio over finite rows: " << table.max_ratio << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planted-bisection recovery toolkit"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a planted instance");
  gen_cmd->add_option("--n", gen.n, "class size (graph has 2n nodes)")->required();
  gen_cmd->add_option("--p", gen.p, "within-class edge probability")->required();
  gen_cmd->add_option("--q", gen.q, "cross-class edge probability")->required();
  gen_cmd->add_option("--seed", gen.seed, "generator seed");
  gen_cmd->add_option("--out-graph", gen.out_graph, "graph output path")->required();
  gen_cmd->add_option("--out-labels", gen.out_labels, "hidden labelling output path")
      ->required();

  RecoverArgs rec;
  CLI::App* rec_cmd = app.add_subcommand("recover", "run the recovery pipeline");
  rec_cmd->add_option("--graph", rec.graph, "graph input path")->required();
  rec_cmd->add_option("--labels", rec.labels, "hidden labelling (enables stage errors)");
  rec_cmd->add_option("--epsilon", rec.epsilon, "fragile-margin scale");
  rec_cmd->add_option("--m", rec.m, "replica block count");
  rec_cmd->add_flag("--conservative-m", rec.conservative_m,
                    "derive the block count from epsilon via the sufficiency bound");
  rec_cmd->add_option("--seed", rec.seed, "pipeline seed");
  rec_cmd->add_flag("--json", rec.json, "print the trace as JSON instead of the labelling");

  ThresholdArgs thr;
  CLI::App* thr_cmd = app.add_subcommand("threshold", "evaluate recovery criteria");
  thr_cmd->add_option("--n", thr.n, "class size")->required();
  thr_cmd->add_option("--p", thr.p, "within-class edge probability");
  thr_cmd->add_option("--q", thr.q, "cross-class edge probability");
  thr_cmd->add_option("--a", thr.a, "within-class log-density coefficient");
  thr_cmd->add_option("--b", thr.b, "cross-class log-density coefficient");

  OracleArgs ora;
  CLI::App* ora_cmd = app.add_subcommand("oracle", "exact small-instance references");
  ora_cmd->add_option("which", ora.which, "map | minbisect | likelihood | swapcheck")
      ->required();
  ora_cmd->add_option("--graph", ora.graph, "graph input path")->required();
  ora_cmd->add_option("--labels", ora.labels, "labelling input path");
  ora_cmd->add_option("--p", ora.p, "within-class edge probability");
  ora_cmd->add_option("--q", ora.q, "cross-class edge probability");

  SweepArgs swp;
  CLI::App* swp_cmd = app.add_subcommand("sweep", "run an experiment grid");
  swp_cmd->add_option("--spec", swp.spec_path, "experiment spec JSON path")->required();
  swp_cmd->add_option("--out", swp.out_path, "rows CSV output path")->required();
  swp_cmd->add_option("--workers", swp.workers, "worker threads (0 = auto)");

  std::string cal_out;
  CLI::App* cal_cmd = app.add_subcommand("calibrate", "perturbation calibration table");
  cal_cmd->add_option("--out", cal_out, "CSV output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_cmd->parsed()) return run_gen(gen);
    if (rec_cmd->parsed()) return run_recover(rec);
    if (thr_cmd->parsed()) return run_threshold(thr);
    if (ora_cmd->parsed()) return run_oracle(ora);
    if (swp_cmd->parsed()) return run_sweep_cmd(swp);
    if (cal_cmd->parsed()) return run_calibrate(cal_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
