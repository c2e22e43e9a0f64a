#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bisectlab/graph.hpp"
#include "bisectlab/model.hpp"
#include "bisectlab/rng.hpp"
#include "bisectlab/spectral.hpp"

// Refinement stages: a replica accuracy boost that relabels each hold-out
// block by majority vote against a black-box partition of the rest of the
// graph, and a one-pass majority relabelling. Composed with the spectral
// partitioner they form the full recovery pipeline.

namespace bisectlab {

struct ReplicaConfig {
  std::int64_t m = 10;       // number of hold-out blocks (>= 2)
  double epsilon = 0.5;      // fragile-margin scale used by evaluation
  std::uint64_t seed = 0;
  bool use_conservative_m = false;  // derive m from epsilon via the bound below
};

// True when m blocks are provably enough at accuracy scale epsilon:
// (1 - 2/m) * epsilon - 80 / sqrt(m) >= epsilon / 2.
inline bool replica_count_sufficient(std::int64_t m, double epsilon) {
  if (m < 2) return false;
  double md = static_cast<double>(m);
  return (1.0 - 2.0 / md) * epsilon - 80.0 / std::sqrt(md) >= 0.5 * epsilon;
}

// Smallest m satisfying replica_count_sufficient. The bound's constants are
// deliberately loose, so this is enormous for practical epsilon (about 1e5 at
// epsilon = 0.5); it exists for fidelity experiments, not as a default.
inline std::int64_t conservative_block_count(double epsilon) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("conservative_block_count: epsilon must be positive");
  std::int64_t hi = 2;
  while (!replica_count_sufficient(hi, epsilon)) {
    if (hi > (std::int64_t{1} << 60))
      throw std::invalid_argument("conservative_block_count: epsilon too small");
    hi *= 2;
  }
  std::int64_t lo = hi / 2 < 2 ? 2 : hi / 2;  // predicate is monotone in m
  while (lo < hi) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (replica_count_sufficient(mid, epsilon))
      hi = mid;
    else
      lo = mid + 1;
  }
  return hi;
}

namespace detail {

inline std::int64_t resolve_block_count(const ReplicaConfig& cfg) {
  if (!(cfg.epsilon > 0.0))
    throw std::invalid_argument("replica config: epsilon must be positive");
  std::int64_t m = cfg.use_conservative_m ? conservative_block_count(cfg.epsilon) : cfg.m;
  if (m < 2) throw std::invalid_argument("replica config: m must be >= 2");
  return m;
}

// block_of[v] in {0, ..., m-1}; a seeded shuffle dealt into m consecutive
// chunks whose sizes differ by at most one.
inline std::vector<std::int32_t> random_equipartition(Graph::node num_nodes, std::int64_t m,
                                                      std::uint64_t seed) {
  std::vector<Graph::node> perm(static_cast<std::size_t>(num_nodes));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(perm);
  std::vector<std::int32_t> block_of(static_cast<std::size_t>(num_nodes));
  const std::int64_t base = num_nodes / m;
  const std::int64_t extra = num_nodes % m;  // first `extra` blocks get base+1
  std::size_t cursor = 0;
  for (std::int64_t b = 0; b < m; ++b) {
    std::int64_t size = base + (b < extra ? 1 : 0);
    for (std::int64_t k = 0; k < size; ++k)
      block_of[static_cast<std::size_t>(perm[cursor++])] = static_cast<std::int32_t>(b);
  }
  return block_of;
}

}  // namespace detail

// Replica accuracy boost. The black box `bb(subgraph, original_ids)` must
// return a balanced labelling of the subgraph; original_ids[j] is the parent
// id of subgraph node j (real partitioners ignore it, evaluation oracles may
// use it). Procedure: split the nodes into m seeded blocks; take bb of the
// whole graph as the reference; for each block, run bb on the graph minus the
// block, flip the result when its plus-set differs from the reference's on at
// least half of one class (symmetric difference >= n/2 over the kept nodes),
// and give every block node the label favoured by its neighbors among the
// kept nodes - strictly more on the plus side for assortative graphs, the
// reverse comparison for disassortative ones, ties to the minus side. Each
// node is labelled exactly once. Black-box failures are rethrown with the
// block index attached. Deterministic given (g, sense, cfg, bb).
template <typename BlackBox>
Labelling replica_boost(const Graph& g, Sense sense, const ReplicaConfig& cfg,
                        BlackBox&& bb) {
  if (g.num_nodes() < 2 || g.num_nodes() % 2 != 0)
    throw std::invalid_argument("replica_boost: node count must be even and >= 2");
  const std::int64_t m = detail::resolve_block_count(cfg);
  const Graph::node num_nodes = g.num_nodes();
  const std::int64_t half = num_nodes / 2;

  std::vector<std::int32_t> block_of =
      detail::random_equipartition(num_nodes, m, mix_seed(cfg.seed, 0));

  std::vector<Graph::node> identity(static_cast<std::size_t>(num_nodes));
  std::iota(identity.begin(), identity.end(), 0);
  Labelling reference;
  try {
    reference = bb(g, identity);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("replica_boost: black box failed on reference run: ") +
                             e.what());
  }
  if (reference.signs.size() != static_cast<std::size_t>(num_nodes))
    throw std::runtime_error("replica_boost: reference labelling has wrong length");

  std::vector<std::int8_t> out(static_cast<std::size_t>(num_nodes), 0);
  std::vector<std::int8_t> kept_sign(static_cast<std::size_t>(num_nodes), 0);

  for (std::int64_t i = 0; i < m; ++i) {
    std::vector<Graph::node> kept;
    kept.reserve(static_cast<std::size_t>(num_nodes));
    for (Graph::node v = 0; v < num_nodes; ++v)
      if (block_of[static_cast<std::size_t>(v)] != i) kept.push_back(v);
    if (kept.size() == static_cast<std::size_t>(num_nodes)) continue;  // empty block

    SubgraphResult sub = induced_subgraph(g, kept);
    Labelling replica;
    try {
      replica = bb(sub.graph, sub.to_old);
    } catch (const std::exception& e) {
      throw std::runtime_error("replica_boost: black box failed on block " +
                               std::to_string(i) + ": " + e.what());
    }
    if (replica.signs.size() != kept.size())
      throw std::runtime_error("replica_boost: block " + std::to_string(i) +
                               " labelling has wrong length");

    std::int64_t symdiff = 0;
    for (std::size_t j = 0; j < kept.size(); ++j) {
      bool replica_plus = replica.signs[j] == 1;
      bool reference_plus = reference.signs[static_cast<std::size_t>(kept[j])] == 1;
      symdiff += replica_plus != reference_plus;
    }
    const std::int8_t flip = 2 * symdiff >= half ? -1 : 1;
    for (std::size_t j = 0; j < kept.size(); ++j)
      kept_sign[static_cast<std::size_t>(kept[j])] =
          static_cast<std::int8_t>(flip * replica.signs[j]);

    for (Graph::node v = 0; v < num_nodes; ++v) {
      if (block_of[static_cast<std::size_t>(v)] != i) continue;
      std::int64_t plus = 0;
      std::int64_t minus = 0;
      for (Graph::node u : g.neighbors(v)) {
        if (block_of[static_cast<std::size_t>(u)] == i) continue;  // unlabelled here
        if (kept_sign[static_cast<std::size_t>(u)] == 1)
          ++plus;
        else
          ++minus;
      }
      bool to_plus = sense == Sense::assortative ? plus > minus : minus > plus;
      out[static_cast<std::size_t>(v)] = to_plus ? 1 : -1;
    }
  }
  return make_labelling(std::move(out));
}

// One simultaneous majority pass: every node moves to the side preferred by
// strictly more of its neighbors under `initial` (comparison reversed for
// disassortative graphs); ties go to the minus side. Not iterated, and the
// output need not be balanced.
inline Labelling majority_relabel(const Graph& g, const Labelling& initial, Sense sense) {
  if (initial.signs.size() != static_cast<std::size_t>(g.num_nodes()))
    throw std::invalid_argument("majority_relabel: labelling/graph size mismatch");
  std::vector<std::int8_t> out(initial.signs.size());
  for (Graph::node v = 0; v < g.num_nodes(); ++v) {
    std::int64_t plus = 0;
    std::int64_t minus = 0;
    for (Graph::node u : g.neighbors(v)) {
      if (initial.signs[static_cast<std::size_t>(u)] == 1)
        ++plus;
      else
        ++minus;
    }
    bool to_plus = sense == Sense::assortative ? plus > minus : minus > plus;
    out[static_cast<std::size_t>(v)] = to_plus ? 1 : -1;
  }
  return make_labelling(std::move(out));
}

struct RecoveryTrace {
  SenseReport sense_report;
  Labelling spectral_labelling;
  Labelling replica_labelling;
  Labelling final_labelling;
  // Hamming distance to the hidden labelling minimized over global sign, per
  // stage; -1 when the hidden labelling is unknown or the stage was not
  // reached.
  std::array<std::int64_t, 3> stage_errors{-1, -1, -1};
  double sense_seconds = 0.0;
  double spectral_seconds = 0.0;
  double replica_seconds = 0.0;
  double relabel_seconds = 0.0;
  std::int64_t m_used = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::string error;  // empty on success; stage failure message otherwise
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

// Full pipeline: detect the sense, take the spectral partition, boost it with
// replicas (the spectral partitioner is the black box, reusing one seed so
// the replica reference equals the spectral stage), and finish with one
// majority pass. `hidden` is evaluation-only: it fills stage_errors and never
// influences any stage. A stage failure is captured in trace.error, with the
// stages completed so far left in place.
inline RecoveryTrace recover(const Graph& g, const ReplicaConfig& cfg,
                             const Labelling* hidden = nullptr) {
  if (g.num_nodes() < 2 || g.num_nodes() % 2 != 0)
    throw std::invalid_argument("recover: node count must be even and >= 2");
  if (hidden != nullptr && hidden->signs.size() != static_cast<std::size_t>(g.num_nodes()))
    throw std::invalid_argument("recover: hidden labelling/graph size mismatch");

  RecoveryTrace trace;
  trace.m_used = detail::resolve_block_count(cfg);
  trace.epsilon = cfg.epsilon;
  trace.seed = cfg.seed;

  auto t0 = std::chrono::steady_clock::now();
  trace.sense_report = detect_sense(g, mix_seed(cfg.seed, 1));
  trace.sense_seconds = detail::seconds_since(t0);

  const std::uint64_t bb_seed = mix_seed(cfg.seed, 2);
  auto bb = [bb_seed](const Graph& h, const std::vector<Graph::node>&) {
    return spectral_partition(h, bb_seed).labelling;
  };

  t0 = std::chrono::steady_clock::now();
  trace.spectral_labelling = spectral_partition(g, bb_seed).labelling;
  trace.spectral_seconds = detail::seconds_since(t0);
  if (hidden != nullptr)
    trace.stage_errors[0] = sign_min_hamming(trace.spectral_labelling, *hidden);

  try {
    t0 = std::chrono::steady_clock::now();
    trace.replica_labelling = replica_boost(g, trace.sense_report.sense, cfg, bb);
    trace.replica_seconds = detail::seconds_since(t0);
    if (hidden != nullptr)
      trace.stage_errors[1] = sign_min_hamming(trace.replica_labelling, *hidden);

    t0 = std::chrono::steady_clock::now();
    trace.final_labelling = majority_relabel(g, trace.replica_labelling, trace.sense_report.sense);
    trace.relabel_seconds = detail::seconds_since(t0);
    if (hidden != nullptr)
      trace.stage_errors[2] = sign_min_hamming(trace.final_labelling, *hidden);
  } catch (const std::exception& e) {
    trace.error = e.what();
  }
  return trace;
}

}  // namespace bisectlab
