#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bisectlab/graph.hpp"
#include "bisectlab/rng.hpp"

// The planted bisection model: 2n nodes split into two hidden classes of size
// n; each within-class pair is joined independently with probability p, each
// cross-class pair with probability q.

namespace bisectlab {

struct ModelParams {
  std::int64_t n = 0;  // nodes per side; the graph has 2n nodes
  double p = 0.0;
  double q = 0.0;
};

inline void validate(const ModelParams& params) {
  if (params.n < 1) throw std::invalid_argument("model needs n >= 1");
  if (params.n > (std::int64_t{1} << 30)) throw std::invalid_argument("n too large");
  if (!(params.p >= 0.0 && params.p <= 1.0 && params.q >= 0.0 && params.q <= 1.0))
    throw std::invalid_argument("edge probabilities must lie in [0,1]");
}

enum class Sense { assortative, disassortative };

inline Sense model_sense(const ModelParams& params) {
  return params.p >= params.q ? Sense::assortative : Sense::disassortative;
}

struct Labelling {
  std::vector<std::int8_t> signs;  // entries +1 / -1
  bool balanced = false;
};

inline Labelling make_labelling(std::vector<std::int8_t> signs) {
  std::int64_t sum = 0;
  for (std::int8_t s : signs) {
    if (s != 1 && s != -1) throw std::invalid_argument("labels must be +1 or -1");
    sum += s;
  }
  return {std::move(signs), sum == 0};
}

inline Labelling negated(const Labelling& lab) {
  Labelling out = lab;
  for (std::int8_t& s : out.signs) s = static_cast<std::int8_t>(-s);
  return out;
}

// 1 - |<a, b>| / 2n: 0 iff the labellings agree up to a global sign flip
inline double overlap_error(const Labelling& a, const Labelling& b) {
  if (a.signs.size() != b.signs.size())
    throw std::invalid_argument("overlap_error needs equal lengths");
  if (a.signs.empty()) return 0.0;
  std::int64_t dot = 0;
  for (std::size_t i = 0; i < a.signs.size(); ++i)
    dot += static_cast<std::int64_t>(a.signs[i]) * b.signs[i];
  return 1.0 - static_cast<double>(dot < 0 ? -dot : dot) / static_cast<double>(a.signs.size());
}

// Hamming distance minimized over the global sign flip; in [0, n] for
// balanced inputs
inline std::int64_t sign_min_hamming(const Labelling& a, const Labelling& b) {
  if (a.signs.size() != b.signs.size())
    throw std::invalid_argument("sign_min_hamming needs equal lengths");
  std::int64_t d = 0;
  for (std::size_t i = 0; i < a.signs.size(); ++i) d += a.signs[i] != b.signs[i];
  std::int64_t flipped = static_cast<std::int64_t>(a.signs.size()) - d;
  return d < flipped ? d : flipped;
}

struct PlantedInstance {
  Graph graph;
  Labelling hidden;
  ModelParams params;
  std::uint64_t seed = 0;
};

// Draw an instance. The hidden labelling is a seeded shuffle of n pluses and
// n minuses (uniform over balanced labellings). Edges are drawn by skip
// sampling with geometric gaps over three lexicographic pair streams
// (within-plus, within-minus, cross), so generation costs O(|V| + |E|) at any
// density. Identical (params, seed) reproduces the instance bit for bit.
inline PlantedInstance generate(const ModelParams& params, std::uint64_t seed) {
  validate(params);
  const auto num_nodes = static_cast<Graph::node>(2 * params.n);
  Rng rng(seed);

  std::vector<std::int8_t> signs(static_cast<std::size_t>(num_nodes));
  for (std::size_t i = 0; i < signs.size(); ++i)
    signs[i] = i < static_cast<std::size_t>(params.n) ? 1 : -1;
  rng.shuffle(signs);

  std::vector<Graph::node> plus, minus;
  plus.reserve(static_cast<std::size_t>(params.n));
  minus.reserve(static_cast<std::size_t>(params.n));
  for (Graph::node v = 0; v < num_nodes; ++v)
    (signs[static_cast<std::size_t>(v)] == 1 ? plus : minus).push_back(v);

  std::vector<Graph::edge> edges;
  {
    double within = static_cast<double>(params.n) * (static_cast<double>(params.n) - 1);
    double cross = static_cast<double>(params.n) * static_cast<double>(params.n);
    edges.reserve(static_cast<std::size_t>(within * params.p + cross * params.q + 64));
  }

  const double log_miss_p = std::log1p(-params.p);
  const double log_miss_q = std::log1p(-params.q);

  // within-class pairs, lexicographic over the sorted side list
  auto sample_within = [&](const std::vector<Graph::node>& side) {
    const std::int64_t k = static_cast<std::int64_t>(side.size());
    const std::int64_t total = k * (k - 1) / 2;
    std::int64_t row = 0, base = 0, len = k - 1;
    std::int64_t t = -1;
    for (;;) {
      std::uint64_t gap = rng.next_gap(log_miss_p);
      if (gap == Rng::no_hit) break;
      if (static_cast<std::uint64_t>(total - t - 1) <= gap) break;
      t += static_cast<std::int64_t>(gap) + 1;
      while (t >= base + len) {
        base += len;
        --len;
        ++row;
      }
      edges.emplace_back(side[static_cast<std::size_t>(row)],
                         side[static_cast<std::size_t>(row + 1 + (t - base))]);
    }
  };
  sample_within(plus);
  sample_within(minus);

  // cross pairs over the plus x minus grid
  {
    const std::int64_t k = static_cast<std::int64_t>(minus.size());
    const std::int64_t total = static_cast<std::int64_t>(plus.size()) * k;
    std::int64_t t = -1;
    for (;;) {
      std::uint64_t gap = rng.next_gap(log_miss_q);
      if (gap == Rng::no_hit) break;
      if (static_cast<std::uint64_t>(total - t - 1) <= gap) break;
      t += static_cast<std::int64_t>(gap) + 1;
      Graph::node u = plus[static_cast<std::size_t>(t / k)];
      Graph::node v = minus[static_cast<std::size_t>(t % k)];
      edges.emplace_back(u < v ? u : v, u < v ? v : u);
    }
  }

  PlantedInstance inst;
  inst.graph = Graph::from_edges(num_nodes, edges);
  inst.hidden = make_labelling(std::move(signs));
  inst.params = params;
  inst.seed = seed;
  return inst;
}

}  // namespace bisectlab
