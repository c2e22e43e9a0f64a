#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bisectlab/graph.hpp"
#include "bisectlab/model.hpp"

// Per-node majority margins and the fragile-node set. A node's margin is its
// same-side neighbor count minus its other-side count (sign-flipped for the
// disassortative sense, so a positive margin always means "agrees with the
// planted structure"). "Majority of size k" means margin >= k; margin <= 0 is
// a minority.

namespace bisectlab {

inline std::int64_t majority_margin(const Graph& g, const Labelling& lab, Graph::node v,
                                    Sense sense) {
  if (v < 0 || v >= g.num_nodes()) throw std::invalid_argument("node out of range");
  if (lab.signs.size() != static_cast<std::size_t>(g.num_nodes()))
    throw std::invalid_argument("labelling length mismatch");
  std::int64_t same = 0, diff = 0;
  std::int8_t mine = lab.signs[static_cast<std::size_t>(v)];
  for (Graph::node u : g.neighbors(v))
    (lab.signs[static_cast<std::size_t>(u)] == mine ? same : diff)++;
  std::int64_t margin = same - diff;
  return sense == Sense::assortative ? margin : -margin;
}

struct MajorityCensus {
  std::vector<std::int64_t> margins;
  std::int64_t minority_count = 0;        // nodes with margin <= 0
  double epsilon = 0.0;
  std::vector<Graph::node> v_epsilon;     // margin < eps*sqrt(n p ln n) or degree > 100 n p
  double p_used = 0.0;                    // the p that fed both cutoffs
  bool p_estimated = false;               // true if p_used came from the labelling
};

namespace detail {

inline MajorityCensus census_with_p(const Graph& g, const Labelling& lab, Sense sense,
                                    double epsilon, double p, bool estimated) {
  if (epsilon < 0.0) throw std::invalid_argument("census needs epsilon >= 0");
  const Graph::node num = g.num_nodes();
  if (lab.signs.size() != static_cast<std::size_t>(num))
    throw std::invalid_argument("labelling length mismatch");
  MajorityCensus c;
  c.epsilon = epsilon;
  c.p_used = p;
  c.p_estimated = estimated;
  c.margins.resize(static_cast<std::size_t>(num));
  const double n_side = static_cast<double>(num) / 2.0;
  const double margin_cut =
      n_side > 1.0 ? epsilon * std::sqrt(n_side * p * std::log(n_side)) : 0.0;
  const double degree_cut = 100.0 * n_side * p;
  for (Graph::node v = 0; v < num; ++v) {
    std::int64_t m = majority_margin(g, lab, v, sense);
    c.margins[static_cast<std::size_t>(v)] = m;
    if (m <= 0) ++c.minority_count;
    if (static_cast<double>(m) < margin_cut || static_cast<double>(g.degree(v)) > degree_cut)
      c.v_epsilon.push_back(v);
  }
  return c;
}

}  // namespace detail

// census with the model's p feeding the fragile-node cutoffs
inline MajorityCensus census(const Graph& g, const Labelling& lab, Sense sense, double epsilon,
                             const ModelParams& params) {
  return detail::census_with_p(g, lab, sense, epsilon, params.p, false);
}

// census with p estimated from the labelling: same-side empirical edge density
inline MajorityCensus census(const Graph& g, const Labelling& lab, Sense sense,
                             double epsilon) {
  const Graph::node num = g.num_nodes();
  if (lab.signs.size() != static_cast<std::size_t>(num))
    throw std::invalid_argument("labelling length mismatch");
  std::int64_t n_plus = 0;
  for (std::int8_t s : lab.signs) n_plus += s == 1;
  std::int64_t n_minus = num - n_plus;
  std::int64_t same_pairs = n_plus * (n_plus - 1) / 2 + n_minus * (n_minus - 1) / 2;
  std::int64_t same_edges = 0;
  g.for_each_edge([&](Graph::node u, Graph::node v) {
    same_edges += lab.signs[static_cast<std::size_t>(u)] == lab.signs[static_cast<std::size_t>(v)];
  });
  double p_hat = same_pairs > 0 ? static_cast<double>(same_edges) / static_cast<double>(same_pairs)
                                : 0.0;
  return detail::census_with_p(g, lab, sense, epsilon, p_hat, true);
}

}  // namespace bisectlab
