#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bisectlab/graph.hpp"
#include "bisectlab/model.hpp"

// Plain-text formats, both of which round-trip bit-exactly:
//   graph:     "num_nodes m\n" then m lines "u v\n" with u < v, 0-based,
//              lexicographically sorted
//   labelling: one line per node, "+1" or "-1"

namespace bisectlab {

inline void write_graph(std::ostream& out, const Graph& g) {
  out << g.num_nodes() << ' ' << g.num_edges() << '\n';
  g.for_each_edge([&](Graph::node u, Graph::node v) { out << u << ' ' << v << '\n'; });
}

inline Graph read_graph(std::istream& in) {
  std::int64_t num_nodes = 0, m = 0;
  if (!(in >> num_nodes >> m)) throw std::runtime_error("graph file: bad header");
  if (num_nodes < 0 || m < 0) throw std::runtime_error("graph file: negative counts");
  std::vector<Graph::edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) {
    std::int64_t u = 0, v = 0;
    if (!(in >> u >> v)) throw std::runtime_error("graph file: truncated edge list");
    if (u >= v) throw std::runtime_error("graph file: edges must satisfy u < v");
    if (u < 0 || v >= num_nodes) throw std::runtime_error("graph file: endpoint out of range");
    edges.emplace_back(static_cast<Graph::node>(u), static_cast<Graph::node>(v));
  }
  return Graph::from_edges(static_cast<Graph::node>(num_nodes), edges);
}

inline void write_labelling(std::ostream& out, const Labelling& lab) {
  for (std::int8_t s : lab.signs) out << (s == 1 ? "+1" : "-1") << '\n';
}

inline Labelling read_labelling(std::istream& in) {
  std::vector<std::int8_t> signs;
  std::string tok;
  while (in >> tok) {
    if (tok == "+1")
      signs.push_back(1);
    else if (tok == "-1")
      signs.push_back(-1);
    else
      throw std::runtime_error("labelling file: entries must be +1 or -1");
  }
  return make_labelling(std::move(signs));
}

inline void write_graph_file(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_graph(out, g);
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return read_graph(in);
}

inline void write_labelling_file(const std::string& path, const Labelling& lab) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_labelling(out, lab);
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline Labelling read_labelling_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return read_labelling(in);
}

}  // namespace bisectlab
