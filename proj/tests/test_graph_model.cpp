#include "bisectlab/census.hpp"
#include "bisectlab/graph.hpp"
#include "bisectlab/io.hpp"
#include "bisectlab/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

using namespace bisectlab;

namespace {

Labelling lab_from(const std::string& s) {
  std::vector<std::int8_t> signs;
  for (char c : s) signs.push_back(c == '+' ? 1 : -1);
  return make_labelling(std::move(signs));
}

std::string graph_text(const Graph& g) {
  std::ostringstream out;
  write_graph(out, g);
  return out.str();
}

}  // namespace

TEST(Generate, TwoTrianglesAtPureWithin) {
  PlantedInstance inst = generate({3, 1.0, 0.0}, 7);
  EXPECT_EQ(inst.graph.num_nodes(), 6);
  EXPECT_EQ(inst.graph.num_edges(), 6);  // C(3,2) per class
  for (Graph::node u = 0; u < 6; ++u)
    for (Graph::node v = u + 1; v < 6; ++v) {
      bool same = inst.hidden.signs[u] == inst.hidden.signs[v];
      EXPECT_EQ(inst.graph.has_edge(u, v), same);
    }
}

TEST(Generate, EmptyGraph) {
  PlantedInstance inst = generate({2, 0.0, 0.0}, 123);
  EXPECT_EQ(inst.graph.num_nodes(), 4);
  EXPECT_EQ(inst.graph.num_edges(), 0);
  EXPECT_TRUE(inst.hidden.balanced);
}

TEST(Generate, CompleteBipartiteAtPureCross) {
  PlantedInstance inst = generate({4, 0.0, 1.0}, 99);
  EXPECT_EQ(inst.graph.num_edges(), 16);  // n*n cross pairs
  for (Graph::node u = 0; u < 8; ++u)
    for (Graph::node v = u + 1; v < 8; ++v) {
      bool same = inst.hidden.signs[u] == inst.hidden.signs[v];
      EXPECT_EQ(inst.graph.has_edge(u, v), !same);
    }
}

TEST(Generate, CompleteGraphAtFullDensity) {
  PlantedInstance inst = generate({3, 1.0, 1.0}, 5);
  EXPECT_EQ(inst.graph.num_edges(), 15);  // C(6,2)
  for (Graph::node v = 0; v < 6; ++v) EXPECT_EQ(inst.graph.degree(v), 5);
}

TEST(Generate, DeterministicInSeed) {
  ModelParams params{50, 0.15, 0.05};
  PlantedInstance a = generate(params, 42);
  PlantedInstance b = generate(params, 42);
  EXPECT_EQ(graph_text(a.graph), graph_text(b.graph));
  EXPECT_EQ(a.hidden.signs, b.hidden.signs);
  PlantedInstance c = generate(params, 43);
  EXPECT_NE(graph_text(a.graph), graph_text(c.graph));
}

TEST(Generate, HiddenLabellingIsBalancedShuffle) {
  PlantedInstance inst = generate({100, 0.0, 0.0}, 2024);
  EXPECT_TRUE(inst.hidden.balanced);
  // not the sorted all-plus-then-all-minus arrangement
  bool sorted = true;
  for (std::size_t i = 0; i + 1 < inst.hidden.signs.size(); ++i)
    sorted = sorted && inst.hidden.signs[i] >= inst.hidden.signs[i + 1];
  EXPECT_FALSE(sorted);
}

TEST(Generate, EdgeCountMatchesBinomialMean) {
  // |E| ~ Binom(C(400,2), 0.1): mean 7980, sd ~84.75; the mean over 100
  // seeds should land within 4 sd/sqrt(100) of the target
  ModelParams params{200, 0.1, 0.1};
  double total = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t)
    total += static_cast<double>(generate(params, mix_seed(20260815, t)).graph.num_edges());
  double mean = total / trials;
  double tol = 4.0 * std::sqrt(79800 * 0.1 * 0.9) / std::sqrt(static_cast<double>(trials));
  EXPECT_NEAR(mean, 7980.0, tol);
}

TEST(Generate, RejectsBadParams) {
  EXPECT_THROW(generate({0, 0.5, 0.5}, 1), std::invalid_argument);
  EXPECT_THROW(generate({5, 1.5, 0.5}, 1), std::invalid_argument);
  EXPECT_THROW(generate({5, 0.5, -0.2}, 1), std::invalid_argument);
}

TEST(Overlap, ExamplesAndInvariance) {
  Labelling sigma = lab_from("++--");
  EXPECT_DOUBLE_EQ(overlap_error(sigma, sigma), 0.0);
  EXPECT_DOUBLE_EQ(overlap_error(sigma, negated(sigma)), 0.0);
  EXPECT_DOUBLE_EQ(overlap_error(sigma, lab_from("+-+-")), 1.0);
  Labelling tau = lab_from("+---");
  EXPECT_DOUBLE_EQ(overlap_error(sigma, tau), overlap_error(tau, sigma));
  EXPECT_DOUBLE_EQ(overlap_error(sigma, tau), 0.5);
  EXPECT_THROW(overlap_error(sigma, lab_from("++-")), std::invalid_argument);
}

TEST(Overlap, SignMinimizedHamming) {
  Labelling sigma = lab_from("++--");
  EXPECT_EQ(sign_min_hamming(sigma, sigma), 0);
  EXPECT_EQ(sign_min_hamming(sigma, negated(sigma)), 0);
  EXPECT_EQ(sign_min_hamming(sigma, lab_from("+++-")), 1);
  EXPECT_EQ(sign_min_hamming(sigma, lab_from("+-+-")), 2);
}

TEST(MajorityMargin, Examples) {
  // star: center 0 with neighbors labelled +,+,+,-
  Graph g = Graph::from_edges(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  Labelling lab = lab_from("++++--");
  EXPECT_EQ(majority_margin(g, lab, 0, Sense::assortative), 2);
  EXPECT_EQ(majority_margin(g, lab, 0, Sense::disassortative), -2);
  // node 5 is isolated: margin 0, i.e. a minority
  EXPECT_EQ(majority_margin(g, lab, 5, Sense::assortative), 0);
  EXPECT_THROW(majority_margin(g, lab, 6, Sense::assortative), std::invalid_argument);
}

TEST(Census, TwoCliquesAllStrongMajorities) {
  PlantedInstance inst = generate({4, 1.0, 0.0}, 11);
  MajorityCensus c = census(inst.graph, inst.hidden, Sense::assortative, 0.5, inst.params);
  EXPECT_EQ(c.minority_count, 0);
  ASSERT_EQ(c.margins.size(), 8u);
  for (auto m : c.margins) EXPECT_EQ(m, 3);
  EXPECT_FALSE(c.p_estimated);
  EXPECT_DOUBLE_EQ(c.p_used, 1.0);
}

TEST(Census, FragileSetCutoffs) {
  PlantedInstance inst = generate({4, 1.0, 0.0}, 11);
  // margin cutoff: eps * sqrt(4 * 1 * ln 4) = eps * 2.35482; margins are 3
  MajorityCensus tight = census(inst.graph, inst.hidden, Sense::assortative, 1.2, inst.params);
  EXPECT_TRUE(tight.v_epsilon.empty());  // 3 < 2.8258 is false
  MajorityCensus loose = census(inst.graph, inst.hidden, Sense::assortative, 1.3, inst.params);
  EXPECT_EQ(loose.v_epsilon.size(), 8u);  // 3 < 3.0613
  // degree rule: with p = 0.005 the cutoff 100*n*p = 2 is below every degree
  ModelParams tiny_p{4, 0.005, 0.0};
  MajorityCensus deg = census(inst.graph, inst.hidden, Sense::assortative, 0.0, tiny_p);
  EXPECT_EQ(deg.v_epsilon.size(), 8u);
}

TEST(Census, EmptyGraphAllMinorities) {
  PlantedInstance inst = generate({3, 0.0, 0.0}, 4);
  MajorityCensus c = census(inst.graph, inst.hidden, Sense::assortative, 1.0, inst.params);
  EXPECT_EQ(c.minority_count, 6);
  for (auto m : c.margins) EXPECT_EQ(m, 0);
  EXPECT_TRUE(c.v_epsilon.empty());  // p = 0 disables both cutoffs
}

TEST(Census, MarginsBoundedByDegree) {
  PlantedInstance inst = generate({60, 0.2, 0.1}, 77);
  MajorityCensus c = census(inst.graph, inst.hidden, Sense::assortative, 1.0, inst.params);
  for (Graph::node v = 0; v < inst.graph.num_nodes(); ++v) {
    EXPECT_LE(std::abs(c.margins[static_cast<std::size_t>(v)]), inst.graph.degree(v));
  }
}

TEST(Census, EstimatedDensityVariant) {
  PlantedInstance inst = generate({150, 0.3, 0.05}, 321);
  MajorityCensus c = census(inst.graph, inst.hidden, Sense::assortative, 1.0);
  EXPECT_TRUE(c.p_estimated);
  EXPECT_NEAR(c.p_used, 0.3, 0.02);
  // margins do not depend on which p was used
  MajorityCensus m = census(inst.graph, inst.hidden, Sense::assortative, 1.0, inst.params);
  EXPECT_EQ(c.margins, m.margins);
  EXPECT_EQ(c.minority_count, m.minority_count);
}

TEST(Census, DisassortativeSenseFlips) {
  PlantedInstance inst = generate({4, 0.0, 1.0}, 6);
  MajorityCensus c =
      census(inst.graph, inst.hidden, Sense::disassortative, 0.0, inst.params);
  EXPECT_EQ(c.minority_count, 0);
  for (auto m : c.margins) EXPECT_EQ(m, 4);  // all 4 neighbors are cross-class
}

TEST(InducedSubgraph, ExamplesAndMapping) {
  PlantedInstance inst = generate({3, 1.0, 0.0}, 7);
  std::vector<Graph::node> all;
  for (Graph::node v = 0; v < 6; ++v) all.push_back(v);
  SubgraphResult full = induced_subgraph(inst.graph, all);
  EXPECT_EQ(graph_text(full.graph), graph_text(inst.graph));
  for (Graph::node v = 0; v < 6; ++v) {
    EXPECT_EQ(full.to_old[static_cast<std::size_t>(full.to_new[v])], v);
  }

  SubgraphResult none = induced_subgraph(inst.graph, {});
  EXPECT_EQ(none.graph.num_nodes(), 0);
  EXPECT_EQ(none.graph.num_edges(), 0);

  // one hidden class is a triangle
  std::vector<Graph::node> side;
  for (Graph::node v = 0; v < 6; ++v)
    if (inst.hidden.signs[static_cast<std::size_t>(v)] == 1) side.push_back(v);
  SubgraphResult tri = induced_subgraph(inst.graph, side);
  EXPECT_EQ(tri.graph.num_nodes(), 3);
  EXPECT_EQ(tri.graph.num_edges(), 3);
  EXPECT_THROW(induced_subgraph(inst.graph, {0, 99}), std::invalid_argument);
}

TEST(Complement, Examples) {
  Graph empty4(4);
  Graph k4 = complement(empty4);
  EXPECT_EQ(k4.num_edges(), 6);

  Graph two_k3 = Graph::from_edges(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}});
  Graph bip = complement(two_k3);
  EXPECT_EQ(bip.num_edges(), 9);
  for (Graph::node u = 0; u < 3; ++u)
    for (Graph::node v = 3; v < 6; ++v) EXPECT_TRUE(bip.has_edge(u, v));

  PlantedInstance inst = generate({20, 0.2, 0.1}, 13);
  EXPECT_EQ(graph_text(complement(complement(inst.graph))), graph_text(inst.graph));
}

TEST(GraphType, InvariantsAfterConstruction) {
  PlantedInstance inst = generate({40, 0.3, 0.15}, 5);
  const Graph& g = inst.graph;
  std::int64_t directed = 0;
  for (Graph::node v = 0; v < g.num_nodes(); ++v) {
    auto list = g.neighbors(v);
    directed += static_cast<std::int64_t>(list.size());
    for (std::size_t i = 0; i + 1 < list.size(); ++i) ASSERT_LT(list[i], list[i + 1]);
    for (Graph::node u : list) {
      ASSERT_NE(u, v);
      ASSERT_TRUE(g.has_edge(u, v));
    }
  }
  EXPECT_EQ(directed, 2 * g.num_edges());
}

TEST(GraphType, BuilderRejectsBadEdges) {
  EXPECT_THROW(Graph::from_edges(3, {{0, 0}}), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(3, {{0, 3}}), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(3, {{-1, 2}}), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(3, {{0, 1}, {1, 0}}), std::invalid_argument);
}

TEST(Io, GraphRoundTrip) {
  PlantedInstance inst = generate({25, 0.25, 0.1}, 31);
  std::string text = graph_text(inst.graph);
  std::istringstream in(text);
  Graph back = read_graph(in);
  EXPECT_EQ(graph_text(back), text);
}

TEST(Io, LabellingRoundTrip) {
  PlantedInstance inst = generate({5, 0.5, 0.5}, 3);
  std::ostringstream out;
  write_labelling(out, inst.hidden);
  std::istringstream in(out.str());
  Labelling back = read_labelling(in);
  EXPECT_EQ(back.signs, inst.hidden.signs);
  EXPECT_TRUE(back.balanced);
  std::ostringstream again;
  write_labelling(again, back);
  EXPECT_EQ(again.str(), out.str());
}

TEST(Io, RejectsMalformedInput) {
  std::istringstream bad_header("x y\n");
  EXPECT_THROW(read_graph(bad_header), std::runtime_error);
  std::istringstream bad_order("3 1\n2 1\n");
  EXPECT_THROW(read_graph(bad_order), std::runtime_error);
  std::istringstream out_of_range("3 1\n0 7\n");
  EXPECT_THROW(read_graph(out_of_range), std::runtime_error);
  std::istringstream truncated("3 2\n0 1\n");
  EXPECT_THROW(read_graph(truncated), std::runtime_error);
  std::istringstream bad_label("+1\n0\n");
  EXPECT_THROW(read_labelling(bad_label), std::runtime_error);
}
