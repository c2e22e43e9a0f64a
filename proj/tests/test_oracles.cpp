#include "bisectlab/oracles.hpp"

#include "bisectlab/census.hpp"
#include "bisectlab/graph.hpp"
#include "bisectlab/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace bisectlab;

namespace {

Labelling lab_from(const std::string& s) {
  std::vector<std::int8_t> signs;
  for (char c : s) signs.push_back(c == '+' ? 1 : -1);
  return make_labelling(std::move(signs));
}

Graph two_triangles() {
  return Graph::from_edges(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}});
}

}  // namespace

TEST(Likelihood, HandExample) {
  Graph g = Graph::from_edges(4, {{0, 1}, {2, 3}});
  LikelihoodBreakdown b = log_likelihood(g, lab_from("++--"), 0.5, 0.25);
  EXPECT_EQ(b.same_pairs, 2);
  EXPECT_EQ(b.cross_pairs, 4);
  EXPECT_EQ(b.same_edges, 2);
  EXPECT_EQ(b.cross_edges, 0);
  // ln(0.25 * 0.75^4)
  EXPECT_NEAR(b.log_likelihood, -2.5370226509270142, 1e-12);
}

TEST(Likelihood, CountIdentitiesAndSignInvariance) {
  PlantedInstance inst = generate({5, 0.5, 0.2}, 91);
  Labelling tau = lab_from("+-+-+-+--+");
  LikelihoodBreakdown b = log_likelihood(inst.graph, tau, 0.5, 0.2);
  EXPECT_EQ(b.same_pairs + b.cross_pairs, 45);  // C(10, 2)
  EXPECT_EQ(b.same_edges + b.cross_edges, inst.graph.num_edges());
  EXPECT_EQ(b.same_pairs, 20);  // balanced tau: n(n-1)
  EXPECT_EQ(b.cross_pairs, 25);  // balanced tau: n^2
  LikelihoodBreakdown neg = log_likelihood(inst.graph, negated(tau), 0.5, 0.2);
  EXPECT_EQ(b.log_likelihood, neg.log_likelihood);
  EXPECT_EQ(b.same_edges, neg.same_edges);
}

TEST(Likelihood, EmptyGraphClosedForm) {
  PlantedInstance inst = generate({3, 0.0, 0.0}, 1);
  double p = 0.3;
  double q = 0.1;
  LikelihoodBreakdown b = log_likelihood(inst.graph, inst.hidden, p, q);
  EXPECT_NEAR(b.log_likelihood, 6 * std::log(1 - p) + 9 * std::log(1 - q), 1e-12);
}

TEST(Likelihood, EqualParametersIgnoreTheLabelling) {
  PlantedInstance inst = generate({4, 0.6, 0.3}, 17);
  double base = log_likelihood(inst.graph, lab_from("++++----"), 0.37, 0.37).log_likelihood;
  for (const char* s : {"+-+-+-+-", "+--++--+", "-+-+-+-+"}) {
    EXPECT_NEAR(log_likelihood(inst.graph, lab_from(s), 0.37, 0.37).log_likelihood, base,
                1e-12);
  }
}

TEST(Likelihood, DeterministicEndpointParameters) {
  PlantedInstance inst = generate({3, 1.0, 0.0}, 7);  // two cliques
  // consistent pattern: probability exactly 1
  EXPECT_DOUBLE_EQ(log_likelihood(inst.graph, inst.hidden, 1.0, 0.0).log_likelihood, 0.0);
  // any relabelling turns some mandatory edge into a forbidden one
  Labelling wrong = inst.hidden;
  std::size_t a = 0;
  std::size_t b = 0;
  while (inst.hidden.signs[a] != 1) ++a;
  while (inst.hidden.signs[b] != -1) ++b;
  std::swap(wrong.signs[a], wrong.signs[b]);
  EXPECT_TRUE(std::isinf(log_likelihood(inst.graph, wrong, 1.0, 0.0).log_likelihood));
  EXPECT_THROW(log_likelihood(inst.graph, lab_from("++-"), 0.5, 0.2), std::invalid_argument);
  EXPECT_THROW(log_likelihood(inst.graph, inst.hidden, 1.5, 0.2), std::invalid_argument);
}

TEST(MapBruteforce, HandExample) {
  Graph g = Graph::from_edges(4, {{0, 1}, {2, 3}});
  MapResult r = map_bruteforce(g, 0.5, 0.25);
  ASSERT_TRUE(r.unique);
  ASSERT_EQ(r.argmaxes.size(), 1u);
  EXPECT_EQ(r.argmaxes[0].signs, lab_from("++--").signs);
  EXPECT_NEAR(r.max_log_likelihood, -2.5370226509270142, 1e-12);
  // the two competitors both cut 2 edges and score ln(0.25 * 0.0625 * 0.5625)
  double competitor = std::log(0.25) + std::log(0.0625) + std::log(0.5625);
  EXPECT_GT(r.max_log_likelihood, competitor);
}

TEST(MapBruteforce, EqualParametersMakeEverythingOptimal) {
  Graph g = Graph::from_edges(4, {{0, 1}, {2, 3}});
  MapResult r = map_bruteforce(g, 0.4, 0.4);
  EXPECT_FALSE(r.unique);
  EXPECT_EQ(r.argmaxes.size(), 3u);  // C(3, 1) sign-canonical balanced labellings
}

TEST(MapBruteforce, TwoTrianglesComponentSplit) {
  MapResult r = map_bruteforce(two_triangles(), 0.9, 0.1);
  ASSERT_TRUE(r.unique);
  EXPECT_EQ(r.argmaxes[0].signs, lab_from("+++---").signs);
}

TEST(MapBruteforce, SizeAndParameterGuards) {
  EXPECT_THROW(map_bruteforce(Graph(26), 0.5, 0.2), std::invalid_argument);
  EXPECT_THROW(map_bruteforce(Graph(5), 0.5, 0.2), std::invalid_argument);
  EXPECT_THROW(map_bruteforce(Graph(0), 0.5, 0.2), std::invalid_argument);
}

TEST(MinBisection, TwoTrianglesAndCompleteGraph) {
  MinBisectionResult r = min_bisection_bruteforce(two_triangles());
  EXPECT_EQ(r.min_cut, 0);
  ASSERT_TRUE(r.unique);
  EXPECT_EQ(r.argmins[0].signs, lab_from("+++---").signs);

  Graph k4 = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  MinBisectionResult k = min_bisection_bruteforce(k4);
  EXPECT_EQ(k.min_cut, 4);
  EXPECT_EQ(k.argmins.size(), 3u);
  EXPECT_FALSE(k.unique);
}

TEST(MinBisection, AgreesWithMapWheneverPExceedsQ) {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
    for (std::int64_t half : {3, 4, 5}) {
      PlantedInstance inst = generate({half, 0.6, 0.2}, seed);
      MapResult map = map_bruteforce(inst.graph, 0.6, 0.2);
      MinBisectionResult cut = min_bisection_bruteforce(inst.graph);
      ASSERT_EQ(map.argmaxes.size(), cut.argmins.size());
      for (std::size_t i = 0; i < map.argmaxes.size(); ++i)
        EXPECT_EQ(map.argmaxes[i].signs, cut.argmins[i].signs);
    }
  }
}

TEST(SwapCheck, NoPairOnAllStrictMajorities) {
  PlantedInstance inst = generate({4, 1.0, 0.0}, 11);  // two cliques, margins 3
  SwapCheckReport r =
      minority_swap_check(inst.graph, inst.hidden, 1.0, 0.0, Sense::assortative);
  EXPECT_FALSE(r.pair_exists);
  EXPECT_EQ(r.witness_plus, -1);
  EXPECT_EQ(r.log_likelihood_after, r.log_likelihood_before);
}

TEST(SwapCheck, HandSixNodeDoubleMinority) {
  Graph g = Graph::from_edges(6, {{0, 1}, {0, 3}, {0, 4}, {1, 5}, {2, 5}, {4, 5}});
  Labelling tau = lab_from("+++---");
  SwapCheckReport r = minority_swap_check(g, tau, 0.5, 0.25, Sense::assortative);
  EXPECT_TRUE(r.pair_exists);
  EXPECT_TRUE(r.witness_guaranteed);
  EXPECT_FALSE(r.witness_adjacent);
  EXPECT_EQ(r.witness_plus, 0);
  EXPECT_EQ(r.witness_minus, 5);
  EXPECT_EQ(r.margin_plus, -1);
  EXPECT_EQ(r.margin_minus, -1);
  // two same-class edges gained: gain = 2 * ln(p(1-q) / (q(1-p))) = 2 ln 3
  EXPECT_NEAR(r.log_likelihood_after - r.log_likelihood_before, 2 * std::log(3.0), 1e-12);
}

TEST(SwapCheck, AdjacentTiePairIsReportedButNotGuaranteed) {
  // path 0-1-2-3 with tau = (+,+,-,-): nodes 1 and 2 are tied minorities and
  // adjacent, the one configuration where the swap can lower the likelihood
  Graph g = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  Labelling tau = lab_from("++--");
  SwapCheckReport r = minority_swap_check(g, tau, 0.5, 0.25, Sense::assortative);
  EXPECT_TRUE(r.pair_exists);
  EXPECT_FALSE(r.witness_guaranteed);
  EXPECT_TRUE(r.witness_adjacent);
  EXPECT_EQ(r.witness_plus, 1);
  EXPECT_EQ(r.witness_minus, 2);
  EXPECT_LT(r.log_likelihood_after, r.log_likelihood_before);
}

TEST(SwapCheck, DisassortativePairsAlwaysGuaranteed) {
  // within-class edges under a disassortative model make every node a minority
  Graph g = Graph::from_edges(4, {{0, 1}, {2, 3}});
  Labelling tau = lab_from("++--");
  SwapCheckReport r = minority_swap_check(g, tau, 0.25, 0.5, Sense::disassortative);
  EXPECT_TRUE(r.pair_exists);
  EXPECT_TRUE(r.witness_guaranteed);
  EXPECT_EQ(r.witness_plus, 0);
  EXPECT_EQ(r.witness_minus, 2);
  EXPECT_GT(r.log_likelihood_after, r.log_likelihood_before);
}

TEST(SwapCheck, ParameterGuards) {
  Graph g = Graph::from_edges(4, {{0, 1}, {2, 3}});
  Labelling tau = lab_from("++--");
  EXPECT_THROW(minority_swap_check(g, tau, 0.4, 0.4, Sense::assortative),
               std::invalid_argument);
  EXPECT_THROW(minority_swap_check(g, tau, 0.2, 0.5, Sense::assortative),
               std::invalid_argument);
  EXPECT_THROW(minority_swap_check(g, tau, 0.5, 0.2, Sense::disassortative),
               std::invalid_argument);
}

TEST(SwapCheck, MonteCarloBelowThreshold) {
  // far below the exact-recovery threshold the hidden labelling carries
  // double-minority pairs in nearly every draw, and each chosen swap must
  // not lower the likelihood (the function itself hard-asserts that)
  const std::int64_t half = 1000;
  const double p = 2.0 * std::log(1000.0) / 1000.0;
  const double q = 1.0 * std::log(1000.0) / 1000.0;
  int exists = 0;
  int guaranteed = 0;
  for (int t = 0; t < 50; ++t) {
    PlantedInstance inst = generate({half, p, q}, mix_seed(424242, static_cast<std::uint64_t>(t)));
    SwapCheckReport r =
        minority_swap_check(inst.graph, inst.hidden, p, q, Sense::assortative);
    exists += r.pair_exists;
    guaranteed += r.witness_guaranteed;
    if (r.witness_guaranteed)
      EXPECT_GE(r.log_likelihood_after, r.log_likelihood_before);
  }
  EXPECT_GE(exists, 48);
  EXPECT_GE(guaranteed, 48);
}
