#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "regret_lab/errors.hpp"
#include "regret_lab/graph_calculus.hpp"

using namespace regret_lab;

TEST(Calculus, GradAndLaplacianOnSmallGraph) {
  auto g = debruijn(2);
  NodeFunction v{1.0, 2.0, 4.0, 8.0};
  // node 1 = "01": + -> "11" (3), - -> "10" (2)
  EXPECT_DOUBLE_EQ(grad(g, v, LabeledDigraph::out_edge_id(1, Symbol::Plus)), 2.0 - 8.0);
  EXPECT_DOUBLE_EQ(grad(g, v, LabeledDigraph::out_edge_id(1, Symbol::Minus)), 2.0 - 4.0);
  EXPECT_DOUBLE_EQ(laplacian(g, v, 1), 2.0 - 0.5 * (8.0 + 4.0));
  auto L = laplacian(g, v);
  double sum = 0.0;
  for (double x : L) sum += x;
  EXPECT_NEAR(sum, 0.0, 1e-14);  // in-degree 2 everywhere
}

TEST(Calculus, ConstantsAreHarmonic) {
  auto g = random_eulerian_outdeg2(9, 3);
  auto L = laplacian(g, NodeFunction(9, 3.5));
  EXPECT_EQ(L.max_abs(), 0.0);
}

TEST(Poisson, DepthOneClosedForm) {
  auto g = debruijn(1);
  auto H = solve_poisson(g, NodeFunction{0.0, 1.0});
  EXPECT_NEAR(H[0], -0.5, 1e-15);
  EXPECT_NEAR(H[1], 0.5, 1e-15);
}

TEST(Poisson, DenseAndIterativeAgree) {
  for (int d = 1; d <= 8; ++d) {
    auto g = debruijn(d);
    auto h = oracle::random_function(g.node_count(), 100 + d);
    auto dense = solve_poisson(g, h, {.method = PoissonMethod::Dense});
    auto iter = solve_poisson(g, h, {.method = PoissonMethod::Iterative});
    EXPECT_LE(poisson_residual(g, dense, h), 1e-12);
    EXPECT_LE(poisson_residual(g, iter, h), 1e-12);
    EXPECT_LE((dense - iter).max_abs(), 1e-10) << "d=" << d;
    EXPECT_NEAR(mean(dense), 0.0, 1e-13);
  }
}

TEST(Poisson, GeneralGraphs) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto g = random_eulerian_outdeg2(2 + seed % 11, seed);
    auto h = oracle::random_function(g.node_count(), seed * 7);
    auto H = solve_poisson(g, h);
    EXPECT_LE(poisson_residual(g, H, h), 1e-12);
  }
}

TEST(Poisson, LargeGraphUsesIterativeRoute) {
  auto g = debruijn(12);
  auto h = oracle::random_function(g.node_count(), 5);
  auto H = solve_poisson(g, h);
  EXPECT_LE(poisson_residual(g, H, h), 1e-12);
}

TEST(Poisson, RejectsNonEulerian) {
  std::vector<Edge> edges{{0, 1, Symbol::Plus}, {0, 2, Symbol::Minus}, {1, 2, Symbol::Plus},
                          {1, 0, Symbol::Minus}, {2, 2, Symbol::Plus}, {2, 0, Symbol::Minus}};
  auto g = LabeledDigraph::from_edges(3, edges);
  EXPECT_THROW(solve_poisson(g, NodeFunction{1.0, 2.0, 3.0}), StructuralError);
}

TEST(Poisson, RejectsSizeMismatch) {
  EXPECT_THROW(solve_poisson(debruijn(2), NodeFunction{1.0, 2.0}), DomainError);
}

TEST(Representation, MatchesSolveUpToConstant) {
  for (int d = 1; d <= 8; ++d) {
    auto g = debruijn(d);
    auto h = oracle::random_function(g.node_count(), 200 + d);
    auto rep = debruijn_representation(h, d).centered();
    auto H = solve_poisson(g, h);
    EXPECT_LE((rep - H).max_abs(), 1e-10) << "d=" << d;
  }
}

TEST(Representation, NaiveTreeSum) {
  // Direct evaluation of sum_l 2^{-l} sum_{s in B^l} h(m|s).
  const int d = 4;
  auto h = oracle::random_function(16, 9);
  auto rep = debruijn_representation(h, d);
  for (std::uint32_t x = 0; x < 16; ++x) {
    MarketState m(d, x);
    double total = 0.0;
    for (int l = 0; l < d; ++l) {
      double level = 0.0;
      for (std::uint32_t s = 0; s < (1u << l); ++s) {
        std::vector<Symbol> word;
        for (int i = l - 1; i >= 0; --i) word.push_back((s >> i) & 1u ? Symbol::Plus : Symbol::Minus);
        level += h[m.concat(word).id()];
      }
      total += std::ldexp(level, -l);
    }
    EXPECT_NEAR(rep[x], total, 1e-13);
  }
}
