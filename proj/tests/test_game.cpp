#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "regret_lab/corrector.hpp"
#include "regret_lab/errors.hpp"
#include "regret_lab/game.hpp"

using namespace regret_lab;

namespace {

GameConfig small_config(long N, std::uint64_t seed, Payoff payoff = Payoff::max()) {
  return GameConfig::standard(ExpertPanel::random(1, 2, 0.6, seed), std::move(payoff), N);
}

}  // namespace

TEST(Grid, CoarseAndRefined) {
  auto c = coarse_f_grid(11);
  ASSERT_EQ(c.size(), 11u);
  EXPECT_EQ(c.front(), -1.0);
  EXPECT_EQ(c.back(), 1.0);
  EXPECT_NEAR(c[5], 0.0, 1e-16);
  auto r = refined_f_grid(0.9, 11);
  EXPECT_NEAR(r.front(), 0.7, 1e-15);
  EXPECT_EQ(r.back(), 1.0);
}

TEST(Config, StepsRemaining) {
  auto cfg = small_config(10, 1);
  EXPECT_EQ(cfg.steps_remaining(), 10);
  cfg.start_t = 0.3;
  EXPECT_EQ(cfg.steps_remaining(), 7);
  cfg.start_t = 0.35;
  EXPECT_THROW(cfg.steps_remaining(), PreconditionError);
}

TEST(ExactValue, SingleStepSymmetricPanel) {
  for (double mu : {0.2, 0.5}) {
    auto cfg = GameConfig::standard(ExpertPanel::symmetric(1, mu), Payoff::max(), 1);
    auto v = exact_value(cfg, 21);
    EXPECT_LE(v.lower, mu);
    EXPECT_GE(v.upper, mu);
    EXPECT_NEAR(v.upper, mu, 1e-15);
  }
}

TEST(ExactValue, BracketsContinuousOracle) {
  for (long N = 1; N <= 4; ++N) {
    for (std::uint64_t seed : {3u, 4u}) {
      for (auto payoff : {Payoff::max(), Payoff::log_sum_exp()}) {
        auto cfg = small_config(N, seed, payoff);
        auto v = exact_value(cfg, 11);
        const double exact = oracle::translation_minimax(cfg.panel, cfg.payoff, cfg.start_x,
                                                         cfg.start_m, N, cfg.epsilon());
        EXPECT_LE(v.lower, exact + 1e-14) << "N=" << N;
        EXPECT_GE(v.upper, exact - 1e-14) << "N=" << N;
      }
    }
  }
}

TEST(ExactValue, DynamicProgrammingIdentityIsExact) {
  for (long N = 2; N <= 4; ++N) {
    auto cfg = small_config(N, 7);
    const int grid = 11;
    const double root = exact_value(cfg, grid).upper;
    const double eps = cfg.epsilon();
    auto objective = [&](double f) {
      double worst = -INFINITY;
      for (Symbol b : {Symbol::Plus, Symbol::Minus}) {
        GameConfig child = cfg;
        child.start_x = advance(cfg.panel, cfg.start_x, cfg.start_m, f, b, eps);
        child.start_t = 1.0 / static_cast<double>(N);
        child.start_m = cfg.start_m.concat(b);
        worst = std::max(worst, exact_value(child, grid).upper);
      }
      return worst;
    };
    double best = INFINITY, incumbent = 0.0;
    for (double f : coarse_f_grid(grid)) {
      const double v = objective(f);
      if (v < best) best = v, incumbent = f;
    }
    for (double f : refined_f_grid(incumbent, grid)) best = std::min(best, objective(f));
    EXPECT_EQ(root, best) << "N=" << N;
  }
}

TEST(ExactValue, Limits) {
  EXPECT_THROW(exact_value(small_config(9, 1), 11), SizeError);
  EXPECT_THROW(exact_value(small_config(2, 1), 5), PreconditionError);
  EXPECT_THROW(exact_value(small_config(8, 1), 101, 1000), CapacityError);
}

TEST(Simulate, TranscriptReplays) {
  auto cfg = small_config(50, 2);
  StrategyContext ctx(cfg.panel, cfg.payoff, cfg.horizon);
  auto tr = simulate(cfg, fstar_investor(ctx), random_market(), 17);
  ASSERT_EQ(tr.steps.size(), 50u);
  Regret x = cfg.start_x;
  MarketState m = cfg.start_m;
  for (const auto& s : tr.steps) {
    EXPECT_EQ(s.x, x);
    EXPECT_EQ(s.m, m);
    x = advance(cfg.panel, x, m, s.f, s.b, cfg.epsilon());
    m = m.concat(s.b);
  }
  EXPECT_EQ(tr.final_x, x);
  EXPECT_EQ(tr.final_payoff, cfg.payoff(x));
  auto again = simulate(cfg, fstar_investor(ctx), random_market(), 17);
  EXPECT_EQ(again.final_x, tr.final_x);
}

TEST(Simulate, ProtocolViolations) {
  auto cfg = small_config(5, 2);
  EXPECT_THROW(simulate(cfg, constant_investor(1.5), all_plus_market()), ProtocolError);
  int calls = 0;
  Investor impure{"impure", [&calls](const Turn&) { return 0.1 * (calls++ % 2); }};
  EXPECT_THROW(simulate(cfg, impure, all_plus_market()), ProtocolError);
  EXPECT_THROW(simulate(cfg, script_investor({0.0, 0.0}), all_plus_market()), ProtocolError);
}

TEST(Exhaustive, MatchesEnumeration) {
  auto cfg = small_config(8, 5);
  StrategyContext ctx(cfg.panel, cfg.payoff, cfg.horizon);
  auto inv = fstar_investor(ctx);
  auto worst = exhaustive_market(cfg, inv);
  EXPECT_EQ(worst.leaves, 256u);
  ASSERT_EQ(worst.path.size(), 8u);
  double brute = -INFINITY;
  for (unsigned mask = 0; mask < 256; ++mask) {
    Market scripted{"mask", [mask](const Turn& t, double) {
                      return (mask >> t.step) & 1u ? Symbol::Plus : Symbol::Minus;
                    }};
    brute = std::max(brute, simulate(cfg, inv, scripted).final_payoff);
  }
  EXPECT_EQ(worst.payoff, brute);
  Market replay{"replay", [&](const Turn& t, double) { return worst.path[t.step]; }};
  EXPECT_EQ(simulate(cfg, inv, replay).final_payoff, worst.payoff);
}

TEST(Strategies, FStarHoldsTheValue) {
  auto panel = ExpertPanel::random(2, 2, 0.5, 8);
  const long N = 2000;
  auto cfg = GameConfig::standard(panel, Payoff::max(), N);
  StrategyContext ctx(panel, cfg.payoff, N);
  const double u0 = ctx.value().u(cfg.start_x, 0.0);
  const double eps = cfg.epsilon();
  for (const auto& market : {bstar_market(ctx), all_plus_market(), random_market(), greedy_market(ctx)}) {
    auto tr = simulate(cfg, fstar_investor(ctx), market, 3, false);
    EXPECT_LE(std::abs(tr.final_payoff - u0), 20 * eps) << market.name;
  }
}

TEST(Strategies, BStarHoldsAgainstConstantInvestors) {
  auto panel = ExpertPanel::random(1, 2, 0.5, 9);
  const long N = 2000;
  auto cfg = GameConfig::standard(panel, Payoff::log_sum_exp(), N);
  StrategyContext ctx(panel, cfg.payoff, N);
  const double u0 = ctx.value().u(cfg.start_x, 0.0);
  for (double f : {-0.5, 0.0, 0.3}) {
    auto tr = simulate(cfg, constant_investor(f), bstar_market(ctx), 0, false);
    EXPECT_GE(tr.final_payoff - u0, -20 * cfg.epsilon()) << f;
  }
}

TEST(Strategies, LookaheadIsPure) {
  auto panel = ExpertPanel::random(1, 2, 0.5, 10);
  auto cfg = GameConfig::standard(panel, Payoff::log_sum_exp(), 20);
  StrategyContext ctx(panel, cfg.payoff, 20);
  auto tr = simulate(cfg, lookahead_investor(ctx, 11, 2), bstar_market(ctx), 0);
  EXPECT_EQ(tr.steps.size(), 20u);
}

TEST(Rates, FitLine) {
  std::vector<double> xs{0.0, 1.0, 2.0}, ys{1.0, 3.0, 5.0};
  auto fit = fit_line(xs, ys);
  EXPECT_DOUBLE_EQ(fit.slope, 2.0);
  EXPECT_DOUBLE_EQ(fit.intercept, 1.0);
  EXPECT_DOUBLE_EQ(fit.r_squared, 1.0);
}

TEST(Rates, TableShape) {
  std::vector<long> Ns{4, 8};
  auto table = rate_experiment(ExpertPanel::random(1, 2, 0.5, 1), Payoff::log_sum_exp(), Ns,
                               Adversary::Exhaustive, RateSide::Investor);
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_EQ(table.rows[1].horizon, 8);
  EXPECT_NEAR(table.rows[1].gap_over_eps, table.rows[1].gap / table.rows[1].epsilon, 1e-15);
}

TEST(AccumulatedCost, ClosedWalksCostTheMean) {
  auto panel = ExpertPanel::random(3, 2, 0.6, 4);
  StrategyContext ctx(panel, Payoff::log_sum_exp(), 100);
  Regret x{0.1, -0.2};
  const double t = 0.4;
  const double mh = mean(ctx.h_nodes(x, t));
  auto g = ctx.graph();
  for (const Cycle& c : simple_cycles(g)) {
    const auto nodes = c.nodes(g);
    std::vector<Symbol> path;
    for (std::size_t e : c.edges) path.push_back(g.edge(e).label);
    MarketState start(3, static_cast<std::uint32_t>(nodes.front()));
    EXPECT_NEAR(accumulated_cost_check(ctx, x, t, start, path),
                mh * static_cast<double>(path.size()), 1e-13);
  }
  std::vector<Symbol> too_long(33, Symbol::Plus);
  EXPECT_THROW(accumulated_cost_check(ctx, x, t, MarketState(3, 0), too_long), PreconditionError);
}

TEST(AccumulatedCost, OpenPathsTelescope) {
  auto panel = ExpertPanel::random(2, 2, 0.6, 5);
  StrategyContext ctx(panel, Payoff::log_sum_exp(), 100);
  Regret x{0.3, 0.1};
  const double t = 0.5;
  auto h = ctx.h_nodes(x, t);
  auto H = ctx.H_nodes(x, t);
  std::vector<Symbol> path{Symbol::Plus, Symbol::Minus, Symbol::Minus, Symbol::Plus, Symbol::Plus};
  MarketState start(2, 1);
  const double k = static_cast<double>(path.size());
  EXPECT_NEAR(accumulated_cost_check(ctx, x, t, start, path) - k * mean(h),
              H[start.id()] - H[start.concat(path).id()], 1e-14);
  // Eulerian cycle of debruijn(2) from node 0.
  auto g = debruijn(2);
  std::vector<Symbol> euler;
  for (std::size_t e : eulerian_cycle(g).edges) euler.push_back(g.edge(e).label);
  EXPECT_NEAR(accumulated_cost_check(ctx, x, t, MarketState(2, 0), euler), 8 * mean(h), 1e-14);
  std::vector<Symbol> one{Symbol::Plus};
  EXPECT_EQ(accumulated_cost(h, NodeFunction(4), start, one), h[1]);
}

TEST(ExactValue, EqualExpertsGiveZeroRegret) {
  ExpertPanel panel(1, 0.5, {{0.3, 0.3}, {-0.2, -0.2}});
  auto cfg = GameConfig::standard(panel, Payoff::max(), 1);
  cfg.start_x = {0.4, -0.1};
  auto v = exact_value(cfg, 11);
  EXPECT_LE(v.lower, 0.4);
  EXPECT_GE(v.upper, 0.4);
  EXPECT_NEAR(exact_value(cfg, 21).upper, 0.4, 1e-15);
}

TEST(Simulate, SymmetricPanelTiesGoToPlus) {
  auto panel = ExpertPanel::symmetric(1, 0.5);
  auto cfg = GameConfig::standard(panel, Payoff::max(), 100);
  StrategyContext ctx(panel, cfg.payoff, 100);
  auto tr = simulate(cfg, fstar_investor(ctx), bstar_market(ctx));
  for (const auto& s : tr.steps) EXPECT_EQ(s.b, Symbol::Plus);
}
