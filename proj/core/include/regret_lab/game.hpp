#pragma once

// The discrete N-step prediction game: exact small-horizon minimax values,
// strategy-vs-strategy simulation and convergence-rate experiments.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "regret_lab/continuum.hpp"
#include "regret_lab/digraph.hpp"
#include "regret_lab/graph_calculus.hpp"
#include "regret_lab/panel.hpp"
#include "regret_lab/strategy.hpp"

namespace regret_lab {

struct GameConfig {
  ExpertPanel panel;
  Payoff payoff;
  long horizon;  ///< N
  Regret start_x{0.0, 0.0};
  double start_t = 0.0;
  MarketState start_m;

  /// x = 0, t = 0, m = all -1.
  static GameConfig standard(ExpertPanel panel, Payoff payoff, long horizon);

  double epsilon() const;
  /// Steps left before t = 1; throws unless start_t lies on the time grid.
  long steps_remaining() const;
  void validate() const;
};

/// x + eps b (q(m) - f 1).
Regret advance(const ExpertPanel& panel, const Regret& x, const MarketState& m, double f, Symbol b,
               double eps);

// ---------------------------------------------------------------------------
// Exact minimax on an investor grid

inline constexpr long kMaxExactHorizon = 8;
inline constexpr int kMinFGrid = 11;
inline constexpr std::size_t kDefaultLeafBudget = 200'000'000;

/// f_grid equispaced points on [-1, 1].
std::vector<double> coarse_f_grid(int f_grid);
/// f_grid equispaced points on [incumbent - h, incumbent + h] clipped to
/// [-1, 1], h the coarse spacing.
std::vector<double> refined_f_grid(double incumbent, int f_grid);

struct ValueBracket {
  double lower = 0.0;
  double upper = 0.0;  ///< grid minimax
  std::size_t leaves = 0;
};

/// Grid minimax value by full tree recursion. At every investor node the
/// coarse grid is searched, then a refined grid around the first coarse
/// minimiser. Restricting the investor can only raise the value, so the grid
/// value is an upper bound; the payoff's translation property makes each
/// step's objective eps-Lipschitz in f, giving the lower bound
/// upper - eps * steps * (coarse spacing).
ValueBracket exact_value(const GameConfig& cfg, int f_grid,
                         std::size_t leaf_budget = kDefaultLeafBudget);

// ---------------------------------------------------------------------------
// Strategies and simulation

struct Turn {
  Regret x;
  double t;
  MarketState m;
  long step;
  std::uint64_t seed;
};

struct Investor {
  std::string name;
  std::function<double(const Turn&)> play;
};

struct Market {
  std::string name;
  std::function<Symbol(const Turn&, double f)> play;
};

/// Time at which the continuum strategies are evaluated for a move made at t:
/// t + eps^2, or t itself on the last step of a non-smooth payoff.
double strategy_time(const StrategyContext& ctx, double t);

Investor fstar_investor(const StrategyContext& ctx);
Investor constant_investor(double f);
/// f* plus a seeded uniform perturbation in [-amplitude, amplitude], clipped.
Investor perturbed_fstar_investor(const StrategyContext& ctx, double amplitude);
/// Plays script[step]; throws ProtocolError past the end of the script.
Investor script_investor(std::vector<double> script);
/// Per-step best response to market b*: searches every grid sequence of
/// `depth` moves and scores the end state with the continuum value.
Investor lookahead_investor(const StrategyContext& ctx, int f_grid = kMinFGrid, int depth = 3);

Market bstar_market(const StrategyContext& ctx);
Market all_plus_market();
/// Seeded coin flips; a pure function of (seed, step).
Market random_market();
/// Maximises the continuum value one step ahead.
Market greedy_market(const StrategyContext& ctx);

struct TranscriptStep {
  MarketState m;
  double f;
  Symbol b;
  Regret x;  ///< regret before the move
};

struct GameTranscript {
  std::vector<TranscriptStep> steps;
  Regret final_x{0.0, 0.0};
  double final_payoff = 0.0;
  std::uint64_t seed = 0;
};

/// Plays cfg.steps_remaining() rounds. Throws ProtocolError when the investor
/// leaves [-1, 1] or a strategy answers the same turn differently twice.
GameTranscript simulate(const GameConfig& cfg, const Investor& investor, const Market& market,
                        std::uint64_t seed = 0, bool record_steps = true);

struct WorstCase {
  double payoff = 0.0;
  std::vector<Symbol> path;
  std::size_t leaves = 0;
};

inline constexpr long kMaxExhaustiveHorizon = 24;

/// Largest final payoff any market sequence forces on a pure investor.
WorstCase exhaustive_market(const GameConfig& cfg, const Investor& investor);

// ---------------------------------------------------------------------------
// Rate experiments

enum class RateSide { Investor, Market };
enum class Adversary { Exhaustive, BStar };

struct RateRow {
  long horizon;
  double epsilon;
  double gap;
  double gap_over_eps;
};

struct RateTable {
  RateSide side = RateSide::Investor;
  std::vector<RateRow> rows;
  /// Least-squares fit of log|gap| against log eps.
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

struct LineFit {
  double slope;
  double intercept;
  double r_squared;
};
LineFit fit_line(std::span<const double> xs, std::span<const double> ys);

/// For each N: side=Investor plays f* against the adversary market and
/// reports payoff - u(start); side=Market plays b* against the lookahead
/// investor and reports the same difference (expected to be bounded below).
RateTable rate_experiment(const ExpertPanel& panel, const Payoff& payoff,
                          std::span<const long> horizons, Adversary adversary, RateSide side);

// ---------------------------------------------------------------------------
// Accumulated cost along a market path

/// sum_{i=1..k} h(m^i) - (b_i / 2) f#(m^i) with m^{i+1} = m^i | b_i.
double accumulated_cost(const NodeFunction& h, const NodeFunction& fsharp, const MarketState& start,
                        std::span<const Symbol> path);

/// The same sum with h and f# frozen at (x, t) from the continuum context.
double accumulated_cost_check(const StrategyContext& ctx, const Regret& x, double t,
                              const MarketState& start, std::span<const Symbol> path);

}  // namespace regret_lab
