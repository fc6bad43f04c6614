#include "regret_lab/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "regret_lab/corrector.hpp"
#include "regret_lab/errors.hpp"
#include "regret_lab/parallel.hpp"

namespace regret_lab {

// ---------------------------------------------------------------------------
// GameConfig

GameConfig GameConfig::standard(ExpertPanel panel, Payoff payoff, long horizon) {
  const int depth = panel.depth();
  return GameConfig{std::move(panel), std::move(payoff), horizon, {0.0, 0.0}, 0.0,
                    MarketState::all(depth, Symbol::Minus)};
}

double GameConfig::epsilon() const {
  if (horizon < 1) throw PreconditionError("horizon must be at least 1");
  return 1.0 / std::sqrt(static_cast<double>(horizon));
}

long GameConfig::steps_remaining() const {
  if (horizon < 1) throw PreconditionError("horizon must be at least 1");
  if (!(start_t >= 0.0 && start_t < 1.0)) throw PreconditionError("start time must lie in [0, 1)");
  const double exact = (1.0 - start_t) * static_cast<double>(horizon);
  const long steps = std::lround(exact);
  if (std::abs(exact - static_cast<double>(steps)) > 1e-9 * static_cast<double>(horizon)) {
    throw PreconditionError("start time is not a multiple of 1/N");
  }
  return steps;
}

void GameConfig::validate() const {
  steps_remaining();
  if (panel.experts() != 2) throw PreconditionError("the game engine plays two experts");
  if (start_m.depth() != panel.depth()) {
    throw PreconditionError("start history depth does not match the panel");
  }
  if (!std::isfinite(start_x[0]) || !std::isfinite(start_x[1])) {
    throw PreconditionError("start regret must be finite");
  }
}

Regret advance(const ExpertPanel& panel, const Regret& x, const MarketState& m, double f, Symbol b,
               double eps) {
  const auto q = panel.q(m);
  const double sb = eps * to_real(b);
  return {x[0] + sb * (q[0] - f), x[1] + sb * (q[1] - f)};
}

// ---------------------------------------------------------------------------
// Exact minimax

std::vector<double> coarse_f_grid(int f_grid) {
  if (f_grid < 2) throw PreconditionError("f grid needs at least two points");
  std::vector<double> grid(static_cast<std::size_t>(f_grid));
  for (int i = 0; i < f_grid; ++i) {
    grid[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / (f_grid - 1);
  }
  return grid;
}

std::vector<double> refined_f_grid(double incumbent, int f_grid) {
  if (f_grid < 2) throw PreconditionError("f grid needs at least two points");
  const double h = 2.0 / (f_grid - 1);
  const double lo = std::max(-1.0, incumbent - h);
  const double hi = std::min(1.0, incumbent + h);
  std::vector<double> grid(static_cast<std::size_t>(f_grid));
  for (int i = 0; i < f_grid; ++i) {
    grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (f_grid - 1);
  }
  return grid;
}

namespace {

class GridMinimax {
 public:
  GridMinimax(const GameConfig& cfg, int f_grid)
      : panel_(cfg.panel), payoff_(cfg.payoff), eps_(cfg.epsilon()), f_grid_(f_grid),
        coarse_(coarse_f_grid(f_grid)) {}

  double value(const Regret& x, const MarketState& m, long remaining) {
    if (remaining == 0) {
      ++leaves_;
      return payoff_(x);
    }
    auto objective = [&](double f) {
      double worst = -std::numeric_limits<double>::infinity();
      for (Symbol b : {Symbol::Plus, Symbol::Minus}) {
        worst = std::max(worst, value(advance(panel_, x, m, f, b, eps_), m.concat(b), remaining - 1));
      }
      return worst;
    };
    double best = std::numeric_limits<double>::infinity();
    double incumbent = coarse_.front();
    for (double f : coarse_) {
      const double v = objective(f);
      if (v < best) {
        best = v;
        incumbent = f;
      }
    }
    for (double f : refined_f_grid(incumbent, f_grid_)) best = std::min(best, objective(f));
    return best;
  }

  std::size_t leaves() const noexcept { return leaves_; }

 private:
  const ExpertPanel& panel_;
  const Payoff& payoff_;
  double eps_;
  int f_grid_;
  std::vector<double> coarse_;
  std::size_t leaves_ = 0;
};

}  // namespace

ValueBracket exact_value(const GameConfig& cfg, int f_grid, std::size_t leaf_budget) {
  cfg.validate();
  if (f_grid < kMinFGrid) {
    throw PreconditionError("f grid must have at least " + std::to_string(kMinFGrid) + " points");
  }
  const long remaining = cfg.steps_remaining();
  if (remaining > kMaxExactHorizon) {
    throw SizeError("exact minimax supports at most " + std::to_string(kMaxExactHorizon) +
                    " remaining steps, got " + std::to_string(remaining));
  }
  // 2 f_grid investor moves times 2 market moves per level.
  const double predicted = std::pow(4.0 * f_grid, static_cast<double>(remaining));
  if (predicted > static_cast<double>(leaf_budget)) {
    throw CapacityError("minimax tree of ~" + std::to_string(static_cast<long double>(predicted)) +
                            " leaves exceeds budget " + std::to_string(leaf_budget),
                        leaf_budget);
  }
  GridMinimax search(cfg, f_grid);
  ValueBracket out;
  out.upper = search.value(cfg.start_x, cfg.start_m, remaining);
  out.lower = out.upper - cfg.epsilon() * static_cast<double>(remaining) * (2.0 / (f_grid - 1));
  out.leaves = search.leaves();
  return out;
}

// ---------------------------------------------------------------------------
// Strategies

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit_draw(std::uint64_t seed, long step, std::uint64_t stream) {
  const std::uint64_t z =
      splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(step) * 0x2545f4914f6cdd1dULL + stream));
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

bool at_terminal(double t) { return t >= 1.0 - 1e-12; }

}  // namespace

double strategy_time(const StrategyContext& ctx, double t) {
  const double eps = ctx.epsilon();
  const double next = std::min(1.0, t + eps * eps);
  if (!ctx.value().payoff().smooth() && next > 1.0 - ContinuumValue::kTerminalGuard) return t;
  return next;
}

Investor fstar_investor(const StrategyContext& ctx) {
  return {"fstar", [&ctx](const Turn& turn) {
            return ctx.f_star(turn.x, strategy_time(ctx, turn.t), turn.m).value;
          }};
}

Investor constant_investor(double f) {
  return {"const:" + std::to_string(f), [f](const Turn&) { return f; }};
}

Investor perturbed_fstar_investor(const StrategyContext& ctx, double amplitude) {
  return {"perturbed-fstar", [&ctx, amplitude](const Turn& turn) {
            const double f = ctx.f_star(turn.x, strategy_time(ctx, turn.t), turn.m).value;
            const double noise = amplitude * (2.0 * unit_draw(turn.seed, turn.step, 1) - 1.0);
            return std::clamp(f + noise, -1.0, 1.0);
          }};
}

Investor script_investor(std::vector<double> script) {
  return {"script", [script = std::move(script)](const Turn& turn) {
            if (turn.step < 0 || static_cast<std::size_t>(turn.step) >= script.size()) {
              throw ProtocolError("investor script has no move for step " +
                                  std::to_string(turn.step));
            }
            return script[static_cast<std::size_t>(turn.step)];
          }};
}

Investor lookahead_investor(const StrategyContext& ctx, int f_grid, int depth) {
  if (depth < 1) throw PreconditionError("lookahead depth must be positive");
  auto grid = coarse_f_grid(f_grid);
  return {"lookahead", [&ctx, grid = std::move(grid), depth](const Turn& turn) {
            const double eps = ctx.epsilon();
            const double dt = eps * eps;
            // Depth-limited single-player search: the market answer to f is b*.
            std::function<double(const Regret&, double, const MarketState&, int)> search =
                [&](const Regret& x, double t, const MarketState& m, int level) -> double {
              if (at_terminal(t)) return ctx.value().payoff()(x);
              if (level == depth) return ctx.value().u(x, t);
              const double fs = ctx.f_star(x, strategy_time(ctx, t), m).value;
              double best = std::numeric_limits<double>::infinity();
              for (double f : grid) {
                const Symbol b = f <= fs ? Symbol::Plus : Symbol::Minus;
                best = std::min(best, search(advance(ctx.panel(), x, m, f, b, eps),
                                             std::min(1.0, t + dt), m.concat(b), level + 1));
              }
              return best;
            };
            const double fs = ctx.f_star(turn.x, strategy_time(ctx, turn.t), turn.m).value;
            double best = std::numeric_limits<double>::infinity();
            double choice = grid.front();
            for (double f : grid) {
              const Symbol b = f <= fs ? Symbol::Plus : Symbol::Minus;
              const double v = search(advance(ctx.panel(), turn.x, turn.m, f, b, eps),
                                      std::min(1.0, turn.t + dt), turn.m.concat(b), 1);
              if (v < best) {
                best = v;
                choice = f;
              }
            }
            return choice;
          }};
}

Market bstar_market(const StrategyContext& ctx) {
  return {"bstar", [&ctx](const Turn& turn, double f) {
            return ctx.b_star(turn.x, strategy_time(ctx, turn.t), turn.m, f);
          }};
}

Market all_plus_market() {
  return {"all-plus", [](const Turn&, double) { return Symbol::Plus; }};
}

Market random_market() {
  return {"random", [](const Turn& turn, double) {
            return unit_draw(turn.seed, turn.step, 2) < 0.5 ? Symbol::Plus : Symbol::Minus;
          }};
}

Market greedy_market(const StrategyContext& ctx) {
  return {"greedy", [&ctx](const Turn& turn, double f) {
            const double eps = ctx.epsilon();
            const double next_t = std::min(1.0, turn.t + eps * eps);
            auto score = [&](Symbol b) {
              const Regret y = advance(ctx.panel(), turn.x, turn.m, f, b, eps);
              return at_terminal(next_t) ? ctx.value().payoff()(y) : ctx.value().u(y, next_t);
            };
            return score(Symbol::Plus) >= score(Symbol::Minus) ? Symbol::Plus : Symbol::Minus;
          }};
}

// ---------------------------------------------------------------------------
// Simulation

GameTranscript simulate(const GameConfig& cfg, const Investor& investor, const Market& market,
                        std::uint64_t seed, bool record_steps) {
  cfg.validate();
  const long steps = cfg.steps_remaining();
  const double eps = cfg.epsilon();
  const double n = static_cast<double>(cfg.horizon);
  GameTranscript out;
  out.seed = seed;
  if (record_steps) out.steps.reserve(static_cast<std::size_t>(steps));
  Regret x = cfg.start_x;
  MarketState m = cfg.start_m;
  for (long i = 0; i < steps; ++i) {
    const Turn turn{x, cfg.start_t + static_cast<double>(i) / n, m, i, seed};
    const double f = investor.play(turn);
    if (!(std::abs(f) <= 1.0)) {
      throw ProtocolError("investor '" + investor.name + "' played f = " + std::to_string(f) +
                          " outside [-1, 1] at step " + std::to_string(i));
    }
    const Symbol b = market.play(turn, f);
    if (i == 0) {
      if (investor.play(turn) != f) {
        throw ProtocolError("investor '" + investor.name + "' is not a pure function of its turn");
      }
      if (market.play(turn, f) != b) {
        throw ProtocolError("market '" + market.name + "' is not a pure function of its turn");
      }
    }
    if (record_steps) out.steps.push_back({m, f, b, x});
    x = advance(cfg.panel, x, m, f, b, eps);
    m = m.concat(b);
  }
  out.final_x = x;
  out.final_payoff = cfg.payoff(x);
  return out;
}

namespace {

struct Frontier {
  Regret x;
  MarketState m;
  std::vector<Symbol> path;
};

class ExhaustiveSearch {
 public:
  ExhaustiveSearch(const GameConfig& cfg, const Investor& investor)
      : cfg_(cfg), investor_(investor), eps_(cfg.epsilon()), steps_(cfg.steps_remaining()) {}

  double move(const Regret& x, const MarketState& m, long step) const {
    const Turn turn{x, cfg_.start_t + static_cast<double>(step) / static_cast<double>(cfg_.horizon),
                    m, step, 0};
    const double f = investor_.play(turn);
    if (!(std::abs(f) <= 1.0)) {
      throw ProtocolError("investor '" + investor_.name + "' played f = " + std::to_string(f) +
                          " outside [-1, 1] at step " + std::to_string(step));
    }
    return f;
  }

  // Returns the worst payoff below (x, m, step); `path` receives the moves.
  double dfs(const Regret& x, const MarketState& m, long step, std::vector<Symbol>& path,
             std::size_t& leaves) const {
    if (step == steps_) {
      ++leaves;
      return cfg_.payoff(x);
    }
    const double f = move(x, m, step);
    double best = -std::numeric_limits<double>::infinity();
    std::vector<Symbol> best_tail, tail;
    for (Symbol b : {Symbol::Plus, Symbol::Minus}) {
      tail.clear();
      const double v = dfs(advance(cfg_.panel, x, m, f, b, eps_), m.concat(b), step + 1, tail, leaves);
      if (v > best) {
        best = v;
        best_tail.assign(1, b);
        best_tail.insert(best_tail.end(), tail.begin(), tail.end());
      }
    }
    path = std::move(best_tail);
    return best;
  }

  long steps() const noexcept { return steps_; }
  double eps() const noexcept { return eps_; }

 private:
  const GameConfig& cfg_;
  const Investor& investor_;
  double eps_;
  long steps_;
};

}  // namespace

WorstCase exhaustive_market(const GameConfig& cfg, const Investor& investor) {
  cfg.validate();
  ExhaustiveSearch search(cfg, investor);
  if (search.steps() > kMaxExhaustiveHorizon) {
    throw SizeError("exhaustive market search supports at most " +
                    std::to_string(kMaxExhaustiveHorizon) + " steps");
  }
  // Expand the first levels sequentially, then search subtrees in parallel.
  const long split = std::min<long>(4, search.steps());
  std::vector<Frontier> frontier{{cfg.start_x, cfg.start_m, {}}};
  for (long level = 0; level < split; ++level) {
    std::vector<Frontier> next;
    next.reserve(2 * frontier.size());
    for (const Frontier& node : frontier) {
      const double f = search.move(node.x, node.m, level);
      for (Symbol b : {Symbol::Plus, Symbol::Minus}) {
        Frontier child{advance(cfg.panel, node.x, node.m, f, b, search.eps()), node.m.concat(b),
                       node.path};
        child.path.push_back(b);
        next.push_back(std::move(child));
      }
    }
    frontier = std::move(next);
  }

  std::vector<double> values(frontier.size());
  std::vector<std::vector<Symbol>> tails(frontier.size());
  std::vector<std::size_t> leaves(frontier.size(), 0);
  parallel_for(frontier.size(), [&](std::size_t i) {
    values[i] = search.dfs(frontier[i].x, frontier[i].m, split, tails[i], leaves[i]);
  });

  WorstCase out;
  out.payoff = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    out.leaves += leaves[i];
    if (values[i] > out.payoff) {
      out.payoff = values[i];
      out.path = frontier[i].path;
      out.path.insert(out.path.end(), tails[i].begin(), tails[i].end());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rates

LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw PreconditionError("line fit needs at least two paired points");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw NumericError("line fit with identical abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

RateTable rate_experiment(const ExpertPanel& panel, const Payoff& payoff,
                          std::span<const long> horizons, Adversary adversary, RateSide side) {
  RateTable table;
  table.side = side;
  for (long N : horizons) {
    const StrategyContext ctx(panel, payoff, N);
    const GameConfig cfg = GameConfig::standard(panel, payoff, N);
    const double start_value = ctx.value().u(cfg.start_x, cfg.start_t);
    double final_payoff = 0.0;
    if (side == RateSide::Investor) {
      const Investor inv = fstar_investor(ctx);
      final_payoff = adversary == Adversary::Exhaustive
                         ? exhaustive_market(cfg, inv).payoff
                         : simulate(cfg, inv, bstar_market(ctx), 0, false).final_payoff;
    } else {
      final_payoff =
          simulate(cfg, lookahead_investor(ctx), bstar_market(ctx), 0, false).final_payoff;
    }
    const double eps = cfg.epsilon();
    const double gap = final_payoff - start_value;
    table.rows.push_back({N, eps, gap, gap / eps});
  }
  std::vector<double> xs, ys;
  for (const RateRow& row : table.rows) {
    if (row.gap != 0.0) {
      xs.push_back(std::log(row.epsilon));
      ys.push_back(std::log(std::abs(row.gap)));
    }
  }
  if (xs.size() >= 2) {
    const LineFit fit = fit_line(xs, ys);
    table.slope = fit.slope;
    table.intercept = fit.intercept;
    table.r_squared = fit.r_squared;
  } else {
    table.slope = table.intercept = table.r_squared = std::numeric_limits<double>::quiet_NaN();
  }
  return table;
}

// ---------------------------------------------------------------------------
// Accumulated cost

double accumulated_cost(const NodeFunction& h, const NodeFunction& fsharp, const MarketState& start,
                        std::span<const Symbol> path) {
  const std::size_t nodes = std::size_t{1} << start.depth();
  if (h.size() != nodes || fsharp.size() != nodes) {
    throw DomainError("node functions do not match the history depth");
  }
  if (path.size() > 4 * nodes) {
    throw PreconditionError("path longer than 4 * 2^d steps");
  }
  double total = 0.0;
  MarketState m = start;
  for (Symbol b : path) {
    total += h[m.id()] - 0.5 * to_real(b) * fsharp[m.id()];
    m = m.concat(b);
  }
  return total;
}

double accumulated_cost_check(const StrategyContext& ctx, const Regret& x, double t,
                              const MarketState& start, std::span<const Symbol> path) {
  const NodeFunction h = ctx.h_nodes(x, t);
  const NodeFunction fsharp = corrector_from_potential(ctx.graph(), ctx.H_nodes(x, t));
  return accumulated_cost(h, fsharp, start, path);
}

}  // namespace regret_lab
