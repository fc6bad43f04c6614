#include "regret_lab/selfcheck.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "regret_lab/corrector.hpp"
#include "regret_lab/errors.hpp"
#include "regret_lab/game.hpp"
#include "regret_lab/strategy.hpp"

namespace regret_lab {

namespace {

NodeFunction uniform_function(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  NodeFunction v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
  return v;
}

// Each check returns an empty string on success, otherwise what went wrong.
using Check = std::function<std::string()>;

std::string cycle_counts() {
  const std::size_t expected[] = {3, 6, 19, 179};
  for (int d = 1; d <= 4; ++d) {
    const std::size_t got = simple_cycles(debruijn(d)).size();
    if (got != expected[d - 1]) {
      return "debruijn(" + std::to_string(d) + ") has " + std::to_string(got) + " simple cycles";
    }
  }
  return {};
}

std::string poisson() {
  for (int d = 1; d <= 6; ++d) {
    const LabeledDigraph g = debruijn(d);
    const NodeFunction h = uniform_function(g.node_count(), 40 + static_cast<std::uint64_t>(d));
    const NodeFunction H = solve_poisson(g, h);
    const double res = poisson_residual(g, H, h);
    const double rep = (debruijn_representation(h, d).centered() - H).max_abs();
    if (res > 1e-12 || rep > 1e-10) {
      std::ostringstream s;
      s << "d=" << d << " residual " << res << " representation gap " << rep;
      return s.str();
    }
  }
  return {};
}

std::string indifference() {
  for (int d = 1; d <= 3; ++d) {
    const LabeledDigraph g = debruijn(d);
    if (!verify_indifference(g, uniform_function(g.node_count(), 7)).indifferent) {
      return "debruijn(" + std::to_string(d) + ") not indifferent";
    }
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const LabeledDigraph g = random_eulerian_outdeg2(4 + seed, seed);
    if (!verify_indifference(g, uniform_function(g.node_count(), seed)).indifferent) {
      return "random graph seed " + std::to_string(seed) + " not indifferent";
    }
  }
  return {};
}

std::string continuum() {
  const ContinuumValue mx(Payoff::max(), 0.64);
  const double expected = 0.8 * std::numbers::inv_sqrtpi / std::numbers::sqrt2;
  if (std::abs(mx.u({0.0, 0.0}, 0.0) - expected) > 1e-15) return "u(0,0) differs from sigma/sqrt(2 pi)";
  for (const Payoff& p : {Payoff::max(), Payoff::log_sum_exp()}) {
    const ContinuumValue value(p, 0.64);
    const double v = 0.3, t = 0.4, dt = 1e-5;
    const double wt = (value.w_eval(v, t + dt, 0) - value.w_eval(v, t - dt, 0)) / (2 * dt);
    if (std::abs(wt + 0.32 * value.w_eval(v, t, 2)) > 1e-6) return "heat equation residual for " + p.name();
  }
  return {};
}

std::string third_order() {
  const StrategyContext ctx(ExpertPanel::random(2, 2, 0.7, 3), Payoff::log_sum_exp(), 100);
  const Regret x{0.4, -0.2};
  for (std::uint32_t id = 0; id < 4; ++id) {
    const MarketState m(2, id);
    const double ratio = ctx.one_step_residual(x, 0.2, m, Symbol::Plus, 1.0 / 64) /
                         ctx.one_step_residual(x, 0.2, m, Symbol::Plus, 1.0 / 128);
    if (!(ratio >= 6.0 && ratio <= 10.0)) return "halving ratio " + std::to_string(ratio);
  }
  return {};
}

std::string minimax() {
  const double mu = 0.5;
  const ValueBracket one =
      exact_value(GameConfig::standard(ExpertPanel::symmetric(1, mu), Payoff::max(), 1), 21);
  if (!(one.lower <= mu && mu <= one.upper)) return "N=1 bracket misses eps*mu";
  return {};
}

std::string ellipticity() {
  const ExpertPanel p = ExpertPanel::random(2, 2, 0.6, 5);
  if (std::abs(p.lambda() - 0.5 * p.sigma2()) > 1e-15) return "lambda differs from sigma^2 / 2";
  return {};
}

std::string simulation() {
  const ExpertPanel panel = ExpertPanel::random(1, 2, 0.5, 2);
  const GameConfig cfg = GameConfig::standard(panel, Payoff::max(), 400);
  const StrategyContext ctx(panel, cfg.payoff, cfg.horizon);
  const GameTranscript tr = simulate(cfg, fstar_investor(ctx), random_market(), 9);
  Regret x = cfg.start_x;
  for (const TranscriptStep& s : tr.steps) x = advance(panel, x, s.m, s.f, s.b, cfg.epsilon());
  if (x != tr.final_x) return "transcript does not replay";
  const double gap = tr.final_payoff - ctx.value().u(cfg.start_x, 0.0);
  if (std::abs(gap) > 10.0 * cfg.epsilon()) return "f* gap " + std::to_string(gap) + " above 10 eps";
  return {};
}

}  // namespace

std::vector<CheckResult> run_selfchecks() {
  const std::pair<const char*, Check> checks[] = {
      {"simple_cycle_counts", cycle_counts}, {"poisson_solve", poisson},
      {"indifference", indifference},        {"continuum_value", continuum},
      {"third_order_residual", third_order}, {"minimax_single_step", minimax},
      {"ellipticity", ellipticity},          {"simulation", simulation},
  };
  std::vector<CheckResult> out;
  for (const auto& [name, check] : checks) {
    CheckResult r;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      r.detail = check();
      r.passed = r.detail.empty();
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace regret_lab
