#pragma once

// Node costs, the graph potential and the asymptotically optimal investor and
// market strategies for the two-expert game.

#include <cstddef>

#include "regret_lab/continuum.hpp"
#include "regret_lab/digraph.hpp"
#include "regret_lab/graph_calculus.hpp"
#include "regret_lab/panel.hpp"

namespace regret_lab {

struct FStar {
  double value = 0.0;      ///< clamped to [-1, 1]
  double unclamped = 0.0;
  bool clamped = false;
};

/// Everything the strategies need, fixed for one panel, payoff and horizon.
///
/// Because h(x, t; m) = (1/2) w_vv(x1 - x2, t) r(m)^2, the potential factors
/// as H(x, t; m) = (1/2) w_vv(x1 - x2, t) P(m) with P the mean-zero solution
/// of laplacian(P) = r^2 - mean(r^2). P is solved once here.
class StrategyContext {
 public:
  StrategyContext(ExpertPanel panel, Payoff payoff, long horizon);

  const ExpertPanel& panel() const noexcept { return panel_; }
  const ContinuumValue& value() const noexcept { return value_; }
  const LabeledDigraph& graph() const noexcept { return graph_; }
  const NodeFunction& potential() const noexcept { return potential_; }
  long horizon() const noexcept { return horizon_; }
  double epsilon() const noexcept { return epsilon_; }

  /// h = (1/2) <hess u xi, xi>,  xi = q(m) - (<grad u, q(m)> / <grad u, 1>) 1.
  double h(const Regret& x, double t, const MarketState& m) const;
  NodeFunction h_nodes(const Regret& x, double t) const;

  /// Mean-zero potential (1/2) w_vv P(m).
  double H(const Regret& x, double t, const MarketState& m) const;
  NodeFunction H_nodes(const Regret& x, double t) const;

  /// Weighted average plus corrector, using this context's epsilon or an
  /// explicit one.
  FStar f_star(const Regret& x, double t, const MarketState& m) const;
  FStar f_star(const Regret& x, double t, const MarketState& m, double eps) const;

  /// +1 when f <= f*(x, t, m), else -1.
  Symbol b_star(const Regret& x, double t, const MarketState& m, double f) const;
  Symbol b_star(const Regret& x, double t, const MarketState& m, double f, double eps) const;

  /// Regret after one step: x + eps b (q(m) - f 1).
  Regret step(const Regret& x, const MarketState& m, double f, Symbol b, double eps) const;

  /// |u(x + eps b (q - f* 1), t + eps^2) - u(x, t) - grad^b H(x, t + eps^2; m) eps^2|
  /// with f* = f*(x, t + eps^2; m) played at step size eps.
  double one_step_residual(const Regret& x, double t, const MarketState& m, Symbol b,
                           double eps) const;

  /// Signed u(x + eps b* (q - f 1), t + eps^2) - u(x, t) - grad^{b*} H(x, t + eps^2; m) eps^2
  /// with b* = b*(x, t + eps^2; m, f).
  double market_defect(const Regret& x, double t, const MarketState& m, double f,
                       double eps) const;

 private:
  ExpertPanel panel_;
  ContinuumValue value_;
  LabeledDigraph graph_;
  NodeFunction potential_;
  long horizon_;
  double epsilon_;
};

/// Horizon above which f* needs no clamping when the corrector term
/// |H(m+) - H(m-)| / <grad u, 1> is bounded by corrector_bound * d / theta.
double admissible_horizon(double corrector_bound, int depth, double mu, double theta = 1.0);

}  // namespace regret_lab
