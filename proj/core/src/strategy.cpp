#include "regret_lab/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "regret_lab/errors.hpp"

namespace regret_lab {

namespace {

ExpertPanel require_two_experts(ExpertPanel panel) {
  if (panel.experts() != 2) {
    throw PreconditionError("the continuum strategies are implemented for two experts, got " +
                            std::to_string(panel.experts()));
  }
  return panel;
}

}  // namespace

StrategyContext::StrategyContext(ExpertPanel panel, Payoff payoff, long horizon)
    : panel_(require_two_experts(std::move(panel))),
      value_(std::move(payoff), panel_.sigma2()),
      graph_(debruijn(panel_.depth())),
      potential_(solve_poisson(graph_, panel_.r_squared())),
      horizon_(horizon),
      epsilon_(0.0) {
  if (horizon < 1) throw PreconditionError("horizon must be at least 1");
  epsilon_ = 1.0 / std::sqrt(static_cast<double>(horizon));
}

double StrategyContext::h(const Regret& x, double t, const MarketState& m) const {
  const Regret du = value_.gradient(x, t);
  const Matrix2 d2u = value_.hessian(x, t);
  const auto q = panel_.q(m);
  const double weight = (du[0] * q[0] + du[1] * q[1]) / (du[0] + du[1]);
  const Regret xi{q[0] - weight, q[1] - weight};
  double quad = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) quad += d2u[i][j] * xi[i] * xi[j];
  return 0.5 * quad;
}

NodeFunction StrategyContext::h_nodes(const Regret& x, double t) const {
  NodeFunction out(panel_.histories());
  for (std::size_t id = 0; id < out.size(); ++id) {
    out[id] = h(x, t, MarketState(panel_.depth(), static_cast<std::uint32_t>(id)));
  }
  return out;
}

double StrategyContext::H(const Regret& x, double t, const MarketState& m) const {
  if (m.depth() != panel_.depth()) throw DomainError("history depth does not match panel");
  return 0.5 * value_.w_eval(x[0] - x[1], t, 2) * potential_[m.id()];
}

NodeFunction StrategyContext::H_nodes(const Regret& x, double t) const {
  const double scale = 0.5 * value_.w_eval(x[0] - x[1], t, 2);
  NodeFunction out(potential_.size());
  for (std::size_t id = 0; id < out.size(); ++id) out[id] = scale * potential_[id];
  return out;
}

FStar StrategyContext::f_star(const Regret& x, double t, const MarketState& m) const {
  return f_star(x, t, m, epsilon_);
}

FStar StrategyContext::f_star(const Regret& x, double t, const MarketState& m, double eps) const {
  if (!(eps > 0.0)) throw PreconditionError("epsilon must be positive");
  const auto q = panel_.q(m);
  const double v = x[0] - x[1];
  // grad u = (w_v, 1 - w_v), hess u = w_vv [[1,-1],[-1,1]].
  const ValueDerivatives d = value_.derivatives(v, t, true);
  const double du0 = d.w_v, du1 = 1.0 - d.w_v;
  const double du_one = du0 + du1;
  const double half_wvv = 0.5 * d.w_vv;
  const double dH = half_wvv * (potential_[m.concat(Symbol::Plus).id()] -
                                potential_[m.concat(Symbol::Minus).id()]);
  FStar f;
  f.unclamped = (du0 * q[0] + du1 * q[1]) / du_one + 0.5 * eps * dH / du_one;
  f.value = std::clamp(f.unclamped, -1.0, 1.0);
  f.clamped = f.value != f.unclamped;
  return f;
}

Symbol StrategyContext::b_star(const Regret& x, double t, const MarketState& m, double f) const {
  return b_star(x, t, m, f, epsilon_);
}

Symbol StrategyContext::b_star(const Regret& x, double t, const MarketState& m, double f,
                               double eps) const {
  if (!(std::abs(f) <= 1.0)) throw PreconditionError("investor prediction outside [-1, 1]");
  return f <= f_star(x, t, m, eps).value ? Symbol::Plus : Symbol::Minus;
}

Regret StrategyContext::step(const Regret& x, const MarketState& m, double f, Symbol b,
                             double eps) const {
  const auto q = panel_.q(m);
  const double sb = eps * to_real(b);
  return {x[0] + sb * (q[0] - f), x[1] + sb * (q[1] - f)};
}

double StrategyContext::one_step_residual(const Regret& x, double t, const MarketState& m,
                                          Symbol b, double eps) const {
  const double next_t = t + eps * eps;
  if (next_t > 1.0) throw DomainError("t + eps^2 exceeds the horizon");
  const double f = f_star(x, next_t, m, eps).value;
  const double lhs = value_.u(step(x, m, f, b, eps), next_t) - value_.u(x, t);
  const double dH = H(x, next_t, m) - H(x, next_t, m.concat(b));
  return std::abs(lhs - dH * eps * eps);
}

double StrategyContext::market_defect(const Regret& x, double t, const MarketState& m, double f,
                                      double eps) const {
  const double next_t = t + eps * eps;
  if (next_t > 1.0) throw DomainError("t + eps^2 exceeds the horizon");
  const Symbol b = b_star(x, next_t, m, f, eps);
  const double lhs = value_.u(step(x, m, f, b, eps), next_t) - value_.u(x, t);
  const double dH = H(x, next_t, m) - H(x, next_t, m.concat(b));
  return lhs - dH * eps * eps;
}

double admissible_horizon(double corrector_bound, int depth, double mu, double theta) {
  const double cd = corrector_bound * static_cast<double>(depth);
  return cd * cd / (4.0 * theta * theta * mu * mu);
}

}  // namespace regret_lab
