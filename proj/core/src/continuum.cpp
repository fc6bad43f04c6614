#include "regret_lab/continuum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "regret_lab/errors.hpp"

namespace regret_lab {

// ---------------------------------------------------------------------------
// Payoff

Payoff Payoff::max() {
  Payoff p;
  p.kind_ = PayoffKind::Max;
  p.name_ = "max";
  p.smooth_ = false;
  return p;
}

Payoff Payoff::log_sum_exp(double kappa) {
  if (!(kappa > 0.0)) throw PreconditionError("log-sum-exp temperature must be positive");
  Payoff p;
  p.kind_ = PayoffKind::LogSumExp;
  p.name_ = kappa == 1.0 ? "lse" : "lse:" + std::to_string(kappa);
  p.smooth_ = true;
  p.kappa_ = kappa;
  return p;
}

Payoff Payoff::profile(std::string name, Profile g0, bool smooth, Profile g0_prime,
                       Profile g0_second) {
  if (!g0) throw PreconditionError("profile payoff needs g0");
  if (static_cast<bool>(g0_prime) != static_cast<bool>(g0_second)) {
    throw PreconditionError("profile derivatives must be given together");
  }
  Payoff p;
  p.kind_ = PayoffKind::Profile;
  p.name_ = std::move(name);
  p.smooth_ = smooth;
  p.g0_ = std::move(g0);
  p.g0_prime_ = std::move(g0_prime);
  p.g0_second_ = std::move(g0_second);
  return p;
}

Payoff Payoff::parse(std::string_view spec) {
  if (spec == "max") return max();
  if (spec == "lse") return log_sum_exp();
  if (spec.starts_with("lse:")) {
    try {
      return log_sum_exp(std::stod(std::string(spec.substr(4))));
    } catch (const std::invalid_argument&) {
    }
  }
  throw PreconditionError("unknown payoff '" + std::string(spec) + "' (expected max or lse[:kappa])");
}

namespace {

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }
double logistic(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

double Payoff::operator()(std::span<const double> x) const {
  if (x.empty()) throw PreconditionError("payoff of an empty regret vector");
  switch (kind_) {
    case PayoffKind::Max:
      return *std::max_element(x.begin(), x.end());
    case PayoffKind::LogSumExp: {
      const double top = *std::max_element(x.begin(), x.end());
      double s = 0.0;
      for (double xi : x) s += std::exp((xi - top) / kappa_);
      return top + kappa_ * std::log(s);
    }
    case PayoffKind::Profile:
      if (x.size() != 2) throw PreconditionError("profile payoffs are two-expert only");
      return x[1] + g0_(x[0] - x[1]);
  }
  return 0.0;
}

double Payoff::g0(double v) const {
  switch (kind_) {
    case PayoffKind::Max:
      return std::max(v, 0.0);
    case PayoffKind::LogSumExp:
      return kappa_ * softplus(v / kappa_);
    case PayoffKind::Profile:
      return g0_(v);
  }
  return 0.0;
}

bool Payoff::has_profile_derivatives() const noexcept {
  return kind_ == PayoffKind::LogSumExp || (kind_ == PayoffKind::Profile && g0_prime_);
}

double Payoff::g0_prime(double v) const {
  if (kind_ == PayoffKind::LogSumExp) return logistic(v / kappa_);
  if (kind_ == PayoffKind::Profile && g0_prime_) return g0_prime_(v);
  if (kind_ == PayoffKind::Max && v != 0.0) return v > 0.0 ? 1.0 : 0.0;
  throw NumericError("payoff profile derivative unavailable for " + name_);
}

double Payoff::g0_second(double v) const {
  if (kind_ == PayoffKind::LogSumExp) {
    const double p = logistic(v / kappa_);
    return p * (1.0 - p) / kappa_;
  }
  if (kind_ == PayoffKind::Profile && g0_second_) return g0_second_(v);
  throw NumericError("payoff profile second derivative unavailable for " + name_);
}

// ---------------------------------------------------------------------------
// Gaussian helpers

double normal_pdf(double z) noexcept {
  return std::exp(-0.5 * z * z) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

const GaussHermiteRule& gauss_hermite(int order) {
  static std::mutex mutex;
  static std::map<int, GaussHermiteRule> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(order); it != cache.end()) return it->second;
  if (order < 1) throw PreconditionError("Gauss-Hermite order must be positive");

  // Golub-Welsch: nodes are eigenvalues of the Jacobi matrix with
  // off-diagonal sqrt(k/2); weights are sqrt(pi) times squared first
  // eigenvector components.
  const auto n = static_cast<Eigen::Index>(order);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (Eigen::Index k = 1; k < n; ++k) sub(k - 1) = std::sqrt(0.5 * static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericError("Gauss-Hermite eigen solve failed");

  GaussHermiteRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  const double sqrt_pi = 1.0 / std::numbers::inv_sqrtpi;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double v0 = solver.eigenvectors()(0, k);
    rule.nodes[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
    rule.weights[static_cast<std::size_t>(k)] = sqrt_pi * v0 * v0;
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

// ---------------------------------------------------------------------------
// ContinuumValue

ContinuumValue::ContinuumValue(Payoff payoff, double sigma2)
    : payoff_(std::move(payoff)), sigma2_(sigma2), sigma_(std::sqrt(sigma2)) {
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
    throw PreconditionError("diffusion coefficient must be finite and non-negative");
  }
}

void ContinuumValue::check_time(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("time " + std::to_string(t) + " outside [0, 1]");
  }
}

double ContinuumValue::spread(double t) const {
  check_time(t);
  return sigma_ * std::sqrt(1.0 - t);
}

ValueDerivatives ContinuumValue::closed_form_max(double v, double t, bool need_second) const {
  const double s = spread(t);
  ValueDerivatives d;
  if (s == 0.0) {
    d.w = std::max(v, 0.0);
    d.w_v = v > 0.0 ? 1.0 : (v < 0.0 ? 0.0 : 0.5);
    if (need_second) throw NumericError("w_vv of the max payoff is singular at t = 1");
    return d;
  }
  const double z = v / s;
  const double pdf = normal_pdf(z);
  const double cdf = normal_cdf(z);
  d.w = v * cdf + s * pdf;
  d.w_v = cdf;
  if (need_second) d.w_vv = pdf / s;
  return d;
}

namespace {

bool agree(const ValueDerivatives& a, const ValueDerivatives& b) {
  const double tol = ContinuumValue::kQuadratureTolerance;
  auto close = [tol](double x, double y) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(x)); };
  return close(a.w, b.w) && close(a.w_v, b.w_v) && close(a.w_vv, b.w_vv);
}

// 16-point Gauss-Legendre rule on [-1, 1] by Golub-Welsch.
const GaussHermiteRule& gauss_legendre16() {
  static const GaussHermiteRule rule = [] {
    constexpr int n = 16;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int k = 1; k < n; ++k) sub(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    GaussHermiteRule r;
    for (int k = 0; k < n; ++k) {
      const double v0 = solver.eigenvectors()(0, k);
      r.nodes.push_back(solver.eigenvalues()(k));
      r.weights.push_back(2.0 * v0 * v0);
    }
    return r;
  }();
  return rule;
}

}  // namespace

ValueDerivatives ContinuumValue::composite_quadrature(double v, double s, bool need_second,
                                                      int panels) const {
  const GaussHermiteRule& rule = gauss_legendre16();
  const bool direct = payoff_.has_profile_derivatives();
  const double half = kTruncation / panels;
  ValueDerivatives d;
  for (int p = 0; p < panels; ++p) {
    const double mid = -kTruncation + (2 * p + 1) * half;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double z = mid + half * rule.nodes[k];
      const double wk = half * rule.weights[k] * normal_pdf(z);
      const double y = v + s * z;
      const double g = payoff_.g0(y);
      d.w += wk * g;
      if (direct) {
        d.w_v += wk * payoff_.g0_prime(y);
        if (need_second) d.w_vv += wk * payoff_.g0_second(y);
      } else {
        d.w_v += wk * g * z / s;
        if (need_second) d.w_vv += wk * g * (z * z - 1.0) / (s * s);
      }
    }
  }
  return d;
}

ValueDerivatives ContinuumValue::quadrature_at_order(double v, double s, bool need_second,
                                                     int order) const {
  const GaussHermiteRule& rule = gauss_hermite(order);
  const bool direct = payoff_.has_profile_derivatives();
  ValueDerivatives d;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double z = std::numbers::sqrt2 * rule.nodes[k];
    const double wk = rule.weights[k] * std::numbers::inv_sqrtpi;
    const double y = v + s * z;
    const double g = payoff_.g0(y);
    d.w += wk * g;
    if (direct) {
      d.w_v += wk * payoff_.g0_prime(y);
      if (need_second) d.w_vv += wk * payoff_.g0_second(y);
    } else {
      // Gaussian integration by parts.
      d.w_v += wk * g * z / s;
      if (need_second) d.w_vv += wk * g * (z * z - 1.0) / (s * s);
    }
  }
  return d;
}

ValueDerivatives ContinuumValue::quadrature(double v, double t, bool need_second) const {
  const double s = spread(t);
  if (s == 0.0) {
    ValueDerivatives d;
    d.w = payoff_.g0(v);
    d.w_v = payoff_.g0_prime(v);
    if (need_second) d.w_vv = payoff_.g0_second(v);
    return d;
  }
  ValueDerivatives prev = quadrature_at_order(v, s, need_second, kBaseQuadratureOrder);
  for (int order = 2 * kBaseQuadratureOrder; order <= kMaxQuadratureOrder; order *= 2) {
    ValueDerivatives cur = quadrature_at_order(v, s, need_second, order);
    if (agree(cur, prev)) return cur;
    prev = cur;
  }
  // Profiles with singularities close to the real axis (log-sum-exp with a
  // small temperature against a wide spread) defeat Gauss-Hermite; fall back
  // to composite Gauss-Legendre on a truncated range.
  prev = composite_quadrature(v, s, need_second, kBasePanels);
  for (int panels = 2 * kBasePanels; panels <= kMaxPanels; panels *= 2) {
    ValueDerivatives cur = composite_quadrature(v, s, need_second, panels);
    if (agree(cur, prev)) return cur;
    prev = cur;
  }
  throw NumericError("Gaussian quadrature did not converge at v = " + std::to_string(v) +
                     ", t = " + std::to_string(t));
}

ValueDerivatives ContinuumValue::derivatives(double v, double t, bool need_second) const {
  check_time(t);
  if (need_second && !payoff_.smooth() && t > 1.0 - kTerminalGuard) {
    throw NumericError("w_vv of the non-smooth payoff '" + payoff_.name() +
                       "' is singular near t = 1 (t = " + std::to_string(t) + ")");
  }
  return payoff_.kind() == PayoffKind::Max ? closed_form_max(v, t, need_second)
                                           : quadrature(v, t, need_second);
}

double ContinuumValue::w_eval(double v, double t, int order) const {
  switch (order) {
    case 0:
      return derivatives(v, t, false).w;
    case 1:
      return derivatives(v, t, false).w_v;
    case 2:
      return derivatives(v, t, true).w_vv;
    default:
      throw PreconditionError("w_eval order must be 0, 1 or 2");
  }
}

double ContinuumValue::w_t(double v, double t) const { return -0.5 * sigma2_ * w_eval(v, t, 2); }

double ContinuumValue::u(const Regret& x, double t) const {
  if (t == 1.0) return payoff_(x);
  return x[1] + w_eval(x[0] - x[1], t, 0);
}

Regret ContinuumValue::gradient(const Regret& x, double t) const {
  const double wv = w_eval(x[0] - x[1], t, 1);
  return {wv, 1.0 - wv};
}

Matrix2 ContinuumValue::hessian(const Regret& x, double t) const {
  const double wvv = w_eval(x[0] - x[1], t, 2);
  return {{{wvv, -wvv}, {-wvv, wvv}}};
}

double ContinuumValue::u_t(const Regret& x, double t) const { return w_t(x[0] - x[1], t); }

}  // namespace regret_lab
