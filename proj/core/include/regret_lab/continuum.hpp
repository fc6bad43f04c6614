#pragma once

// Continuum value of the two-expert game for payoffs with the translation
// property g(x + s*1) = g(x) + s.
//
// Writing g(x) = x2 + g0(x1 - x2), the value is u(x, t) = x2 + w(x1 - x2, t)
// where w solves the backward heat equation
//     w_t + (sigma^2 / 2) w_vv = 0,   w(v, 1) = g0(v),
// i.e. w(v, t) = E[g0(v + s Z)] with s = sigma sqrt(1 - t), Z ~ N(0, 1).

#include <array>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace regret_lab {

using Regret = std::array<double, 2>;
using Matrix2 = std::array<std::array<double, 2>, 2>;

enum class PayoffKind { Max, LogSumExp, Profile };

/// Payoff g : R^n -> R with the translation property, so the lower bound
/// theta on grad g . 1 equals 1.
class Payoff {
 public:
  using Profile = std::function<double(double)>;

  /// g(x) = max_i x_i.
  static Payoff max();
  /// g(x) = kappa log sum_i exp(x_i / kappa).
  static Payoff log_sum_exp(double kappa = 1.0);
  /// Two-expert payoff g(x) = x2 + g0(x1 - x2). Derivatives are optional;
  /// when absent, value derivatives fall back to Gaussian integration by parts.
  static Payoff profile(std::string name, Profile g0, bool smooth, Profile g0_prime = {},
                        Profile g0_second = {});

  /// Parses "max", "lse" or "lse:<kappa>".
  static Payoff parse(std::string_view spec);

  PayoffKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  bool smooth() const noexcept { return smooth_; }
  static constexpr bool translation_invariant() noexcept { return true; }
  static constexpr double theta() noexcept { return 1.0; }
  double kappa() const noexcept { return kappa_; }

  double operator()(std::span<const double> x) const;
  double operator()(const Regret& x) const { return (*this)(std::span<const double>(x)); }

  /// g0(v) = g(v, 0) and its first two derivatives where they exist.
  double g0(double v) const;
  bool has_profile_derivatives() const noexcept;
  double g0_prime(double v) const;
  double g0_second(double v) const;

 private:
  PayoffKind kind_ = PayoffKind::Max;
  std::string name_;
  bool smooth_ = false;
  double kappa_ = 1.0;
  Profile g0_, g0_prime_, g0_second_;
};

/// Normal density and distribution function.
double normal_pdf(double z) noexcept;
double normal_cdf(double z) noexcept;

/// Gauss-Hermite rule for weight exp(-x^2), computed once per order.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussHermiteRule& gauss_hermite(int order);

struct ValueDerivatives {
  double w = 0.0;
  double w_v = 0.0;
  double w_vv = 0.0;
};

class ContinuumValue {
 public:
  /// Refuse w_vv for non-smooth payoffs closer than this to t = 1.
  static constexpr double kTerminalGuard = 1e-6;
  static constexpr int kBaseQuadratureOrder = 64;
  static constexpr int kMaxQuadratureOrder = 1024;
  static constexpr double kQuadratureTolerance = 1e-10;
  /// Composite Gauss-Legendre fallback on z in [-kTruncation, kTruncation].
  static constexpr int kBasePanels = 32;
  static constexpr int kMaxPanels = 4096;
  static constexpr double kTruncation = 12.0;

  ContinuumValue(Payoff payoff, double sigma2);

  const Payoff& payoff() const noexcept { return payoff_; }
  double sigma2() const noexcept { return sigma2_; }
  double sigma() const noexcept { return sigma_; }
  /// Standard deviation of the remaining diffusion, sigma sqrt(1 - t).
  double spread(double t) const;

  /// order 0, 1, 2 -> w, w_v, w_vv.
  double w_eval(double v, double t, int order) const;
  ValueDerivatives derivatives(double v, double t, bool need_second = true) const;
  /// w_t = -(sigma^2 / 2) w_vv.
  double w_t(double v, double t) const;

  double u(const Regret& x, double t) const;
  Regret gradient(const Regret& x, double t) const;
  Matrix2 hessian(const Regret& x, double t) const;
  double u_t(const Regret& x, double t) const;

 private:
  void check_time(double t) const;
  ValueDerivatives closed_form_max(double v, double t, bool need_second) const;
  ValueDerivatives quadrature(double v, double t, bool need_second) const;
  ValueDerivatives quadrature_at_order(double v, double s, bool need_second, int order) const;
  ValueDerivatives composite_quadrature(double v, double s, bool need_second, int panels) const;

  Payoff payoff_;
  double sigma2_;
  double sigma_;
};

}  // namespace regret_lab
