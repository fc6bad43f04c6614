#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "regret_lab/digraph.hpp"
#include "regret_lab/graph_calculus.hpp"

namespace regret_lab {

/// History-dependent expert predictions q : B^d -> [-mu, mu]^n.
class ExpertPanel {
 public:
  /// `q[m]` holds the n predictions at history id m; requires 2^depth rows.
  ExpertPanel(int depth, double mu, std::vector<std::vector<double>> q);

  /// q(m) = (mu, -mu) at every history.
  static ExpertPanel symmetric(int depth, double mu);
  /// Predictions drawn uniformly from [-mu, mu].
  static ExpertPanel random(int depth, int experts, double mu, std::uint64_t seed);

  int depth() const noexcept { return depth_; }
  int experts() const noexcept { return experts_; }
  double mu() const noexcept { return mu_; }
  std::size_t histories() const noexcept { return q_.size(); }

  std::span<const double> q(std::size_t m) const { return q_.at(m); }
  std::span<const double> q(const MarketState& m) const;

  /// r(m) = (q_1 - q_n, ..., q_{n-1} - q_n).
  std::vector<double> r(std::size_t m) const;

  /// 2^{-(d+1)} sum_m r(m) r(m)^T, row-major (n-1)x(n-1).
  std::vector<double> ellipticity_matrix() const;
  /// Smallest eigenvalue of ellipticity_matrix().
  double lambda() const;

  // Two-expert quantities.
  /// r(m)^2 as a node function on debruijn(depth). Requires n = 2.
  NodeFunction r_squared() const;
  /// sigma^2 = 2^{-d} sum_m r(m)^2, the diffusion coefficient of the reduced
  /// heat equation. Requires n = 2.
  double sigma2() const;

 private:
  int depth_;
  int experts_;
  double mu_;
  std::vector<std::vector<double>> q_;
};

}  // namespace regret_lab
