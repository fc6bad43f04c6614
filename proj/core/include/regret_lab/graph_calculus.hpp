#pragma once

// Discrete calculus on out-degree-2 labeled digraphs and the graph Poisson
// equation  laplacian(H) = h - mean(h).

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "regret_lab/digraph.hpp"

namespace regret_lab {

/// Real values indexed by node id.
class NodeFunction {
 public:
  NodeFunction() = default;
  explicit NodeFunction(std::size_t size, double fill = 0.0) : values_(size, fill) {}
  explicit NodeFunction(std::vector<double> values) : values_(std::move(values)) {}
  NodeFunction(std::initializer_list<double> values) : values_(values) {}

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t x) const { return values_[x]; }
  double& operator[](std::size_t x) { return values_[x]; }
  double at(std::size_t x) const;

  std::span<const double> values() const noexcept { return values_; }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  /// Copy with the arithmetic mean subtracted.
  NodeFunction centered() const;
  double max_abs() const noexcept;

  friend bool operator==(const NodeFunction&, const NodeFunction&) = default;

 private:
  std::vector<double> values_;
};

NodeFunction operator-(const NodeFunction& a, const NodeFunction& b);

/// grad v(e) = v(e.from) - v(e.to).
double grad(const LabeledDigraph& g, const NodeFunction& v, std::size_t edge_id);

/// Averaging Laplacian, positive convention: v(x) - (v(x+) + v(x-)) / 2.
double laplacian(const LabeledDigraph& g, const NodeFunction& v, std::size_t x);
NodeFunction laplacian(const LabeledDigraph& g, const NodeFunction& v);

/// Mean over nodes, summed in node order.
double mean(const NodeFunction& v);

enum class PoissonMethod { Automatic, Dense, Iterative };

struct PoissonOptions {
  PoissonMethod method = PoissonMethod::Automatic;
  /// Automatic picks Dense up to this many nodes.
  std::size_t dense_limit = std::size_t{1} << 10;
  double tolerance = 1e-12;
  std::size_t max_iterations = 2'000'000;
};

/// max_x |laplacian(H, x) - (h(x) - mean(h))|.
double poisson_residual(const LabeledDigraph& g, const NodeFunction& H, const NodeFunction& h);

/// The mean-zero solution of laplacian(H) = h - mean(h).
///
/// Requires an Eulerian graph; the right-hand side is centered internally so
/// any h is accepted. Throws NumericError when the max-norm residual exceeds
/// `options.tolerance`.
NodeFunction solve_poisson(const LabeledDigraph& g, const NodeFunction& h,
                           const PoissonOptions& options = {});

/// Averages of h over the de Bruijn tree below each node,
///   H(m) = sum_{l=0}^{d-1} 2^{-l} sum_{s in B^l} h(m|s),
/// computed level by level in O(d 2^d). Not mean-centered.
NodeFunction debruijn_representation(const NodeFunction& h, int depth);

}  // namespace regret_lab
