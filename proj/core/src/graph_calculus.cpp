#include "regret_lab/graph_calculus.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "regret_lab/errors.hpp"

namespace regret_lab {

double NodeFunction::at(std::size_t x) const {
  if (x >= values_.size()) throw DomainError("node " + std::to_string(x) + " outside function");
  return values_[x];
}

NodeFunction NodeFunction::centered() const {
  NodeFunction out = *this;
  const double c = mean(*this);
  for (double& v : out.values_) v -= c;
  return out;
}

double NodeFunction::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

NodeFunction operator-(const NodeFunction& a, const NodeFunction& b) {
  if (a.size() != b.size()) throw DomainError("node function sizes differ");
  NodeFunction out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

namespace {

void require_size(const LabeledDigraph& g, const NodeFunction& v) {
  if (v.size() != g.node_count()) {
    throw DomainError("node function has " + std::to_string(v.size()) + " values, graph has " +
                      std::to_string(g.node_count()) + " nodes");
  }
}

}  // namespace

double grad(const LabeledDigraph& g, const NodeFunction& v, std::size_t edge_id) {
  require_size(g, v);
  const Edge& e = g.edge(edge_id);
  return v[e.from] - v[e.to];
}

double laplacian(const LabeledDigraph& g, const NodeFunction& v, std::size_t x) {
  require_size(g, v);
  if (x >= g.node_count()) throw DomainError("node " + std::to_string(x) + " not in graph");
  return 0.5 * (grad(g, v, LabeledDigraph::out_edge_id(x, Symbol::Plus)) +
                grad(g, v, LabeledDigraph::out_edge_id(x, Symbol::Minus)));
}

NodeFunction laplacian(const LabeledDigraph& g, const NodeFunction& v) {
  NodeFunction out(g.node_count());
  for (std::size_t x = 0; x < g.node_count(); ++x) out[x] = laplacian(g, v, x);
  return out;
}

double mean(const NodeFunction& v) {
  if (v.size() == 0) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double poisson_residual(const LabeledDigraph& g, const NodeFunction& H, const NodeFunction& h) {
  require_size(g, H);
  require_size(g, h);
  const double hbar = mean(h);
  double r = 0.0;
  for (std::size_t x = 0; x < g.node_count(); ++x) {
    r = std::max(r, std::abs(laplacian(g, H, x) - (h[x] - hbar)));
  }
  return r;
}

namespace {

// (L + J/n) H = c is nonsingular on an Eulerian graph: the constants span both
// the kernel and the left kernel of L. With mean(c) = 0 its solution has mean
// zero and solves L H = c.
NodeFunction solve_dense(const LabeledDigraph& g, const NodeFunction& rhs) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  const double inv_n = 1.0 / static_cast<double>(n);
  Eigen::MatrixXd A = Eigen::MatrixXd::Constant(n, n, inv_n);
  for (Eigen::Index x = 0; x < n; ++x) {
    A(x, x) += 1.0;
    for (Symbol b : {Symbol::Plus, Symbol::Minus}) {
      A(x, static_cast<Eigen::Index>(g.successor(static_cast<std::size_t>(x), b))) -= 0.5;
    }
  }
  Eigen::VectorXd c(n);
  for (Eigen::Index x = 0; x < n; ++x) c(x) = rhs[static_cast<std::size_t>(x)];

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  Eigen::VectorXd H = lu.solve(c);
  // Two rounds of iterative refinement.
  for (int round = 0; round < 2; ++round) H += lu.solve(c - A * H);
  return NodeFunction(std::vector<double>(H.data(), H.data() + n));
}

// Lazy fixed point H <- (H + c + P H) / 2 with P the successor average. The
// mean of H is preserved and the lazy walk is aperiodic, so the iteration
// contracts on the mean-zero subspace of a strongly connected graph.
NodeFunction solve_iterative(const LabeledDigraph& g, const NodeFunction& rhs,
                             const PoissonOptions& options) {
  const std::size_t n = g.node_count();
  NodeFunction H(n), next(n);
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    double change = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      const double avg = 0.5 * (H[g.successor(x, Symbol::Plus)] + H[g.successor(x, Symbol::Minus)]);
      next[x] = 0.5 * (H[x] + rhs[x] + avg);
      change = std::max(change, std::abs(next[x] - H[x]));
    }
    std::swap(H, next);
    // |L H - c| = 2 |H_next - H| for this update, so stop well below tolerance.
    if (2.0 * change <= 0.05 * options.tolerance) break;
  }
  return H.centered();
}

}  // namespace

NodeFunction solve_poisson(const LabeledDigraph& g, const NodeFunction& h,
                           const PoissonOptions& options) {
  require_size(g, h);
  if (!g.is_eulerian()) {
    // Re-derive the precise violation for the message.
    eulerian_cycle(g);
  }
  const NodeFunction rhs = h.centered();
  const bool dense = options.method == PoissonMethod::Dense ||
                     (options.method == PoissonMethod::Automatic &&
                      g.node_count() <= options.dense_limit);
  NodeFunction H = dense ? solve_dense(g, rhs) : solve_iterative(g, rhs, options);
  H = H.centered();

  const double residual = poisson_residual(g, H, h);
  if (!std::isfinite(residual) || residual > options.tolerance) {
    throw NumericError("graph Poisson residual " + std::to_string(residual) +
                       " exceeds tolerance " + std::to_string(options.tolerance));
  }
  return H;
}

NodeFunction debruijn_representation(const NodeFunction& h, int depth) {
  const LabeledDigraph g = debruijn(depth);
  require_size(g, h);
  NodeFunction level = h;  // level l holds 2^{-l} sum_{s in B^l} h(m|s)
  NodeFunction H = h;
  NodeFunction next(h.size());
  for (int l = 1; l < depth; ++l) {
    for (std::size_t x = 0; x < h.size(); ++x) {
      next[x] = 0.5 * (level[g.successor(x, Symbol::Plus)] + level[g.successor(x, Symbol::Minus)]);
    }
    std::swap(level, next);
    for (std::size_t x = 0; x < h.size(); ++x) H[x] += level[x];
  }
  return H;
}

}  // namespace regret_lab
