#pragma once

// Correctors built from the graph Poisson potential and the cycle-average
// linear programs they are certified against.
//
// Two sign conventions are in use and every result records which one:
//   Investor:  node cost h(x) - (b/2) f#(x),  f#(x) = H(x+) - H(x-)
//   General:   node cost h(x) + b f(x),       f(x)  = 1/2 sum_e b(e) grad H(e)
// They describe the same costs through f = -f#/2.

#include <cstddef>
#include <string_view>
#include <vector>

#include "regret_lab/digraph.hpp"
#include "regret_lab/graph_calculus.hpp"

namespace regret_lab {

enum class LpConvention { Investor, General };

std::string_view to_string(LpConvention c) noexcept;
LpConvention parse_convention(std::string_view name);

NodeFunction corrector_from_potential(const LabeledDigraph& g, const NodeFunction& H,
                                      LpConvention convention = LpConvention::Investor);

/// Per-edge cost of leaving e.from along e under `convention`.
double edge_cost(const LabeledDigraph& g, std::size_t edge_id, const NodeFunction& h,
                 const NodeFunction& corrector, LpConvention convention);

/// (1/|C|) * sum of edge costs around C. Throws DomainError if C is not a
/// closed walk in g.
double cycle_average(const LabeledDigraph& g, const Cycle& c, const NodeFunction& h,
                     const NodeFunction& corrector, LpConvention convention);

struct CycleRow {
  std::size_t id;
  std::size_t length;
  double average;
};

struct LPReport {
  LpConvention convention = LpConvention::Investor;
  double mean_h = 0.0;
  std::vector<CycleRow> cycle_rows;
  double M_investor = 0.0;  ///< max cycle average
  double M_market = 0.0;    ///< min cycle average
  double eulerian_average = 0.0;
  double tolerance = 0.0;
  bool indifferent = false;
};

inline constexpr double kIndifferenceTolerance = 1e-11;

/// Evaluates an arbitrary corrector over the given cycles. M_market and
/// M_investor bracket mean_h whenever `cycles` contains every simple cycle.
LPReport evaluate_lp(const LabeledDigraph& g, const NodeFunction& h, const NodeFunction& corrector,
                     LpConvention convention, const std::vector<Cycle>& cycles,
                     double tolerance = kIndifferenceTolerance);

/// Solves the Poisson equation for h, builds the corrector, and checks every
/// simple cycle average against mean(h).
LPReport verify_indifference(const LabeledDigraph& g, const NodeFunction& h,
                             std::size_t cap = kDefaultCycleCap,
                             LpConvention convention = LpConvention::Investor,
                             double tolerance = kIndifferenceTolerance);

}  // namespace regret_lab
