#include "regret_lab/corrector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "regret_lab/errors.hpp"
#include "regret_lab/parallel.hpp"

namespace regret_lab {

std::string_view to_string(LpConvention c) noexcept {
  return c == LpConvention::Investor ? "investor" : "general";
}

LpConvention parse_convention(std::string_view name) {
  if (name == "investor" || name == "investor-LP") return LpConvention::Investor;
  if (name == "general" || name == "general-LP") return LpConvention::General;
  throw PreconditionError("unknown LP convention '" + std::string(name) + "'");
}

NodeFunction corrector_from_potential(const LabeledDigraph& g, const NodeFunction& H,
                                      LpConvention convention) {
  if (H.size() != g.node_count()) throw DomainError("potential size does not match graph");
  NodeFunction out(g.node_count());
  for (std::size_t x = 0; x < g.node_count(); ++x) {
    if (convention == LpConvention::Investor) {
      out[x] = H[g.successor(x, Symbol::Plus)] - H[g.successor(x, Symbol::Minus)];
    } else {
      double s = 0.0;
      for (Symbol b : {Symbol::Plus, Symbol::Minus}) {
        s += to_real(b) * grad(g, H, LabeledDigraph::out_edge_id(x, b));
      }
      out[x] = 0.5 * s;
    }
  }
  return out;
}

double edge_cost(const LabeledDigraph& g, std::size_t edge_id, const NodeFunction& h,
                 const NodeFunction& corrector, LpConvention convention) {
  const Edge& e = g.edge(edge_id);
  const double b = to_real(e.label);
  return convention == LpConvention::Investor ? h.at(e.from) - 0.5 * b * corrector.at(e.from)
                                              : h.at(e.from) + b * corrector.at(e.from);
}

double cycle_average(const LabeledDigraph& g, const Cycle& c, const NodeFunction& h,
                     const NodeFunction& corrector, LpConvention convention) {
  if (!is_closed_walk(g, c)) throw DomainError("cycle is not a closed walk in the graph");
  double s = 0.0;
  for (std::size_t e : c.edges) s += edge_cost(g, e, h, corrector, convention);
  return s / static_cast<double>(c.length());
}

LPReport evaluate_lp(const LabeledDigraph& g, const NodeFunction& h, const NodeFunction& corrector,
                     LpConvention convention, const std::vector<Cycle>& cycles, double tolerance) {
  if (cycles.empty()) throw PreconditionError("no cycles to evaluate");
  LPReport report;
  report.convention = convention;
  report.tolerance = tolerance;
  report.mean_h = mean(h);
  report.cycle_rows.resize(cycles.size());
  parallel_for(cycles.size(), [&](std::size_t i) {
    report.cycle_rows[i] = {i, cycles[i].length(),
                            cycle_average(g, cycles[i], h, corrector, convention)};
  });
  report.M_investor = report.cycle_rows.front().average;
  report.M_market = report.cycle_rows.front().average;
  for (const CycleRow& row : report.cycle_rows) {
    report.M_investor = std::max(report.M_investor, row.average);
    report.M_market = std::min(report.M_market, row.average);
  }
  report.eulerian_average = cycle_average(g, eulerian_cycle(g), h, corrector, convention);
  report.indifferent = std::abs(report.M_investor - report.mean_h) <= tolerance &&
                       std::abs(report.M_market - report.mean_h) <= tolerance;
  return report;
}

LPReport verify_indifference(const LabeledDigraph& g, const NodeFunction& h, std::size_t cap,
                             LpConvention convention, double tolerance) {
  const NodeFunction H = solve_poisson(g, h);
  const NodeFunction corrector = corrector_from_potential(g, H, convention);
  return evaluate_lp(g, h, corrector, convention, simple_cycles(g, cap), tolerance);
}

}  // namespace regret_lab
