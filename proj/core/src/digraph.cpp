#include "regret_lab/digraph.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "regret_lab/errors.hpp"

namespace regret_lab {

Symbol symbol_from_int(int value) {
  if (value == 1) return Symbol::Plus;
  if (value == -1) return Symbol::Minus;
  throw PreconditionError("symbol must be +1 or -1, got " + std::to_string(value));
}

// ---------------------------------------------------------------------------
// MarketState

namespace {

std::uint32_t depth_mask(int depth) {
  return depth >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << depth) - 1;
}

}  // namespace

MarketState::MarketState(int depth, std::uint32_t bits) : depth_(depth), bits_(bits) {
  if (depth < 1 || depth > kMaxDebruijnDepth) {
    throw SizeError("history depth must lie in [1, " + std::to_string(kMaxDebruijnDepth) +
                    "], got " + std::to_string(depth));
  }
  if ((bits & ~depth_mask(depth)) != 0) {
    throw PreconditionError("history bits exceed depth " + std::to_string(depth));
  }
}

MarketState MarketState::all(int depth, Symbol b) {
  return {depth, b == Symbol::Plus ? depth_mask(depth) : 0u};
}

MarketState MarketState::parse(std::string_view word) {
  std::uint32_t bits = 0;
  for (char c : word) {
    bits <<= 1;
    if (c == '1' || c == '+') {
      bits |= 1;
    } else if (c != '0' && c != '-') {
      throw PreconditionError("invalid history character '" + std::string(1, c) + "' in \"" +
                              std::string(word) + "\"");
    }
  }
  return {static_cast<int>(word.size()), bits};
}

MarketState MarketState::from_symbols(const std::vector<Symbol>& symbols) {
  std::uint32_t bits = 0;
  for (Symbol b : symbols) bits = (bits << 1) | (b == Symbol::Plus ? 1u : 0u);
  return {static_cast<int>(symbols.size()), bits};
}

Symbol MarketState::at(int i) const {
  if (i < 0 || i >= depth_) throw DomainError("history index out of range");
  return ((bits_ >> (depth_ - 1 - i)) & 1u) ? Symbol::Plus : Symbol::Minus;
}

std::vector<Symbol> MarketState::symbols() const {
  std::vector<Symbol> out;
  out.reserve(static_cast<std::size_t>(depth_));
  for (int i = 0; i < depth_; ++i) out.push_back(at(i));
  return out;
}

MarketState MarketState::concat(Symbol b) const noexcept {
  MarketState next = *this;
  next.bits_ = ((bits_ << 1) | (b == Symbol::Plus ? 1u : 0u)) & depth_mask(depth_);
  return next;
}

MarketState MarketState::concat(const std::vector<Symbol>& word) const noexcept {
  MarketState m = *this;
  for (Symbol b : word) m = m.concat(b);
  return m;
}

std::string MarketState::to_string() const {
  std::string s;
  s.reserve(static_cast<std::size_t>(depth_));
  for (int i = 0; i < depth_; ++i) s.push_back(at(i) == Symbol::Plus ? '1' : '0');
  return s;
}

// ---------------------------------------------------------------------------
// LabeledDigraph

LabeledDigraph LabeledDigraph::from_edges(std::size_t node_count, const std::vector<Edge>& edges) {
  if (node_count == 0) throw StructuralError("graph has no nodes");
  if (edges.size() != 2 * node_count) {
    throw StructuralError("expected exactly two outgoing edges per node (" +
                          std::to_string(2 * node_count) + " edges), got " +
                          std::to_string(edges.size()));
  }
  std::vector<Edge> ordered(edges.size(), Edge{0, 0, Symbol::Plus});
  std::vector<int> seen(2 * node_count, 0);
  for (const Edge& e : edges) {
    if (e.from >= node_count || e.to >= node_count) {
      throw StructuralError("edge " + std::to_string(e.from) + "->" + std::to_string(e.to) +
                            " references a node outside [0, " + std::to_string(node_count) + ")");
    }
    const std::size_t slot = out_edge_id(e.from, e.label);
    if (seen[slot]++) {
      throw StructuralError("node " + std::to_string(e.from) + " has two outgoing edges labeled " +
                            std::to_string(to_int(e.label)));
    }
    ordered[slot] = e;
  }
  // Every slot filled follows from the counts above, but name the node if not.
  for (std::size_t slot = 0; slot < seen.size(); ++slot) {
    if (!seen[slot]) {
      throw StructuralError("node " + std::to_string(slot / 2) + " lacks an outgoing edge labeled " +
                            (slot % 2 == 0 ? "+1" : "-1"));
    }
  }
  return LabeledDigraph(node_count, std::move(ordered), std::nullopt);
}

const Edge& LabeledDigraph::edge(std::size_t e) const {
  if (e >= edges_.size()) throw DomainError("edge id " + std::to_string(e) + " not in graph");
  return edges_[e];
}

std::size_t LabeledDigraph::successor(std::size_t node, Symbol b) const {
  if (node >= node_count_) throw DomainError("node " + std::to_string(node) + " not in graph");
  return edges_[out_edge_id(node, b)].to;
}

std::vector<std::size_t> LabeledDigraph::in_degrees() const {
  std::vector<std::size_t> deg(node_count_, 0);
  for (const Edge& e : edges_) ++deg[e.to];
  return deg;
}

namespace {

// Nodes reachable from `start`, following edges forward or backward.
std::vector<char> reach(const LabeledDigraph& g, std::size_t start, bool forward) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<std::size_t>> adj;
  if (!forward) {
    adj.resize(n);
    for (const Edge& e : g.edges()) adj[e.to].push_back(e.from);
  }
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    auto visit = [&](std::size_t w) {
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    };
    if (forward) {
      visit(g.successor(v, Symbol::Plus));
      visit(g.successor(v, Symbol::Minus));
    } else {
      for (std::size_t w : adj[v]) visit(w);
    }
  }
  return seen;
}

// Throws StructuralError describing the first Euler-condition violation.
void require_eulerian(const LabeledDigraph& g) {
  const auto in = g.in_degrees();
  for (std::size_t x = 0; x < in.size(); ++x) {
    if (in[x] != 2) {
      throw StructuralError("graph is not Eulerian: node " + std::to_string(x) + " has in-degree " +
                            std::to_string(in[x]) + " but out-degree 2");
    }
  }
  const auto fwd = reach(g, 0, true);
  const auto bwd = reach(g, 0, false);
  for (std::size_t x = 0; x < in.size(); ++x) {
    if (!fwd[x] || !bwd[x]) {
      throw StructuralError("graph is not Eulerian: not strongly connected (node " +
                            std::to_string(x) + (fwd[x] ? " cannot reach" : " is unreachable from") +
                            " node 0)");
    }
  }
}

}  // namespace

bool LabeledDigraph::strongly_connected() const {
  const auto fwd = reach(*this, 0, true);
  const auto bwd = reach(*this, 0, false);
  return std::all_of(fwd.begin(), fwd.end(), [](char c) { return c != 0; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](char c) { return c != 0; });
}

bool LabeledDigraph::is_eulerian() const {
  try {
    require_eulerian(*this);
    return true;
  } catch (const StructuralError&) {
    return false;
  }
}

std::vector<std::size_t> Cycle::nodes(const LabeledDigraph& g) const {
  std::vector<std::size_t> out;
  out.reserve(edges.size());
  for (std::size_t e : edges) out.push_back(g.edge(e).from);
  return out;
}

bool is_closed_walk(const LabeledDigraph& g, const Cycle& c) {
  if (c.edges.empty()) return false;
  for (std::size_t k = 0; k < c.edges.size(); ++k) {
    if (c.edges[k] >= g.edge_count()) return false;
    const Edge& cur = g.edge(c.edges[k]);
    const Edge& nxt = g.edge(c.edges[(k + 1) % c.edges.size()]);
    if (cur.to != nxt.from) return false;
  }
  return true;
}

LabeledDigraph debruijn(int depth, int max_depth) {
  if (depth < 1 || depth > max_depth || depth > kMaxDebruijnDepth) {
    throw SizeError("de Bruijn depth must lie in [1, " +
                    std::to_string(std::min(max_depth, kMaxDebruijnDepth)) + "], got " +
                    std::to_string(depth));
  }
  const std::size_t n = std::size_t{1} << depth;
  std::vector<Edge> edges;
  edges.reserve(2 * n);
  for (std::size_t x = 0; x < n; ++x) {
    const MarketState m(depth, static_cast<std::uint32_t>(x));
    edges.push_back({x, m.concat(Symbol::Plus).id(), Symbol::Plus});
    edges.push_back({x, m.concat(Symbol::Minus).id(), Symbol::Minus});
  }
  return LabeledDigraph(n, std::move(edges), depth);
}

Cycle eulerian_cycle(const LabeledDigraph& g) {
  require_eulerian(g);
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<int> next_out(g.node_count(), 0);
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, kNone}};
  std::vector<std::size_t> circuit;
  circuit.reserve(g.edge_count());
  while (!stack.empty()) {
    const auto [v, via] = stack.back();
    if (next_out[v] < 2) {
      const std::size_t e = 2 * v + static_cast<std::size_t>(next_out[v]++);
      stack.emplace_back(g.edge(e).to, e);
    } else {
      stack.pop_back();
      if (via != kNone) circuit.push_back(via);
    }
  }
  std::reverse(circuit.begin(), circuit.end());
  if (circuit.size() != g.edge_count()) {
    throw StructuralError("Eulerian walk covered " + std::to_string(circuit.size()) + " of " +
                          std::to_string(g.edge_count()) + " edges");
  }
  return Cycle{std::move(circuit)};
}

std::vector<Cycle> simple_cycles(const LabeledDigraph& g, std::size_t cap,
                                 std::size_t node_bound) {
  const std::size_t n = g.node_count();
  if (n > node_bound) {
    throw SizeError("simple cycle enumeration limited to " + std::to_string(node_bound) +
                    " nodes, graph has " + std::to_string(n));
  }
  std::vector<Cycle> out;
  std::vector<char> on_path(n, 0);
  std::vector<std::size_t> path;  // edge ids
  // Per-frame cursor into the two outgoing edges of the frame's node.
  std::vector<std::pair<std::size_t, int>> frames;

  for (std::size_t start = 0; start < n; ++start) {
    frames.assign(1, {start, 0});
    on_path[start] = 1;
    while (!frames.empty()) {
      auto& [v, cursor] = frames.back();
      if (cursor == 2) {
        on_path[v] = 0;
        frames.pop_back();
        if (!path.empty()) path.pop_back();
        continue;
      }
      const std::size_t e = 2 * v + static_cast<std::size_t>(cursor++);
      const std::size_t w = g.edge(e).to;
      if (w == start) {
        path.push_back(e);
        out.push_back(Cycle{path});
        path.pop_back();
        if (out.size() > cap) {
          throw CapacityError("simple cycle count exceeded cap " + std::to_string(cap),
                              out.size());
        }
      } else if (w > start && !on_path[w]) {
        path.push_back(e);
        on_path[w] = 1;
        frames.emplace_back(w, 0);
      }
    }
  }
  return out;
}

namespace {

// Unbiased draw in [0, bound) from a 64-bit engine; avoids the
// implementation-defined std::uniform_int_distribution so that seeds
// reproduce across standard libraries.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

LabeledDigraph random_eulerian_outdeg2(std::size_t node_count, std::uint64_t seed,
                                       int max_attempts) {
  if (node_count < 2) {
    throw PreconditionError("random Eulerian graph needs at least 2 nodes, got " +
                            std::to_string(node_count));
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> in_stubs(2 * node_count);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    for (std::size_t i = 0; i < in_stubs.size(); ++i) in_stubs[i] = i / 2;
    for (std::size_t i = in_stubs.size() - 1; i > 0; --i) {
      std::swap(in_stubs[i], in_stubs[draw_below(rng, i + 1)]);
    }
    std::vector<Edge> edges;
    edges.reserve(in_stubs.size());
    for (std::size_t x = 0; x < node_count; ++x) {
      edges.push_back({x, in_stubs[2 * x], Symbol::Plus});
      edges.push_back({x, in_stubs[2 * x + 1], Symbol::Minus});
    }
    auto g = LabeledDigraph::from_edges(node_count, edges);
    if (g.strongly_connected()) return g;
  }
  throw GenerationError("no strongly connected pairing found in " + std::to_string(max_attempts) +
                        " attempts");
}

}  // namespace regret_lab
