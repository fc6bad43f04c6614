#pragma once

// Market histories, de Bruijn graphs and general labeled digraphs in which
// every node has exactly two outgoing edges, one labeled +1 and one -1.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace regret_lab {

/// A market move. The underlying values are the real +1 / -1.
enum class Symbol : int { Minus = -1, Plus = 1 };

constexpr int to_int(Symbol b) noexcept { return static_cast<int>(b); }
constexpr double to_real(Symbol b) noexcept { return static_cast<double>(to_int(b)); }
constexpr Symbol flip(Symbol b) noexcept { return b == Symbol::Plus ? Symbol::Minus : Symbol::Plus; }
Symbol symbol_from_int(int value);

inline constexpr int kMaxDebruijnDepth = 20;

/// The last `depth` market moves, oldest first.
///
/// Stored as a depth-bit integer: the most significant bit is the oldest move,
/// bit value 1 encodes +1. The integer doubles as the node id in debruijn(depth).
class MarketState {
 public:
  MarketState(int depth, std::uint32_t bits);

  static MarketState all(int depth, Symbol b);
  /// Parses "0"/"1" or "-"/"+" characters, oldest move first.
  static MarketState parse(std::string_view word);
  static MarketState from_symbols(const std::vector<Symbol>& symbols);

  int depth() const noexcept { return depth_; }
  std::uint32_t bits() const noexcept { return bits_; }
  std::size_t id() const noexcept { return bits_; }

  /// i-th move, 0-based, oldest first.
  Symbol at(int i) const;
  std::vector<Symbol> symbols() const;

  /// m|b: drop the oldest move and append b.
  MarketState concat(Symbol b) const noexcept;
  /// m|s for a word s applied left to right.
  MarketState concat(const std::vector<Symbol>& word) const noexcept;

  /// "0"/"1" string, oldest move first.
  std::string to_string() const;

  friend bool operator==(const MarketState&, const MarketState&) = default;

 private:
  int depth_;
  std::uint32_t bits_;
};

struct Edge {
  std::size_t from;
  std::size_t to;
  Symbol label;
};

/// Directed multigraph on nodes 0..n-1 where each node x owns exactly two
/// outgoing edges: edge 2x carries label +1 and edge 2x+1 carries label -1.
/// Self-loops and parallel edges are allowed.
class LabeledDigraph {
 public:
  /// Builds from an arbitrary edge list; validates the out-degree-2 and
  /// label-balance invariants and reorders edges canonically.
  static LabeledDigraph from_edges(std::size_t node_count, const std::vector<Edge>& edges);

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t e) const;

  static constexpr std::size_t out_edge_id(std::size_t node, Symbol b) noexcept {
    return 2 * node + (b == Symbol::Plus ? 0 : 1);
  }
  std::size_t successor(std::size_t node, Symbol b) const;
  std::vector<std::size_t> in_degrees() const;

  /// Depth when the graph was produced by debruijn(); nullopt otherwise.
  std::optional<int> debruijn_depth() const noexcept { return debruijn_depth_; }

  bool strongly_connected() const;
  bool is_eulerian() const;

  friend LabeledDigraph debruijn(int depth, int max_depth);

 private:
  LabeledDigraph(std::size_t n, std::vector<Edge> edges, std::optional<int> depth)
      : node_count_(n), edges_(std::move(edges)), debruijn_depth_(depth) {}

  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
  std::optional<int> debruijn_depth_;
};

/// A closed walk given as edge ids of its graph, e^k.to == e^{k+1}.from.
struct Cycle {
  std::vector<std::size_t> edges;

  std::size_t length() const noexcept { return edges.size(); }
  std::vector<std::size_t> nodes(const LabeledDigraph& g) const;

  friend bool operator==(const Cycle&, const Cycle&) = default;
};

LabeledDigraph debruijn(int depth, int max_depth = kMaxDebruijnDepth);

/// Hierholzer's algorithm started at node 0, following the +1 edge first.
/// Throws StructuralError naming the offending node when the graph is not
/// Eulerian.
Cycle eulerian_cycle(const LabeledDigraph& g);

inline constexpr std::size_t kDefaultCycleNodeBound = std::size_t{1} << 12;
inline constexpr std::size_t kDefaultCycleCap = 2'000'000;

/// Every simple cycle exactly once, rotated to start at its smallest node.
/// Cycles are ordered by start node, then by the edge choice sequence (+1
/// before -1). Throws CapacityError once more than `cap` cycles are found.
std::vector<Cycle> simple_cycles(const LabeledDigraph& g, std::size_t cap = kDefaultCycleCap,
                                 std::size_t node_bound = kDefaultCycleNodeBound);

/// Strongly connected random digraph with in- and out-degree 2 everywhere,
/// built by pairing out-stubs with in-stubs and rejecting disconnected draws.
LabeledDigraph random_eulerian_outdeg2(std::size_t node_count, std::uint64_t seed,
                                       int max_attempts = 10'000);

/// Checks that `c` is a closed walk in `g`.
bool is_closed_walk(const LabeledDigraph& g, const Cycle& c);

}  // namespace regret_lab
