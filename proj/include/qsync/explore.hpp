#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qsync/channels.hpp"

namespace qsync {

struct DepthTooLargeError : Error {
  explicit DepthTooLargeError(const std::string& detail)
      : Error("DepthTooLarge", detail) {}
};

struct EmptyGraphError : Error {
  explicit EmptyGraphError(const std::string& detail)
      : Error("EmptyGraph", detail) {}
};

/// Default dedup grid. Rotation entries are irrational for n >= 2, so exact
/// dedup is out; grid keys plus a trace-distance merge radius of 10*grid
/// prevent node splitting at grid-cell boundaries.
inline constexpr double kExploreGrid = 1e-9;

/// Real and imaginary parts of the 9 entries, each snapped to the grid and
/// scaled to integers. Equality is exact integer equality.
struct CanonicalKey {
  std::array<std::int64_t, 18> q{};
  bool operator==(const CanonicalKey&) const = default;

  /// True when every coordinate differs by at most one grid cell; such keys
  /// may describe the same state straddling a cell boundary.
  bool adjacent(const CanonicalKey& other) const;
};

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& k) const;
};

/// Grid must lie in [1e-12, 1e-6].
CanonicalKey canonical_key(const DensityMatrix& rho, double grid);

/// Reachable fragment of the transition graph rooted at |e_1><e_1|.
struct StateGraph {
  struct Node {
    int id;
    DensityMatrix state;
    CanonicalKey key;
    int depth;  // BFS distance from node 0
  };
  struct Edge {
    int src;
    Letter letter;
    int dst;
  };

  std::vector<Node> nodes;
  std::vector<Edge> edges;  // discovery order: src ascending, A before B
  ChannelFamilyParam param;
  int max_depth;
  double grid;

  /// Every node has an outgoing edge for both letters.
  bool is_closed() const;
};

/// Breadth-first exploration from |e_1><e_1| truncated at max_depth (<= 20;
/// the graph is infinite for n >= 2). A candidate merges into an existing
/// node when its key matches exactly, or when the keys are grid-adjacent and
/// the trace distance is at most 10*grid. Node ids follow discovery order
/// with A expanded before B, so the result is deterministic.
StateGraph explore(ChannelFamilyParam param, int max_depth,
                   double grid = kExploreGrid);

struct DotOptions {
  bool show_self_loops = true;
  /// When a node's entries are all near-integer after scaling by a small
  /// integer, label it with the scaled integer matrix instead of decimals.
  bool rescale_integers = false;
};

/// Graphviz text; byte-deterministic for a given graph. Node labels carry
/// the node id and the matrix at 6 significant digits. Throws
/// EmptyGraphError for a graph with no nodes.
std::string export_dot(const StateGraph& g, DotOptions options = {});

/// Fixed-schema JSON: {"n", "max_depth", "grid", "nodes": [{"id", "depth",
/// "matrix"}], "edges": [{"src", "letter", "dst"}]}, with matrices as
/// [[re, im] x3] x3 and floats at 17 significant digits.
std::string export_json(const StateGraph& g);

}  // namespace qsync
