#include "qsync/explore.hpp"

#include <cmath>
#include <cstdlib>
#include <unordered_map>

#include "qsync/textfmt.hpp"

namespace qsync {

bool CanonicalKey::adjacent(const CanonicalKey& other) const {
  for (int i = 0; i < 18; ++i) {
    const std::int64_t d = q[i] - other.q[i];
    if (d > 1 || d < -1) return false;
  }
  return true;
}

std::size_t CanonicalKeyHash::operator()(const CanonicalKey& k) const {
  // FNV-1a over the coordinate words.
  std::uint64_t h = 1469598103934665603ull;
  for (std::int64_t v : k.q) {
    auto u = static_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (u >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return static_cast<std::size_t>(h);
}

CanonicalKey canonical_key(const DensityMatrix& rho, double grid) {
  if (!(grid >= 1e-12) || !(grid <= 1e-6)) {
    throw std::invalid_argument("canonical_key: grid must be in [1e-12, 1e-6]");
  }
  CanonicalKey key;
  int k = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Complex z = rho.mat()(i, j);
      key.q[k++] = std::llround(z.real() / grid);
      key.q[k++] = std::llround(z.imag() / grid);
    }
  }
  return key;
}

bool StateGraph::is_closed() const {
  std::vector<int> out_count(nodes.size(), 0);
  for (const Edge& e : edges) ++out_count[static_cast<std::size_t>(e.src)];
  for (int c : out_count)
    if (c != 2) return false;
  return true;
}

StateGraph explore(ChannelFamilyParam param, int max_depth, double grid) {
  if (max_depth < 0 || max_depth > 20) {
    throw DepthTooLargeError("explore: max_depth must be in [0, 20], got " +
                             std::to_string(max_depth));
  }
  StateGraph g{{}, {}, param, max_depth, grid};
  const ChannelPair channels(param);
  const double merge_radius = 10.0 * grid;

  std::unordered_map<CanonicalKey, int, CanonicalKeyHash> by_key;

  auto find_or_insert = [&](const DensityMatrix& state, int depth) -> int {
    const CanonicalKey key = canonical_key(state, grid);
    if (auto it = by_key.find(key); it != by_key.end()) return it->second;
    // Same state may straddle a grid-cell boundary; merge with any
    // key-adjacent node within the trace-distance radius.
    for (const StateGraph::Node& node : g.nodes) {
      if (key.adjacent(node.key) &&
          trace_distance(state, node.state) <= merge_radius) {
        return node.id;
      }
    }
    const int id = static_cast<int>(g.nodes.size());
    g.nodes.push_back({id, state, key, depth});
    by_key.emplace(key, id);
    return id;
  };

  find_or_insert(DensityMatrix::basis_projector(0), 0);
  // nodes grows while we walk it; index loop doubles as the BFS queue
  for (std::size_t cursor = 0; cursor < g.nodes.size(); ++cursor) {
    const int depth = g.nodes[cursor].depth;
    if (depth >= max_depth) continue;
    const int src = g.nodes[cursor].id;
    for (Letter letter : {Letter::A, Letter::B}) {
      const DensityMatrix next =
          apply(channels.letter(letter), g.nodes[cursor].state);
      const int dst = find_or_insert(next, depth + 1);
      g.edges.push_back({src, letter, dst});
    }
  }
  return g;
}

namespace {

// Smallest integer s in [1, 64] with s*M entrywise within 1e-6 of integers,
// or 0 when none exists.
int integer_rescale(const Mat3& m) {
  for (int s = 1; s <= 64; ++s) {
    bool ok = true;
    for (int i = 0; i < 3 && ok; ++i) {
      for (int j = 0; j < 3 && ok; ++j) {
        const Complex z = m(i, j) * static_cast<double>(s);
        if (std::abs(z.real() - std::llround(z.real())) > 1e-6 ||
            std::abs(z.imag() - std::llround(z.imag())) > 1e-6) {
          ok = false;
        }
      }
    }
    if (ok) return s;
  }
  return 0;
}

std::string matrix_label(const Mat3& m, bool rescale) {
  if (rescale) {
    if (const int s = integer_rescale(m); s != 0) {
      std::string out;
      for (int i = 0; i < 3; ++i) {
        out += (i == 0) ? "[" : "\\n[";
        for (int j = 0; j < 3; ++j) {
          if (j > 0) out += " ";
          const Complex z = m(i, j) * static_cast<double>(s);
          out += std::to_string(std::llround(z.real()));
          if (std::llround(z.imag()) != 0) {
            out += "+" + std::to_string(std::llround(z.imag())) + "i";
          }
        }
        out += "]";
      }
      if (s != 1) out += "\\n(x 1/" + std::to_string(s) + ")";
      return out;
    }
  }
  std::string out;
  for (int i = 0; i < 3; ++i) {
    out += (i == 0) ? "[" : "\\n[";
    for (int j = 0; j < 3; ++j) {
      if (j > 0) out += " ";
      out += fmt_complex6(m(i, j));
    }
    out += "]";
  }
  return out;
}

}  // namespace

std::string export_dot(const StateGraph& g, DotOptions options) {
  if (g.nodes.empty()) throw EmptyGraphError("export_dot: graph has no nodes");
  std::string out;
  out += "digraph reachable_n" + std::to_string(g.param.n()) + " {\n";
  out += "  rankdir=LR;\n";
  out += "  node [shape=box, fontname=\"monospace\"];\n";
  for (const StateGraph::Node& node : g.nodes) {
    out += "  s" + std::to_string(node.id) + " [label=\"" +
           std::to_string(node.id) + "\\n" +
           matrix_label(node.state.mat(), options.rescale_integers) + "\"];\n";
  }
  for (const StateGraph::Edge& e : g.edges) {
    if (!options.show_self_loops && e.src == e.dst) continue;
    out += "  s" + std::to_string(e.src) + " -> s" + std::to_string(e.dst) +
           " [label=\"" + to_char(e.letter) + "\"];\n";
  }
  out += "}\n";
  return out;
}

std::string export_json(const StateGraph& g) {
  std::string out = "{\"n\":" + std::to_string(g.param.n()) +
                    ",\"max_depth\":" + std::to_string(g.max_depth) +
                    ",\"grid\":" + fmt_double(g.grid) + ",\"nodes\":[";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const StateGraph::Node& node = g.nodes[i];
    if (i > 0) out += ",";
    out += "{\"id\":" + std::to_string(node.id) +
           ",\"depth\":" + std::to_string(node.depth) +
           ",\"matrix\":" + json_matrix(node.state.mat()) + "}";
  }
  out += "],\"edges\":[";
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const StateGraph::Edge& e = g.edges[i];
    if (i > 0) out += ",";
    out += "{\"src\":" + std::to_string(e.src) + ",\"letter\":\"" +
           to_char(e.letter) + "\",\"dst\":" + std::to_string(e.dst) + "}";
  }
  out += "]}";
  return out;
}

}  // namespace qsync
