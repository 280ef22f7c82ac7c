#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

namespace eflab {

using Vertex = std::size_t;

/// Shortest-path length; std::nullopt stands for infinity (no path).
using Distance = std::optional<std::size_t>;

/// Finite simple graph on the vertices {0, ..., m-1}. Immutable once built.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t vertex_count);
  Graph(std::size_t vertex_count, const std::vector<std::pair<Vertex, Vertex>>& edges);

  std::size_t vertex_count() const { return m_; }
  std::size_t edge_count() const { return edges_; }

  bool adjacent(Vertex u, Vertex v) const {
    return (rows_[u * words_ + (v >> 6)] >> (v & 63)) & 1u;
  }
  std::size_t degree(Vertex v) const;
  std::vector<Vertex> neighbours(Vertex v) const;

  /// Edges as (u, v) with u < v, sorted.
  std::vector<std::pair<Vertex, Vertex>> edges() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.m_ == b.m_ && a.rows_ == b.rows_;
  }

 private:
  void add_edge(Vertex u, Vertex v);

  std::size_t m_ = 0;
  std::size_t words_ = 0;
  std::size_t edges_ = 0;
  std::vector<std::uint64_t> rows_;
};

/// Ordered list of chosen pairs (vertex in g1, vertex in g2).
using PartialMap = std::vector<std::pair<Vertex, Vertex>>;

Graph cycle_graph(std::size_t m);
Graph complete_graph(std::size_t m);
Graph empty_graph(std::size_t m);
Graph path_graph(std::size_t m);
Graph star_graph(std::size_t leaves);

/// G(m, p): each pair independently with probability p, reproducible from seed.
Graph random_graph(std::size_t m, double p, std::uint64_t seed);

Distance distance(const Graph& g, Vertex u, Vertex v);

/// True iff a_i ~ a_j in g1 exactly when b_i ~ b_j in g2. Throws InvalidMap on
/// a repeated vertex on either side.
bool is_partial_isomorphism(const Graph& g1, const Graph& g2, const PartialMap& map);

/// Automorphisms found by backtracking with degree pruning, stopping after
/// `limit` of them. The identity always comes first.
std::vector<std::vector<Vertex>> automorphisms(const Graph& g, std::size_t limit);

bool isomorphic(const Graph& a, const Graph& b);

nlohmann::json to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

}  // namespace eflab
