#include "eflab/graph.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <numeric>
#include <random>
#include <string>

#include "eflab/error.hpp"

namespace eflab {

Graph::Graph(std::size_t vertex_count)
    : m_(vertex_count), words_((vertex_count + 63) / 64), rows_(m_ * words_, 0) {}

Graph::Graph(std::size_t vertex_count, const std::vector<std::pair<Vertex, Vertex>>& edges)
    : Graph(vertex_count) {
  for (auto [u, v] : edges) add_edge(u, v);
}

void Graph::add_edge(Vertex u, Vertex v) {
  if (u >= m_ || v >= m_) {
    throw InvalidParameter("edge {" + std::to_string(u) + "," + std::to_string(v) +
                           "} mentions a vertex >= " + std::to_string(m_));
  }
  if (u == v) throw InvalidParameter("self-loop at vertex " + std::to_string(u));
  if (adjacent(u, v)) return;
  rows_[u * words_ + (v >> 6)] |= std::uint64_t{1} << (v & 63);
  rows_[v * words_ + (u >> 6)] |= std::uint64_t{1} << (u & 63);
  ++edges_;
}

std::size_t Graph::degree(Vertex v) const {
  std::size_t d = 0;
  for (std::size_t w = 0; w < words_; ++w) d += std::popcount(rows_[v * words_ + w]);
  return d;
}

std::vector<Vertex> Graph::neighbours(Vertex v) const {
  std::vector<Vertex> out;
  for (Vertex u = 0; u < m_; ++u)
    if (adjacent(v, u)) out.push_back(u);
  return out;
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(edges_);
  for (Vertex u = 0; u < m_; ++u)
    for (Vertex v = u + 1; v < m_; ++v)
      if (adjacent(u, v)) out.emplace_back(u, v);
  return out;
}

Graph cycle_graph(std::size_t m) {
  if (m < 3) throw InvalidParameter("cycle graph needs m >= 3, got " + std::to_string(m));
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex i = 0; i < m; ++i) e.emplace_back(i, (i + 1) % m);
  return Graph(m, e);
}

Graph complete_graph(std::size_t m) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex u = 0; u < m; ++u)
    for (Vertex v = u + 1; v < m; ++v) e.emplace_back(u, v);
  return Graph(m, e);
}

Graph empty_graph(std::size_t m) { return Graph(m); }

Graph path_graph(std::size_t m) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex i = 0; i + 1 < m; ++i) e.emplace_back(i, i + 1);
  return Graph(m, e);
}

// Vertex 0 is the centre.
Graph star_graph(std::size_t leaves) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph(leaves + 1, e);
}

Graph random_graph(std::size_t m, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("edge probability must lie in [0,1]");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex u = 0; u < m; ++u) {
    for (Vertex v = u + 1; v < m; ++v) {
      // 53 high bits -> uniform double in [0,1); portable unlike bernoulli_distribution.
      const double r = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (r < p) e.emplace_back(u, v);
    }
  }
  return Graph(m, e);
}

Distance distance(const Graph& g, Vertex u, Vertex v) {
  const std::size_t m = g.vertex_count();
  if (u >= m || v >= m) throw InvalidParameter("vertex out of range");
  if (u == v) return 0;
  std::vector<std::size_t> dist(m, m);
  std::deque<Vertex> queue{u};
  dist[u] = 0;
  while (!queue.empty()) {
    const Vertex x = queue.front();
    queue.pop_front();
    for (Vertex y = 0; y < m; ++y) {
      if (dist[y] != m || !g.adjacent(x, y)) continue;
      dist[y] = dist[x] + 1;
      if (y == v) return dist[y];
      queue.push_back(y);
    }
  }
  return std::nullopt;
}

bool is_partial_isomorphism(const Graph& g1, const Graph& g2, const PartialMap& map) {
  std::vector<bool> used1(g1.vertex_count()), used2(g2.vertex_count());
  for (auto [a, b] : map) {
    if (a >= g1.vertex_count() || b >= g2.vertex_count())
      throw InvalidParameter("partial map vertex out of range");
    if (used1[a] || used2[b]) throw InvalidMap("partial map repeats a vertex");
    used1[a] = used2[b] = true;
  }
  for (std::size_t i = 0; i < map.size(); ++i)
    for (std::size_t j = i + 1; j < map.size(); ++j)
      if (g1.adjacent(map[i].first, map[j].first) != g2.adjacent(map[i].second, map[j].second))
        return false;
  return true;
}

namespace {

// Backtracking search for adjacency-preserving bijections a -> b.
class IsoSearch {
 public:
  IsoSearch(const Graph& a, const Graph& b, std::size_t limit)
      : a_(a), b_(b), limit_(limit), image_(a.vertex_count()), used_(b.vertex_count()) {
    for (Vertex v = 0; v < a.vertex_count(); ++v) deg_a_.push_back(a.degree(v));
    for (Vertex v = 0; v < b.vertex_count(); ++v) deg_b_.push_back(b.degree(v));
  }

  std::vector<std::vector<Vertex>> run() {
    if (a_.vertex_count() == b_.vertex_count() && a_.edge_count() == b_.edge_count()) extend(0);
    return std::move(found_);
  }

 private:
  void extend(Vertex v) {
    if (found_.size() >= limit_) return;
    if (v == a_.vertex_count()) {
      found_.push_back(image_);
      return;
    }
    for (Vertex w = 0; w < b_.vertex_count(); ++w) {
      if (used_[w] || deg_a_[v] != deg_b_[w]) continue;
      bool ok = true;
      for (Vertex u = 0; u < v && ok; ++u) ok = a_.adjacent(u, v) == b_.adjacent(image_[u], w);
      if (!ok) continue;
      used_[w] = true;
      image_[v] = w;
      extend(v + 1);
      used_[w] = false;
      if (found_.size() >= limit_) return;
    }
  }

  const Graph& a_;
  const Graph& b_;
  std::size_t limit_;
  std::vector<std::size_t> deg_a_, deg_b_;
  std::vector<Vertex> image_;
  std::vector<bool> used_;
  std::vector<std::vector<Vertex>> found_;
};

}  // namespace

std::vector<std::vector<Vertex>> automorphisms(const Graph& g, std::size_t limit) {
  // The search visits identity first because candidates are tried in order.
  return IsoSearch(g, g, std::max<std::size_t>(limit, 1)).run();
}

bool isomorphic(const Graph& a, const Graph& b) { return !IsoSearch(a, b, 1).run().empty(); }

nlohmann::json to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  return {{"m", g.vertex_count()}, {"edges", edges}};
}

Graph graph_from_json(const nlohmann::json& j) {
  try {
    const auto m = j.at("m").get<std::size_t>();
    std::vector<std::pair<Vertex, Vertex>> e;
    for (const auto& pair : j.at("edges")) {
      if (!pair.is_array() || pair.size() != 2) throw InvalidParameter("edge must be [u,v]");
      e.emplace_back(pair[0].get<Vertex>(), pair[1].get<Vertex>());
    }
    return Graph(m, e);
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidParameter(std::string("malformed graph JSON: ") + ex.what());
  }
}

}  // namespace eflab
