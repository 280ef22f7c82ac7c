#include <catch_amalgamated.hpp>

#include <algorithm>
#include <limits>
#include <random>

#include "eflab/error.hpp"
#include "eflab/graph.hpp"

using namespace eflab;

namespace {

// All-pairs shortest paths by Floyd-Warshall; independent of the BFS in distance().
std::vector<std::vector<std::size_t>> floyd(const Graph& g) {
  const std::size_t m = g.vertex_count();
  const std::size_t inf = std::numeric_limits<std::size_t>::max() / 4;
  std::vector<std::vector<std::size_t>> d(m, std::vector<std::size_t>(m, inf));
  for (std::size_t i = 0; i < m; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < m; ++j)
      if (g.adjacent(i, j)) d[i][j] = 1;
  }
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

}  // namespace

TEST_CASE("cycle graphs", "[graph]") {
  SECTION("triangle") {
    Graph c3 = cycle_graph(3);
    REQUIRE(c3.edge_count() == 3);
    REQUIRE(c3.adjacent(0, 2));
  }
  SECTION("antipodal pair of the 4-cycle") {
    Graph c4 = cycle_graph(4);
    REQUIRE(c4.edge_count() == 4);
    REQUIRE_FALSE(c4.adjacent(0, 2));
  }
  SECTION("every vertex of C_10 has degree 2") {
    Graph c10 = cycle_graph(10);
    for (Vertex v = 0; v < 10; ++v) REQUIRE(c10.degree(v) == 2);
  }
  SECTION("m < 3 is refused") {
    REQUIRE_THROWS_AS(cycle_graph(2), InvalidParameter);
  }
}

TEST_CASE("random graphs", "[graph]") {
  REQUIRE(random_graph(12, 0.0, 7).edge_count() == 0);
  REQUIRE(random_graph(12, 1.0, 7) == complete_graph(12));
  // 435 pairs at p = 1/2: mean 217.5, sd ~10.4; the window is +-5 sd or more.
  const auto e = random_graph(30, 0.5, 20240601).edge_count();
  REQUIRE(e >= 150);
  REQUIRE(e <= 300);
  REQUIRE(random_graph(30, 0.5, 99) == random_graph(30, 0.5, 99));
  REQUIRE_THROWS_AS(random_graph(5, 1.5, 1), InvalidParameter);
}

TEST_CASE("graph invariants", "[graph]") {
  REQUIRE_THROWS_AS(Graph(3, {{1, 1}}), InvalidParameter);
  REQUIRE_THROWS_AS(Graph(3, {{0, 3}}), InvalidParameter);
  Graph g(4, {{2, 1}, {1, 2}, {0, 3}});
  REQUIRE(g.edge_count() == 2);
  REQUIRE(g.adjacent(1, 2));
  REQUIRE(g.adjacent(2, 1));
  REQUIRE(g.edges() == std::vector<std::pair<Vertex, Vertex>>{{0, 3}, {1, 2}});
}

TEST_CASE("distance", "[graph]") {
  REQUIRE(distance(cycle_graph(4), 0, 2) == Distance{2});
  REQUIRE(distance(cycle_graph(9), 0, 5) == Distance{4});
  Graph two(4, {{0, 1}, {2, 3}});
  REQUIRE_FALSE(distance(two, 0, 3).has_value());
  REQUIRE_THROWS_AS(distance(two, 0, 4), InvalidParameter);

  SECTION("cycle formula min(|i-j|, m-|i-j|)") {
    for (std::size_t m : {3u, 7u, 12u}) {
      Graph c = cycle_graph(m);
      for (Vertex i = 0; i < m; ++i)
        for (Vertex j = 0; j < m; ++j) {
          const std::size_t diff = i > j ? i - j : j - i;
          REQUIRE(distance(c, i, j) == Distance{std::min(diff, m - diff)});
        }
    }
  }

  SECTION("metric on random graphs, matches Floyd-Warshall") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      Graph g = random_graph(10, 0.25, seed);
      auto fw = floyd(g);
      for (Vertex u = 0; u < 10; ++u) {
        REQUIRE(distance(g, u, u) == Distance{0});
        for (Vertex v = 0; v < 10; ++v) {
          auto d = distance(g, u, v);
          REQUIRE(d == distance(g, v, u));
          if (d) {
            REQUIRE(*d == fw[u][v]);
            for (Vertex w = 0; w < 10; ++w) {
              auto a = distance(g, u, w), b = distance(g, w, v);
              if (a && b) REQUIRE(*d <= *a + *b);
            }
          } else {
            REQUIRE(fw[u][v] > 10);
          }
        }
      }
    }
  }
}

TEST_CASE("partial isomorphism", "[graph]") {
  Graph c3 = cycle_graph(3), c4 = cycle_graph(4);
  REQUIRE(is_partial_isomorphism(c3, c4, {}));
  REQUIRE_FALSE(is_partial_isomorphism(c3, c4, {{0, 0}, {1, 1}, {2, 2}}));
  REQUIRE(is_partial_isomorphism(c4, c4, {{0, 0}, {1, 1}, {2, 2}, {3, 3}}));
  REQUIRE_THROWS_AS(is_partial_isomorphism(c3, c4, {{0, 0}, {0, 1}}), InvalidMap);
  REQUIRE_THROWS_AS(is_partial_isomorphism(c3, c4, {{0, 2}, {1, 2}}), InvalidMap);

  SECTION("invariant under permuting the pair list") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      Graph g1 = random_graph(7, 0.5, rng()), g2 = random_graph(7, 0.5, rng());
      std::vector<Vertex> a{0, 1, 2, 3, 4, 5, 6}, b = a;
      std::shuffle(a.begin(), a.end(), rng);
      std::shuffle(b.begin(), b.end(), rng);
      PartialMap map;
      for (int i = 0; i < 4; ++i) map.emplace_back(a[i], b[i]);
      const bool expected = is_partial_isomorphism(g1, g2, map);
      std::shuffle(map.begin(), map.end(), rng);
      REQUIRE(is_partial_isomorphism(g1, g2, map) == expected);
    }
  }
}

TEST_CASE("automorphisms and isomorphism", "[graph]") {
  REQUIRE(automorphisms(cycle_graph(7), 1000).size() == 14);
  auto autos = automorphisms(cycle_graph(5), 1000);
  REQUIRE(autos.front() == std::vector<Vertex>{0, 1, 2, 3, 4});
  REQUIRE(automorphisms(complete_graph(5), 10).size() == 10);
  REQUIRE(isomorphic(cycle_graph(4), Graph(4, {{0, 2}, {2, 1}, {1, 3}, {3, 0}})));
  REQUIRE_FALSE(isomorphic(cycle_graph(4), Graph(4, {{0, 1}, {1, 2}, {2, 3}})));
}

TEST_CASE("graph JSON", "[graph][io]") {
  Graph g = random_graph(9, 0.4, 3);
  auto j = to_json(g);
  REQUIRE(j["m"] == 9);
  for (const auto& e : j["edges"]) REQUIRE(e[0].get<int>() < e[1].get<int>());
  REQUIRE(graph_from_json(j) == g);
  REQUIRE_THROWS_AS(graph_from_json(nlohmann::json{{"m", 3}}), InvalidParameter);
  REQUIRE_THROWS_AS(graph_from_json(nlohmann::json::parse(R"({"m":3,"edges":[[0,0]]})")),
                    InvalidParameter);
}
