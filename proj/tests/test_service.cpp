#include <catch_amalgamated.hpp>

#include <filesystem>
#include <random>
#include <thread>

#include "eflab/metric.hpp"
#include "eflab/service.hpp"

#include <httplib.h>

using namespace eflab;
using nlohmann::json;

namespace {

/// In-process server on an ephemeral localhost port.
struct Harness {
  explicit Harness(ServiceOptions opt = {}) : manager(std::move(opt)) {
    mount_routes(server, manager);
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~Harness() {
    server.stop();
    thread.join();
  }

  struct Reply {
    int status;
    json body;
  };

  Reply call(const std::string& method, const std::string& path, const std::string& body = "") {
    httplib::Client cli("127.0.0.1", port);
    httplib::Result r = method == "GET" ? cli.Get(path) : cli.Post(path, body, "application/json");
    REQUIRE(r);
    return {r->status, r->body.empty() ? json() : json::parse(r->body)};
  }
  Reply post(const std::string& path, const json& body) { return call("POST", path, body.dump()); }
  Reply get(const std::string& path) { return call("GET", path); }

  SessionManager manager;
  httplib::Server server;
  int port = 0;
  std::thread thread;
};

PartialMap picks_of(const json& view) {
  PartialMap out;
  for (const auto& p : view["state"]["picks"]) out.push_back({p[0].get<Vertex>(), p[1].get<Vertex>()});
  return out;
}

json random_legal(const json& view, std::mt19937_64& rng) {
  const auto& legal = view["state"]["legal_moves"];
  return legal[rng() % legal.size()];
}

void check_replay(Harness& h, const std::string& id) {
  const json view = h.get("/games/" + id).body;
  REQUIRE(view["over"] == true);
  CHECK(h.manager.replay_matches(id));
  if (view["kind"] == "discrete") {
    const auto t = h.get("/games/" + id + "/transcript");
    REQUIRE(t.status == 200);
    const Outcome o = replay(transcript_from_json(t.body));
    CHECK(code(o.winner) == view["result"]["winner"].get<std::string>());
    CHECK(o.reason == view["result"]["reason"].get<std::string>());
  }
}

json unit_matrix_json(std::size_t m, double scale) {
  return to_json(ComplexMatrix(scale * identity<double>(m)));
}

}  // namespace

TEST_CASE("graph specs") {
  CHECK(parse_graph_spec("cycle:9") == cycle_graph(9));
  CHECK(parse_graph_spec("complete:4") == complete_graph(4));
  CHECK(parse_graph_spec("empty:3") == empty_graph(3));
  CHECK(parse_graph_spec("path:5") == path_graph(5));
  CHECK(parse_graph_spec("star:3") == star_graph(3));
  CHECK(parse_graph_spec("random:7:0.5:3") == random_graph(7, 0.5, 3));
  CHECK(parse_graph_spec("random:7:0.5") == random_graph(7, 0.5, 0));
  for (const char* bad : {"", "cycle", "cycle:x", "cycle:-1", "cycle:3:4", "wheel:5", "random:5:x"})
    CHECK_THROWS_AS(parse_graph_spec(bad), InvalidParameter);
}

TEST_CASE("service address") {
  CHECK(service_address(nullptr) == std::pair<std::string, int>{"127.0.0.1", 8080});
  CHECK(service_address("0.0.0.0:9000") == std::pair<std::string, int>{"0.0.0.0", 9000});
  CHECK_THROWS_AS(service_address("localhost"), InvalidParameter);
  CHECK_THROWS_AS(service_address("h:99999"), InvalidParameter);
}

TEST_CASE("strategy listing") {
  Harness h;
  const auto r = h.get("/strategies");
  REQUIRE(r.status == 200);
  std::set<std::string> names;
  for (const auto& s : r.body) names.insert(s["name"]);
  CHECK(names == std::set<std::string>{"solver-optimal", "cycle-duplicator", "formula-challenger",
                                       "padding-duplicator", "evenodd-challenger", "random"});
}

TEST_CASE("human Challenger against the cycle duplicator") {
  Harness h;
  std::mt19937_64 rng(4);
  for (int game = 0; game < 25; ++game) {
    const auto created = h.post("/games", {{"kind", "discrete"}, {"g1", "cycle:9"}, {"g2", "cycle:10"},
                                           {"n", 2}, {"engine", {{"side", "D"}, {"strategy", "cycle-duplicator"}}}});
    REQUIRE(created.status == 200);
    const std::string id = created.body["id"];
    json view = created.body;
    CHECK(view["to_move"] == "C");
    while (!view["over"].get<bool>()) {
      const auto mv = h.post("/games/" + id + "/moves", random_legal(view, rng));
      REQUIRE(mv.status == 200);
      // Engine never moves on its own.
      CHECK(mv.body["to_move"] == "D");
      const auto reply = h.post("/games/" + id + "/engine-move", json::object());
      REQUIRE(reply.status == 200);
      view = reply.body;
      CHECK(CycleDuplicator::arc_invariant(9, 10, 2, picks_of(view)));
    }
    CHECK(view["result"]["winner"] == "D");
    CHECK(view["moves"].size() == 4);
    check_replay(h, id);
  }
}

TEST_CASE("human Duplicator against the optimal Challenger") {
  Harness h;
  std::mt19937_64 rng(8);
  for (int game = 0; game < 20; ++game) {
    json view = h.post("/games", {{"kind", "discrete"}, {"g1", "cycle:3"}, {"g2", "cycle:4"}, {"n", 2},
                                  {"engine", {{"side", "C"}, {"strategy", "solver-optimal"}}}})
                    .body;
    const std::string id = view["id"];
    while (!view["over"].get<bool>()) {
      view = h.post("/games/" + id + "/engine-move", json::object()).body;
      if (view["over"].get<bool>()) break;
      view = h.post("/games/" + id + "/moves", random_legal(view, rng)).body;
    }
    CHECK(view["result"]["winner"] == "C");
    check_replay(h, id);
  }
}

TEST_CASE("formula challenger sessions") {
  Harness h;
  std::mt19937_64 rng(2);
  auto view = h.post("/games", {{"kind", "discrete"}, {"g1", "cycle:3"}, {"g2", "cycle:4"}, {"n", 2},
                                {"engine", {{"side", "C"}, {"strategy", "formula-challenger"}}}})
                  .body;
  REQUIRE(view.contains("id"));
  CHECK(view["config"].contains("sentence"));
  const std::string id = view["id"];
  while (!view["over"].get<bool>()) {
    view = h.post("/games/" + id + "/engine-move", json::object()).body;
    if (!view["over"].get<bool>()) view = h.post("/games/" + id + "/moves", random_legal(view, rng)).body;
  }
  CHECK(view["result"]["winner"] == "C");
  check_replay(h, id);

  // Identical graphs: nothing to read off.
  const auto none = h.post("/games", {{"kind", "discrete"}, {"g1", "cycle:4"}, {"g2", "cycle:4"}, {"n", 2},
                                      {"engine", {{"side", "C"}, {"strategy", "formula-challenger"}}}});
  CHECK(none.status == 422);
  const auto deep = h.post("/games", {{"kind", "discrete"}, {"g1", "cycle:3"}, {"g2", "cycle:4"}, {"n", 1},
                                      {"engine", {{"side", "C"}, {"strategy", "formula-challenger"},
                                                  {"sentence", "exists x. exists y. exists z. (E(x,y) & E(y,z) & E(x,z))"}}}});
  CHECK(deep.status == 422);
}

TEST_CASE("referee errors") {
  Harness h;
  const std::string id =
      h.post("/games", {{"kind", "discrete"}, {"g1", "cycle:5"}, {"g2", "cycle:6"}, {"n", 3}}).body["id"];
  const std::string base = "/games/" + id;

  CHECK(h.post(base + "/moves", {{"graph", 1}, {"v", 0}}).status == 200);
  CHECK(h.post(base + "/moves", {{"graph", 2}, {"v", 3}}).status == 200);

  const auto repeat = h.post(base + "/moves", {{"graph", 1}, {"v", 0}});
  CHECK(repeat.status == 409);
  CHECK(repeat.body["error"] == "illegal-move");
  CHECK(repeat.body["reason"] == "repeat");
  CHECK(repeat.body["detail"].get<std::string>().find("repeat") != std::string::npos);

  const auto range = h.post(base + "/moves", {{"graph", 1}, {"v", 99}});
  CHECK(range.status == 409);
  CHECK(h.post(base + "/moves", {{"graph", 3}, {"v", 1}}).status == 409);
  CHECK(h.post(base + "/moves", {{"graph", 1}}).status == 422);
  CHECK(h.post(base + "/moves", json::array()).status == 422);
  CHECK(h.call("POST", base + "/moves", "{not json").status == 422);
  CHECK(h.post(base + "/engine-move", json::object()).status == 409);
  // Rejected moves leave no trace.
  CHECK(h.get(base).body["moves"].size() == 2);

  CHECK(h.get("/games/nope").status == 404);
  CHECK(h.get("/games/nope").body["error"] == "not-found");
  CHECK(h.post("/games/nope/moves", {{"graph", 1}, {"v", 0}}).status == 404);
  CHECK(h.post("/games/nope/engine-move", json::object()).status == 404);
  CHECK(h.get("/no/such/route").status == 404);

  CHECK(h.post("/games", {{"kind", "chess"}}).status == 422);
  CHECK(h.post("/games", {{"kind", "discrete"}, {"g1", "cycle:5"}}).status == 422);
  CHECK(h.post("/games", {{"kind", "discrete"}, {"g1", "wheel:5"}, {"g2", "cycle:5"}, {"n", 1}}).status == 422);
  CHECK(h.post("/games", {{"kind", "discrete"}, {"g1", "cycle:5"}, {"g2", "cycle:6"}, {"n", 1},
                          {"engine", {{"side", "D"}, {"strategy", "padding-duplicator"}}}})
            .status == 422);
  // Below the threshold the cycle duplicator refuses.
  CHECK(h.post("/games", {{"kind", "discrete"}, {"g1", "cycle:5"}, {"g2", "cycle:6"}, {"n", 2},
                          {"engine", {{"side", "D"}, {"strategy", "cycle-duplicator"}}}})
            .status == 422);
  CHECK(h.post("/games", {{"kind", "discrete"}, {"g1", "path:12"}, {"g2", "cycle:12"}, {"n", 2},
                          {"engine", {{"side", "D"}, {"strategy", "cycle-duplicator"}}}})
            .status == 422);
  CHECK(h.post("/games", {{"kind", "discrete"}, {"g1", "cycle:9"}, {"g2", "cycle:10"}, {"n", 2},
                          {"engine", {{"side", "X"}, {"strategy", "random"}}}})
            .status == 422);
}

TEST_CASE("engine turn ownership") {
  Harness h;
  const std::string id = h.post("/games", {{"kind", "discrete"}, {"g1", "cycle:9"}, {"g2", "cycle:10"},
                                           {"n", 2}, {"engine", {{"side", "C"}, {"strategy", "random"}, {"seed", 3}}}})
                             .body["id"];
  const auto early = h.post("/games/" + id + "/moves", {{"graph", 1}, {"v", 0}});
  CHECK(early.status == 409);
  CHECK(early.body["error"] == "turn");
  CHECK(h.post("/games/" + id + "/engine-move", json::object()).status == 200);
  CHECK(h.post("/games/" + id + "/engine-move", json::object()).status == 409);
}

TEST_CASE("no-move loss is reported") {
  Harness h;
  // Three innings on one-vertex graphs: Challenger runs out in inning 2.
  const std::string id =
      h.post("/games", {{"kind", "discrete"}, {"g1", "empty:1"}, {"g2", "empty:1"}, {"n", 3}}).body["id"];
  h.post("/games/" + id + "/moves", {{"graph", 1}, {"v", 0}});
  const auto view = h.post("/games/" + id + "/moves", {{"graph", 2}, {"v", 0}}).body;
  CHECK(view["over"] == true);
  CHECK(view["result"]["winner"] == "D");
  CHECK(view["result"]["reason"] == "no-move");
  CHECK(h.post("/games/" + id + "/moves", {{"graph", 1}, {"v", 0}}).status == 409);
  check_replay(h, id);
}

TEST_CASE("served legal moves match the referee") {
  std::mt19937_64 rng(12);
  SessionManager manager;
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g1 = random_graph(2 + rng() % 4, 0.5, rng()), g2 = random_graph(2 + rng() % 4, 0.5, rng());
    const std::size_t n = 2 + rng() % 2;
    json view = manager.create({{"kind", "discrete"}, {"g1", to_json(g1)}, {"g2", to_json(g2)}, {"n", n}});
    GameState s(g1, g2, n);
    const std::size_t steps = rng() % (2 * n);
    for (std::size_t i = 0; i < steps && !is_over(s); ++i) {
      const auto legal = legal_moves(s);
      const Move m = legal[rng() % legal.size()];
      s = apply_move(s, m);
      view = manager.submit_move(view["id"], {{"graph", m.graph}, {"v", m.v}});
    }
    json expected = json::array();
    if (!s.complete())
      for (const Move& m : legal_moves(s)) expected.push_back({{"graph", m.graph}, {"v", m.v}});
    CHECK(view["state"]["legal_moves"] == expected);
    CHECK(view["over"] == is_over(s));
  }
}

TEST_CASE("continuous sessions") {
  Harness h;
  SECTION("padding engine against random human moves") {
    std::mt19937_64 rng(6);
    for (int game = 0; game < 3; ++game) {
      json view = h.post("/games", {{"kind", "continuous-HS"}, {"l", 3}, {"m", 4}, {"n", 3}, {"epsilon", 0.9},
                                    {"engine", {{"side", "D"}, {"strategy", "padding-duplicator"}}}})
                      .body;
      REQUIRE(view.contains("id"));
      const std::string id = view["id"];
      while (!view["over"].get<bool>()) {
        const int side = 1 + static_cast<int>(rng() % 2);
        const std::size_t d = side == 1 ? 3 : 4;
        view = h.post("/games/" + id + "/moves", {{"side", side}, {"x", to_json(random_unit_ball(d, rng))}}).body;
        view = h.post("/games/" + id + "/engine-move", json::object()).body;
      }
      CHECK(view["result"]["winner"] == "D");
      CHECK(view["result"]["report"]["max_violation"].get<double>() <= 0.9);
      check_replay(h, id);
    }
  }
  SECTION("operator ball is enforced before acceptance") {
    const std::string id = h.post("/games", {{"kind", "continuous-OP"}, {"l", 2}, {"m", 3}, {"n", 1},
                                             {"epsilon", 0.1}, {"delta", 0.5}})
                               .body["id"];
    const auto big = h.post("/games/" + id + "/moves", {{"side", 1}, {"x", unit_matrix_json(2, 1.5)}});
    CHECK(big.status == 409);
    CHECK(big.body["detail"].get<std::string>().find("exceeds 1") != std::string::npos);
    CHECK(h.post("/games/" + id + "/moves", {{"side", 1}, {"x", unit_matrix_json(3, 1.0)}}).status == 409);
    CHECK(h.post("/games/" + id + "/moves", {{"side", 1}, {"x", {{"m", 2}}}}).status == 422);
    CHECK(h.get("/games/" + id).body["moves"].empty());
    CHECK(h.post("/games/" + id + "/moves", {{"side", 1}, {"x", unit_matrix_json(2, 1.0)}}).status == 200);
    CHECK(h.post("/games/" + id + "/moves", {{"side", 1}, {"x", unit_matrix_json(2, 1.0)}}).status == 409);
    const auto done = h.post("/games/" + id + "/moves", {{"side", 2}, {"x", unit_matrix_json(3, 1.0)}});
    REQUIRE(done.status == 200);
    CHECK(done.body["over"] == true);
    check_replay(h, id);
  }
  SECTION("evenodd engine against the padding answer") {
    json view = h.post("/games", {{"kind", "continuous-OP"}, {"l", 2}, {"m", 3}, {"n", 6}, {"epsilon", 0.05},
                                  {"delta", 0.5}, {"engine", {{"side", "C"}, {"strategy", "evenodd-challenger"}}}})
                    .body;
    const std::string id = view["id"];
    while (!view["over"].get<bool>()) {
      view = h.post("/games/" + id + "/engine-move", json::object()).body;
      const json x = view["state"]["pending"]["x"];
      view = h.post("/games/" + id + "/moves", {{"side", 2}, {"x", to_json(pad_to(matrix_from_json(x), 3))}}).body;
    }
    CHECK(view["result"].contains("report"));
    check_replay(h, id);
  }
  SECTION("strategy and norm mismatches") {
    CHECK(h.post("/games", {{"kind", "continuous-HS"}, {"l", 2}, {"m", 5}, {"n", 1}, {"epsilon", 0.1},
                            {"engine", {{"side", "D"}, {"strategy", "padding-duplicator"}}}})
              .status == 422);
    CHECK(h.post("/games", {{"kind", "continuous-HS"}, {"l", 3}, {"m", 5}, {"n", 1}, {"epsilon", 0.1},
                            {"engine", {{"side", "C"}, {"strategy", "evenodd-challenger"}}}})
              .status == 422);
    CHECK(h.post("/games", {{"kind", "continuous-HS"}, {"l", 2}, {"m", 3}, {"n", 1}, {"epsilon", 0.1},
                            {"norm", "OP"}})
              .status == 422);
    CHECK(h.post("/games", {{"kind", "continuous-HS"}, {"l", 2}, {"m", 3}, {"n", 1}, {"epsilon", -1}}).status == 422);
  }
}

TEST_CASE("permutation sessions") {
  Harness h;
  json view = h.post("/games", {{"kind", "permutation"}, {"m", 5}, {"l", 6}, {"n", 3}, {"epsilon", 0.5},
                                {"engine", {{"side", "D"}, {"strategy", "random"}, {"seed", 1}}}})
                  .body;
  const std::string id = view["id"];
  CHECK(h.post("/games/" + id + "/moves", {{"side", 1}, {"perm", {0, 1, 2}}}).status == 409);
  CHECK(h.post("/games/" + id + "/moves", {{"side", 1}, {"perm", {0, 0, 2, 3, 4}}}).status == 422);
  std::mt19937_64 rng(1);
  while (!view["over"].get<bool>()) {
    view = h.post("/games/" + id + "/moves", {{"side", 2}, {"perm", to_json(random_permutation(6, rng))}}).body;
    view = h.post("/games/" + id + "/engine-move", json::object()).body;
  }
  // Recompute the verdict from the served position.
  std::vector<Permutation> a, b;
  for (const auto& p : view["state"]["a"]) a.push_back(permutation_from_json(p));
  for (const auto& p : view["state"]["b"]) b.push_back(permutation_from_json(p));
  PermGameConfig cfg{5, 6, 3, 0.5, PermPayoff::N2};
  CHECK(view["result"]["winner"] == to_string(perm_payoff_violation(a, b, cfg).verdict));
  check_replay(h, id);
}

TEST_CASE("snapshots survive a restart") {
  const auto dir = std::filesystem::temp_directory_path() / ("eflab-snap-" + std::to_string(std::random_device{}()));
  std::filesystem::remove_all(dir);
  ServiceOptions opt;
  opt.snapshot_dir = dir;
  json before;
  {
    SessionManager m(opt);
    const std::string id = m.create({{"kind", "discrete"}, {"g1", "cycle:9"}, {"g2", "cycle:10"}, {"n", 2},
                                     {"engine", {{"side", "D"}, {"strategy", "cycle-duplicator"}}}})["id"];
    m.submit_move(id, {{"graph", 2}, {"v", 4}});
    before = m.engine_move(id);
  }
  {
    std::ofstream junk(dir / "broken.json");
    junk << "{";
  }
  SessionManager again(opt);
  REQUIRE(again.ids().size() == 1);
  CHECK(again.get(again.ids()[0]) == before);
  std::filesystem::remove_all(dir);
}

TEST_CASE("sessions are independent under concurrency") {
  Harness h;
  std::vector<std::thread> workers;
  std::vector<std::string> ids(6);
  std::atomic<int> failures{0};
  for (int w = 0; w < 6; ++w)
    workers.emplace_back([&, w] {
      std::mt19937_64 rng(w);
      json view = h.post("/games", {{"kind", "discrete"}, {"g1", "cycle:17"}, {"g2", "cycle:18"}, {"n", 3},
                                    {"engine", {{"side", "D"}, {"strategy", "cycle-duplicator"}}}})
                      .body;
      ids[w] = view["id"];
      while (!view["over"].get<bool>()) {
        if (h.post("/games/" + ids[w] + "/moves", random_legal(view, rng)).status != 200) ++failures;
        view = h.post("/games/" + ids[w] + "/engine-move", json::object()).body;
      }
      if (view["result"]["winner"] != "D") ++failures;
    });
  // Concurrent reads of one session while others are being played.
  for (int i = 0; i < 20; ++i) h.get("/strategies");
  for (auto& t : workers) t.join();
  CHECK(failures == 0);
  for (const auto& id : ids) check_replay(h, id);
}
