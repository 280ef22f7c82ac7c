#include "eflab/service.hpp"

#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>

#include "eflab/logic.hpp"
#include "eflab/metric.hpp"

// After Eigen: <resolv.h> defines a macro named _res.
#include <httplib.h>

namespace eflab {

using nlohmann::json;

// ---------------------------------------------------------------- helpers

Graph parse_graph_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  auto number = [&](std::size_t i) -> std::size_t {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(parts.at(i), &used);
      if (used != parts[i].size() || parts[i].front() == '-') throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw InvalidParameter("bad number in graph spec \"" + spec + "\"");
    }
  };
  if (parts.empty()) throw InvalidParameter("empty graph spec");
  const std::string& kind = parts[0];
  const std::size_t arity = kind == "random" ? 3 : 2;
  if (parts.size() != arity && !(kind == "random" && parts.size() == 4))
    throw InvalidParameter("malformed graph spec \"" + spec + "\"");
  if (kind == "cycle") return cycle_graph(number(1));
  if (kind == "complete") return complete_graph(number(1));
  if (kind == "empty") return empty_graph(number(1));
  if (kind == "path") return path_graph(number(1));
  if (kind == "star") return star_graph(number(1));
  if (kind == "random") {
    double p = 0;
    try {
      std::size_t used = 0;
      p = std::stod(parts[2], &used);
      if (used != parts[2].size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw InvalidParameter("bad edge probability in graph spec \"" + spec + "\"");
    }
    return random_graph(number(1), p, parts.size() == 4 ? number(3) : 0);
  }
  throw InvalidParameter("unknown graph kind \"" + kind + "\"");
}

ErrorResponse error_response(const std::exception& e) {
  auto body = [&](const std::string& code) { return json{{"error", code}, {"detail", e.what()}}; };
  if (const auto* s = dynamic_cast<const ServiceError*>(&e)) return {s->status(), body(s->code())};
  if (dynamic_cast<const IllegalMove*>(&e)) {
    const std::string detail = e.what();
    const auto colon = detail.find(':');
    json b = body("illegal-move");
    b["reason"] = colon == std::string::npos ? "illegal" : detail.substr(0, colon);
    return {409, b};
  }
  if (dynamic_cast<const GameStateError*>(&e)) return {409, body("game-state")};
  if (dynamic_cast<const BudgetExceeded*>(&e)) return {422, body("budget-exceeded")};
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const FreeVariableError*>(&e))
    return {422, body("bad-sentence")};
  if (dynamic_cast<const Error*>(&e) || dynamic_cast<const json::exception*>(&e))
    return {422, body("malformed")};
  return {500, body("internal")};
}

const std::vector<StrategyInfo>& engine_strategies() {
  static const std::vector<StrategyInfo> all = {
      {"solver-optimal", {"discrete"}, {"C", "D"}, "exact backward induction, budget-limited"},
      {"cycle-duplicator", {"discrete"}, {"D"}, "arc-preserving answers on two cycles above 2^(n+1)"},
      {"formula-challenger",
       {"discrete"},
       {"C"},
       "plays witnesses of a distinguishing sentence (given or searched)"},
      {"padding-duplicator",
       {"continuous-HS", "continuous-OP"},
       {"D"},
       "zero-border or truncate between M_m and M_m+1"},
      {"evenodd-challenger",
       {"continuous-HS", "continuous-OP"},
       {"C"},
       "partial isometry attack on the even-dimensional side"},
      {"random",
       {"discrete", "continuous-HS", "continuous-OP", "permutation"},
       {"C", "D"},
       "seeded uniform legal moves"},
  };
  return all;
}

json strategies_json() {
  json out = json::array();
  for (const auto& s : engine_strategies())
    out.push_back({{"name", s.name}, {"kinds", s.kinds}, {"sides", s.sides},
                   {"description", s.description}});
  return out;
}

std::pair<std::string, int> service_address(const char* env_value) {
  std::string addr = env_value && *env_value ? env_value : "127.0.0.1:8080";
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) throw InvalidParameter("EF_LAB_ADDR must be host:port");
  int port = 0;
  try {
    port = std::stoi(addr.substr(colon + 1));
  } catch (const std::exception&) {
    throw InvalidParameter("EF_LAB_ADDR has a bad port");
  }
  if (port < 0 || port > 65535) throw InvalidParameter("EF_LAB_ADDR port out of range");
  return {addr.substr(0, colon), port};
}

namespace {

ServiceError unprocessable(const std::string& detail) { return {422, "malformed", detail}; }
ServiceError conflict(const std::string& code, const std::string& detail) {
  return {409, code, detail};
}

Player side_from(const json& j) {
  const auto s = j.get<std::string>();
  if (s == "C") return Player::Challenger;
  if (s == "D") return Player::Duplicator;
  throw unprocessable("engine side must be \"C\" or \"D\"");
}

Graph graph_field(const json& j) {
  if (j.is_string()) return parse_graph_spec(j.get<std::string>());
  return graph_from_json(j);
}

int side_field(const json& j) {
  const int side = j.at("side").get<int>();
  if (side != 1 && side != 2) throw IllegalMove("side must be 1 or 2");
  return side;
}

}  // namespace

// ---------------------------------------------------------------- sessions

/// One game. Subclasses hold the kind-specific position; the log records
/// every accepted move in submission form.
class Session {
 public:
  virtual ~Session() = default;

  static std::unique_ptr<Session> make(const json& request, const ServiceOptions& opt);

  json view() const {
    json v = {{"id", id},           {"kind", kind()},          {"config", config()},
              {"moves", log},       {"state", state()},        {"over", over()},
              {"to_move", nullptr}, {"result", nullptr},       {"engine", nullptr}};
    if (!over()) v["to_move"] = code(to_move());
    if (over()) v["result"] = result();
    if (engine_side) v["engine"] = {{"side", code(*engine_side)}, {"strategy", engine_name}};
    return v;
  }

  void human(const json& move) {
    if (over()) throw GameStateError("game already finished");
    if (engine_side && to_move() == *engine_side)
      throw conflict("turn", std::string("it is the engine's turn (") + code(*engine_side) + ")");
    record(move);
  }

  void engine() {
    if (!engine_side) throw conflict("no-engine", "session has no engine player");
    if (over()) throw GameStateError("game already finished");
    if (to_move() != *engine_side) throw conflict("turn", "it is not the engine's turn");
    record(engine_choice());
  }

  /// Applies a logged move, bypassing turn ownership.
  void record(const json& move) {
    json entry = apply(move);
    entry["by"] = code(to_move_before_);
    log.push_back(std::move(entry));
    if (over()) finish();
  }

  virtual json transcript() const = 0;

  std::string id;
  json request;
  json log = json::array();
  std::optional<Player> engine_side;
  std::string engine_name;
  mutable std::shared_mutex mutex;

 protected:
  virtual std::string kind() const = 0;
  virtual json config() const = 0;
  virtual json state() const = 0;
  virtual bool over() const = 0;
  virtual Player to_move() const = 0;
  virtual json result() const = 0;
  /// Validates and applies; returns the normalized log entry. Must set
  /// to_move_before_.
  virtual json apply(const json& move) = 0;
  virtual json engine_choice() = 0;
  virtual void finish() {}

  Player to_move_before_ = Player::Challenger;
};

namespace {

class DiscreteSession : public Session {
 public:
  DiscreteSession(const json& req, const ServiceOptions& opt)
      : state_(graph_field(req.at("g1")), graph_field(req.at("g2")), req.at("n").get<std::size_t>()) {
    if (!req.contains("engine") || req["engine"].is_null()) return;
    const json& e = req["engine"];
    engine_side = side_from(e.at("side"));
    engine_name = e.at("strategy").get<std::string>();
    const Graph &g1 = state_.g1(), &g2 = state_.g2();
    const std::size_t n = state_.innings();
    if (engine_name == "solver-optimal") {
      strategy_ = solver_strategy(g1, g2, n, opt.solver);
    } else if (engine_name == "cycle-duplicator") {
      if (*engine_side != Player::Duplicator) throw unprocessable("cycle-duplicator plays D");
      if (g1 != cycle_graph(g1.vertex_count()) || g2 != cycle_graph(g2.vertex_count()))
        throw unprocessable("cycle-duplicator needs two cycle graphs");
      strategy_ = cycle_duplicator_strategy(g1.vertex_count(), g2.vertex_count(), n);
    } else if (engine_name == "formula-challenger") {
      if (*engine_side != Player::Challenger) throw unprocessable("formula-challenger plays C");
      std::optional<Formula> f;
      if (e.contains("sentence")) f = parse_sentence(e["sentence"].get<std::string>());
      else f = find_distinguishing_sentence(g1, g2, n);
      if (!f) throw unprocessable("no distinguishing sentence of depth <= " + std::to_string(n));
      if (quantifier_depth(*f) > n) throw unprocessable("sentence is deeper than the game");
      strategy_ = formula_challenger_strategy(g1, g2, *f);
      sentence_ = to_string(*f);
    } else if (engine_name == "random") {
      strategy_ = random_strategy(e.value("seed", std::uint64_t{0}));
    } else {
      throw unprocessable("unknown or unsupported strategy \"" + engine_name + "\" for discrete games");
    }
  }

  json transcript() const override {
    if (!over()) throw GameStateError("game not finished");
    Transcript t{state_.g1(), state_.g2(), state_.innings(), {}, {}, {}, {}};
    for (const auto& e : log)
      t.moves.push_back({e["by"] == "C" ? Player::Challenger : Player::Duplicator,
                         {e["graph"].get<int>(), e["v"].get<Vertex>()}});
    const Outcome o = winner(state_);
    t.winner = o.winner;
    t.reason = o.reason;
    return to_json(t);
  }

 protected:
  std::string kind() const override { return "discrete"; }
  json config() const override {
    json c = {{"g1", to_json(state_.g1())}, {"g2", to_json(state_.g2())}, {"n", state_.innings()}};
    if (sentence_) c["sentence"] = *sentence_;
    return c;
  }
  json state() const override {
    json picks = json::array();
    for (const auto& [a, b] : state_.picks()) picks.push_back({a, b});
    json legal = json::array();
    if (!state_.complete())
      for (const Move& m : legal_moves(state_)) legal.push_back({{"graph", m.graph}, {"v", m.v}});
    json s = {{"inning", state_.inning()}, {"picks", picks}, {"pending", nullptr},
              {"legal_moves", legal}, {"partial_isomorphism", is_partial_isomorphism(
                                                               state_.g1(), state_.g2(), state_.picks())}};
    if (state_.pending()) s["pending"] = {{"graph", state_.pending()->graph}, {"v", state_.pending()->v}};
    return s;
  }
  bool over() const override { return is_over(state_); }
  Player to_move() const override { return state_.to_move(); }
  json result() const override {
    const Outcome o = winner(state_);
    return {{"winner", code(o.winner)}, {"reason", o.reason}};
  }
  json apply(const json& move) override {
    const Move m{move.at("graph").get<int>(), move.at("v").get<Vertex>()};
    to_move_before_ = state_.to_move();
    state_ = apply_move(state_, m);
    return {{"graph", m.graph}, {"v", m.v}};
  }
  json engine_choice() override {
    const Move m = strategy_->choose(state_);
    return {{"graph", m.graph}, {"v", m.v}};
  }

 private:
  GameState state_;
  std::shared_ptr<Strategy> strategy_;
  std::optional<std::string> sentence_;
};

class MatrixSession : public Session {
 public:
  MatrixSession(const json& req, NormKind norm) : state_(config_for(req, norm)) {
    if (!req.contains("engine") || req["engine"].is_null()) return;
    const json& e = req["engine"];
    engine_side = side_from(e.at("side"));
    engine_name = e.at("strategy").get<std::string>();
    const auto& cfg = state_.config();
    if (engine_name == "padding-duplicator") {
      if (*engine_side != Player::Duplicator) throw unprocessable("padding-duplicator plays D");
      const std::size_t lo = std::min(cfg.l, cfg.m);
      if (std::max(cfg.l, cfg.m) != lo + 1)
        throw unprocessable("padding-duplicator needs dimensions m and m+1");
      strategy_ = padding_duplicator_strategy(lo);
    } else if (engine_name == "evenodd-challenger") {
      if (*engine_side != Player::Challenger) throw unprocessable("evenodd-challenger plays C");
      if (cfg.l % 2 && cfg.m % 2) throw unprocessable("evenodd-challenger needs an even dimension");
      strategy_ = evenodd_challenger_strategy();
    } else if (engine_name == "random") {
      strategy_ = random_matrix_strategy(e.value("seed", std::uint64_t{0}));
    } else {
      throw unprocessable("unknown or unsupported strategy \"" + engine_name +
                          "\" for continuous games");
    }
  }

  json transcript() const override {
    if (!over()) throw GameStateError("game not finished");
    return {{"config", to_json(state_.config())}, {"moves", log}, {"report", *report_}};
  }

 protected:
  static ContinuousGameConfig config_for(const json& req, NormKind norm) {
    json c = req;
    if (req.contains("norm") && norm_kind_from(req["norm"].get<std::string>()) != norm)
      throw unprocessable("norm does not match the game kind");
    c["norm"] = to_string(norm);
    ContinuousGameConfig cfg = continuous_config_from_json(c);
    if (cfg.l > 128 || cfg.m > 128) throw unprocessable("dimensions above 128 are not served");
    return cfg;
  }
  std::string kind() const override {
    return state_.config().norm == NormKind::HS ? "continuous-HS" : "continuous-OP";
  }
  json config() const override { return to_json(state_.config()); }
  json state() const override {
    json a = json::array(), b = json::array();
    for (const auto& x : state_.a()) a.push_back(to_json(x));
    for (const auto& x : state_.b()) b.push_back(to_json(x));
    json s = {{"inning", state_.inning()}, {"a", a}, {"b", b}, {"pending", nullptr},
              {"dims", {{"1", state_.dim(1)}, {"2", state_.dim(2)}}}};
    if (state_.pending())
      s["pending"] = {{"side", state_.pending()->side}, {"x", to_json(state_.pending()->x)}};
    if (!state_.complete())
      s["legal_sides"] = state_.pending() ? json{state_.pending()->side == 1 ? 2 : 1} : json{1, 2};
    return s;
  }
  bool over() const override { return state_.complete(); }
  Player to_move() const override {
    return state_.challenger_to_move() ? Player::Challenger : Player::Duplicator;
  }
  json result() const override {
    const Verdict v = verdict_from((*report_)["verdict"]);
    return {{"winner", to_string(v)}, {"report", *report_}};
  }
  json apply(const json& move) override {
    MatrixMove mv{side_field(move), matrix_from_json(move.at("x"))};
    to_move_before_ = to_move();
    state_ = state_.apply(mv);
    return {{"side", mv.side}, {"x", to_json(mv.x)}};
  }
  json engine_choice() override {
    const MatrixMove mv = strategy_->choose(state_);
    return {{"side", mv.side}, {"x", to_json(mv.x)}};
  }
  void finish() override { report_ = to_json(matrix_game_result(state_)); }

 private:
  static Verdict verdict_from(const json& j) {
    const auto s = j.get<std::string>();
    return s == "D" ? Verdict::DuplicatorWins : s == "C" ? Verdict::ChallengerWins : Verdict::Inconclusive;
  }

  MatrixGameState state_;
  std::shared_ptr<MatrixStrategy> strategy_;
  std::optional<json> report_;
};

/// Permutation game: side 1 plays in S_m, side 2 in S_l.
class PermutationSession : public Session {
 public:
  explicit PermutationSession(const json& req) : cfg_(perm_config_from_json(req)) {
    if (cfg_.m > 4096 || cfg_.l > 4096) throw unprocessable("degrees above 4096 are not served");
    if (!req.contains("engine") || req["engine"].is_null()) return;
    const json& e = req["engine"];
    engine_side = side_from(e.at("side"));
    engine_name = e.at("strategy").get<std::string>();
    if (engine_name != "random")
      throw unprocessable("unknown or unsupported strategy \"" + engine_name +
                          "\" for permutation games");
    rng_.seed(e.value("seed", std::uint64_t{0}));
  }

  json transcript() const override {
    if (!over()) throw GameStateError("game not finished");
    return {{"config", to_json(cfg_)}, {"moves", log}, {"report", *report_}};
  }

 protected:
  std::size_t degree(int side) const { return side == 1 ? cfg_.m : cfg_.l; }
  std::string kind() const override { return "permutation"; }
  json config() const override { return to_json(cfg_); }
  json state() const override {
    json a = json::array(), b = json::array();
    for (const auto& p : a_) a.push_back(to_json(p));
    for (const auto& p : b_) b.push_back(to_json(p));
    json s = {{"inning", a_.size() + 1}, {"a", a}, {"b", b}, {"pending", nullptr}};
    if (pending_) s["pending"] = {{"side", pending_->first}, {"perm", to_json(pending_->second)}};
    return s;
  }
  bool over() const override { return a_.size() == cfg_.innings && !pending_; }
  Player to_move() const override { return pending_ ? Player::Duplicator : Player::Challenger; }
  json result() const override {
    return {{"winner", to_string(verdict_)}, {"report", *report_}};
  }
  json apply(const json& move) override {
    const int side = side_field(move);
    Permutation p = permutation_from_json(move.at("perm"));
    if (pending_ && side == pending_->first)
      throw IllegalMove("Duplicator must answer in the other group");
    if (p.degree() != degree(side))
      throw IllegalMove("permutation must have degree " + std::to_string(degree(side)));
    to_move_before_ = to_move();
    const json entry = {{"side", side}, {"perm", to_json(p)}};
    if (!pending_) {
      pending_.emplace(side, std::move(p));
    } else {
      Permutation& one = side == 1 ? p : pending_->second;
      Permutation& two = side == 1 ? pending_->second : p;
      a_.push_back(one);
      b_.push_back(two);
      pending_.reset();
    }
    return entry;
  }
  json engine_choice() override {
    const int side = pending_ ? 3 - pending_->first : 1 + static_cast<int>(rng_() % 2);
    return {{"side", side}, {"perm", to_json(random_permutation(degree(side), rng_))}};
  }
  void finish() override {
    const PayoffReport r = perm_payoff_violation(a_, b_, cfg_);
    verdict_ = r.verdict;
    report_ = to_json(r);
  }

 private:
  PermGameConfig cfg_;
  std::vector<Permutation> a_, b_;
  std::optional<std::pair<int, Permutation>> pending_;
  std::mt19937_64 rng_;
  Verdict verdict_ = Verdict::Inconclusive;
  std::optional<json> report_;
};

}  // namespace

std::unique_ptr<Session> Session::make(const json& request, const ServiceOptions& opt) {
  try {
    if (!request.is_object()) throw unprocessable("request body must be a JSON object");
    const auto kind = request.at("kind").get<std::string>();
    std::unique_ptr<Session> s;
    if (kind == "discrete") s = std::make_unique<DiscreteSession>(request, opt);
    else if (kind == "continuous-HS") s = std::make_unique<MatrixSession>(request, NormKind::HS);
    else if (kind == "continuous-OP") s = std::make_unique<MatrixSession>(request, NormKind::OP);
    else if (kind == "permutation") s = std::make_unique<PermutationSession>(request);
    else throw unprocessable("unknown game kind \"" + kind + "\"");
    s->request = request;
    return s;
  } catch (const json::exception& e) {
    throw unprocessable(std::string("bad game request: ") + e.what());
  }
}

// ---------------------------------------------------------------- manager

SessionManager::SessionManager(ServiceOptions opt) : opt_(std::move(opt)) {
  if (!opt_.snapshot_dir) return;
  std::filesystem::create_directories(*opt_.snapshot_dir);
  for (const auto& entry : std::filesystem::directory_iterator(*opt_.snapshot_dir)) {
    if (entry.path().extension() != ".json") continue;
    try {
      std::ifstream in(entry.path());
      const json snap = json::parse(in);
      auto s = Session::make(snap.at("request"), opt_);
      for (const auto& mv : snap.at("moves")) s->record(mv);
      s->id = snap.at("id").get<std::string>();
      sessions_[s->id] = std::move(s);
    } catch (const std::exception& e) {
      std::cerr << "skipping snapshot " << entry.path() << ": " << e.what() << '\n';
    }
  }
}

SessionManager::~SessionManager() = default;

std::string SessionManager::fresh_id() {
  static thread_local std::mt19937_64 rng(std::random_device{}());
  for (;;) {
    std::ostringstream os;
    os << std::hex << (rng() & 0xFFFFFFFFFFFFull);
    if (!sessions_.count(os.str())) return os.str();
  }
}

std::shared_ptr<Session> SessionManager::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "not-found", "no session \"" + id + "\"");
  return it->second;
}

void SessionManager::persist(const std::string& id, const Session& s) const {
  if (!opt_.snapshot_dir) return;
  const auto path = *opt_.snapshot_dir / (id + ".json");
  const auto tmp = *opt_.snapshot_dir / (id + ".json.tmp");
  {
    std::ofstream out(tmp);
    out << json{{"id", id}, {"request", s.request}, {"moves", s.log}}.dump();
  }
  std::filesystem::rename(tmp, path);
}

json SessionManager::create(const json& body) {
  std::shared_ptr<Session> s = Session::make(body, opt_);
  {
    std::unique_lock lock(mutex_);
    s->id = fresh_id();
    sessions_[s->id] = s;
  }
  std::unique_lock lock(s->mutex);
  persist(s->id, *s);
  return s->view();
}

json SessionManager::get(const std::string& id) const {
  const auto s = find(id);
  std::shared_lock lock(s->mutex);
  return s->view();
}

json SessionManager::submit_move(const std::string& id, const json& move) {
  const auto s = find(id);
  std::unique_lock lock(s->mutex);
  if (!move.is_object()) throw unprocessable("move must be a JSON object");
  try {
    s->human(move);
  } catch (const json::exception& e) {
    throw unprocessable(std::string("bad move: ") + e.what());
  }
  persist(id, *s);
  return s->view();
}

json SessionManager::engine_move(const std::string& id) {
  const auto s = find(id);
  std::unique_lock lock(s->mutex);
  s->engine();
  persist(id, *s);
  return s->view();
}

json SessionManager::snapshot(const std::string& id) const {
  const auto s = find(id);
  std::shared_lock lock(s->mutex);
  return {{"id", id}, {"request", s->request}, {"moves", s->log}};
}

json SessionManager::transcript(const std::string& id) const {
  const auto s = find(id);
  std::shared_lock lock(s->mutex);
  return s->transcript();
}

bool SessionManager::replay_matches(const std::string& id) const {
  const json snap = snapshot(id);
  auto fresh = Session::make(snap.at("request"), opt_);
  for (const auto& mv : snap.at("moves")) fresh->record(mv);
  fresh->id = id;
  return fresh->view() == get(id);
}

std::vector<std::string> SessionManager::ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, s] : sessions_) out.push_back(id);
  return out;
}

// ---------------------------------------------------------------- HTTP

namespace {

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      send(res, 200, f(req));
    } catch (const std::exception& e) {
      const ErrorResponse err = error_response(e);
      send(res, err.status, err.body);
    }
  };
}

json body_of(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw ServiceError(422, "malformed", std::string("request body is not JSON: ") + e.what());
  }
}

}  // namespace

void mount_routes(httplib::Server& server, SessionManager& manager) {
  server.Get("/strategies", guarded([](const httplib::Request&) { return strategies_json(); }));
  server.Post("/games", guarded([&](const httplib::Request& req) {
                return manager.create(body_of(req));
              }));
  server.Get(R"(/games/([^/]+))", guarded([&](const httplib::Request& req) {
               return manager.get(req.matches[1]);
             }));
  server.Post(R"(/games/([^/]+)/moves)", guarded([&](const httplib::Request& req) {
                return manager.submit_move(req.matches[1], body_of(req));
              }));
  server.Post(R"(/games/([^/]+)/engine-move)", guarded([&](const httplib::Request& req) {
                return manager.engine_move(req.matches[1]);
              }));
  server.Get(R"(/games/([^/]+)/transcript)", guarded([&](const httplib::Request& req) {
               return manager.transcript(req.matches[1]);
             }));
  server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    send(res, res.status,
         {{"error", res.status == 404 ? "not-found" : "http-error"},
          {"detail", req.method + " " + req.path}});
  });
}

}  // namespace eflab
