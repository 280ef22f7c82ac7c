#include "eflab/game.hpp"

#include <algorithm>
#include <random>

#include "eflab/error.hpp"

namespace eflab {

// ---------------------------------------------------------------- rules

GameState::GameState(Graph g1, Graph g2, std::size_t innings)
    : g1_(std::make_shared<const Graph>(std::move(g1))),
      g2_(std::make_shared<const Graph>(std::move(g2))),
      n_(innings),
      used1_(g1_->vertex_count()),
      used2_(g2_->vertex_count()) {}

bool GameState::used(int graph, Vertex v) const {
  const auto& u = graph == 1 ? used1_ : used2_;
  return v < u.size() && u[v];
}

GameState GameState::with(const Move& m) const {
  GameState next = *this;
  (m.graph == 1 ? next.used1_ : next.used2_)[m.v] = true;
  if (!pending_) {
    next.pending_ = m;
  } else {
    const Move c = *pending_;
    next.picks_.emplace_back(c.graph == 1 ? c.v : m.v, c.graph == 1 ? m.v : c.v);
    next.pending_.reset();
  }
  return next;
}

std::vector<Move> legal_moves(const GameState& s) {
  if (s.complete()) throw GameStateError("game already finished");
  std::vector<Move> out;
  auto add = [&](int graph) {
    for (Vertex v = 0; v < s.graph(graph).vertex_count(); ++v)
      if (!s.used(graph, v)) out.push_back({graph, v});
  };
  if (s.pending()) {
    add(s.pending()->graph == 1 ? 2 : 1);
  } else {
    add(1);
    add(2);
  }
  return out;
}

GameState apply_move(const GameState& s, const Move& m) {
  if (s.complete()) throw IllegalMove("game already finished");
  if (m.graph != 1 && m.graph != 2) throw IllegalMove("graph index must be 1 or 2");
  if (m.v >= s.graph(m.graph).vertex_count())
    throw IllegalMove("vertex " + std::to_string(m.v) + " out of range in graph " +
                      std::to_string(m.graph));
  if (s.pending() && s.pending()->graph == m.graph)
    throw IllegalMove("Duplicator must answer in the other graph");
  if (s.used(m.graph, m.v))
    throw IllegalMove("repeat: vertex " + std::to_string(m.v) + " of graph " +
                      std::to_string(m.graph) + " was already chosen");
  return s.with(m);
}

bool is_over(const GameState& s) { return s.complete() || legal_moves(s).empty(); }

Outcome winner(const GameState& s) {
  if (s.complete()) {
    return {is_partial_isomorphism(s.g1(), s.g2(), s.picks()) ? Player::Duplicator
                                                             : Player::Challenger,
            "win-condition"};
  }
  if (legal_moves(s).empty()) return {opponent(s.to_move()), "no-move"};
  throw GameStateError("game not finished");
}

// ---------------------------------------------------------------- referee

Transcript play(const Graph& g1, const Graph& g2, std::size_t n, Strategy& challenger,
                Strategy& duplicator) {
  Transcript t{g1, g2, n, {}, Player::Duplicator, {}, std::nullopt};
  GameState s(g1, g2, n);
  while (!is_over(s)) {
    const Player side = s.to_move();
    Strategy& strat = side == Player::Challenger ? challenger : duplicator;
    const Move m = strat.choose(s);
    try {
      s = apply_move(s, m);
    } catch (const IllegalMove& e) {
      t.forfeit = TranscriptMove{side, m};
      t.winner = opponent(side);
      t.reason = std::string("forfeit: ") + e.what();
      return t;
    }
    t.moves.push_back({side, m});
  }
  const Outcome o = winner(s);
  t.winner = o.winner;
  t.reason = o.reason;
  return t;
}

Outcome replay(const Transcript& t) {
  GameState s(t.g1, t.g2, t.innings);
  for (const auto& tm : t.moves) {
    if (tm.by != s.to_move()) throw IllegalMove("transcript move out of turn");
    s = apply_move(s, tm.move);
  }
  if (t.forfeit) {
    bool illegal = false;
    try {
      apply_move(s, t.forfeit->move);
    } catch (const IllegalMove&) {
      illegal = true;
    }
    if (!illegal || t.forfeit->by != s.to_move())
      throw IllegalMove("recorded forfeit does not match the position");
    return {opponent(t.forfeit->by), t.reason};
  }
  return winner(s);
}

nlohmann::json to_json(const Transcript& t) {
  nlohmann::json moves = nlohmann::json::array();
  for (const auto& m : t.moves)
    moves.push_back({{"by", code(m.by)}, {"graph", m.move.graph}, {"v", m.move.v}});
  nlohmann::json j = {{"g1", to_json(t.g1)}, {"g2", to_json(t.g2)}, {"n", t.innings},
                      {"moves", moves},      {"winner", code(t.winner)}, {"reason", t.reason}};
  if (t.forfeit)
    j["forfeit"] = {{"by", code(t.forfeit->by)}, {"graph", t.forfeit->move.graph},
                    {"v", t.forfeit->move.v}};
  return j;
}

namespace {

Player player_from(const nlohmann::json& j) {
  const auto s = j.get<std::string>();
  if (s == "C") return Player::Challenger;
  if (s == "D") return Player::Duplicator;
  throw InvalidParameter("player must be \"C\" or \"D\"");
}

TranscriptMove move_from(const nlohmann::json& j) {
  return {player_from(j.at("by")), {j.at("graph").get<int>(), j.at("v").get<Vertex>()}};
}

}  // namespace

Transcript transcript_from_json(const nlohmann::json& j) {
  try {
    Transcript t{graph_from_json(j.at("g1")), graph_from_json(j.at("g2")),
                 j.at("n").get<std::size_t>(), {}, player_from(j.at("winner")),
                 j.value("reason", std::string{}), std::nullopt};
    for (const auto& m : j.at("moves")) t.moves.push_back(move_from(m));
    if (j.contains("forfeit")) t.forfeit = move_from(j["forfeit"]);
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("malformed transcript JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------- solver

namespace {

constexpr std::size_t kMaxSolverInnings = 7;
constexpr std::size_t kMaxSolverVertices = 64;

// Outcome once the chosen pairs already violate the win condition: only the
// no-move rule can still save Duplicator. u1, u2 count unused vertices at
// Challenger's turn, r innings remain.
bool broken_position_challenger_wins(std::size_t u1, std::size_t u2, std::size_t r) {
  return r <= std::min(u1, u2) || u1 != u2;
}

}  // namespace

Solver::Solver(Graph g1, Graph g2, std::size_t n, SolverOptions opt)
    : g1_(std::move(g1)), g2_(std::move(g2)), n_(n), opt_(opt) {
  if (n_ > kMaxSolverInnings) throw InvalidParameter("solver supports at most 7 innings");
  if (g1_.vertex_count() > kMaxSolverVertices || g2_.vertex_count() > kMaxSolverVertices)
    throw InvalidParameter("solver supports graphs with at most 64 vertices");
  if (opt_.symmetry_depth > 0 && opt_.automorphism_limit > 1) {
    aut1_ = automorphisms(g1_, opt_.automorphism_limit);
    aut2_ = automorphisms(g2_, opt_.automorphism_limit);
  }
}

Solver::Key Solver::encode(std::vector<Pair> pairs, int pending_graph,
                           std::uint8_t pending_v) const {
  std::sort(pairs.begin(), pairs.end());
  std::uint8_t bytes[16] = {};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    bytes[2 * i] = static_cast<std::uint8_t>(pairs[i].first + 1);
    bytes[2 * i + 1] = static_cast<std::uint8_t>(pairs[i].second + 1);
  }
  bytes[14] = static_cast<std::uint8_t>(pending_graph);
  bytes[15] = pending_v;
  Key k;
  for (int i = 0; i < 8; ++i) {
    k.lo |= std::uint64_t{bytes[i]} << (8 * i);
    k.hi |= std::uint64_t{bytes[8 + i]} << (8 * i);
  }
  return k;
}

Solver::Key Solver::key(const Position& p) const {
  const std::size_t depth = p.picks.size() + (p.pending_graph ? 1 : 0);
  if (depth > opt_.symmetry_depth || aut1_.empty() || aut2_.empty())
    return encode(p.picks, p.pending_graph, p.pending_v);
  // Minimum image under Aut(g1) x Aut(g2). Any set of automorphisms gives a
  // sound key: equal keys mean the positions are images of each other.
  Key best{~0ull, ~0ull};
  std::vector<Pair> img(p.picks.size());
  for (const auto& s1 : aut1_) {
    for (const auto& s2 : aut2_) {
      for (std::size_t i = 0; i < p.picks.size(); ++i)
        img[i] = {static_cast<std::uint8_t>(s1[p.picks[i].first]),
                  static_cast<std::uint8_t>(s2[p.picks[i].second])};
      std::uint8_t pv = 0;
      if (p.pending_graph)
        pv = static_cast<std::uint8_t>(p.pending_graph == 1 ? s1[p.pending_v] : s2[p.pending_v]);
      const Key k = encode(img, p.pending_graph, pv);
      if (k.hi < best.hi || (k.hi == best.hi && k.lo < best.lo)) best = k;
    }
  }
  return best;
}

bool Solver::consistent(const Position& p, std::uint8_t a, std::uint8_t b) const {
  for (const auto& [x, y] : p.picks)
    if (g1_.adjacent(x, a) != g2_.adjacent(y, b)) return false;
  return true;
}

bool Solver::challenger_node(Position& p) {
  if (p.picks.size() == n_) return false;
  if (++nodes_ > opt_.node_budget)
    throw BudgetExceeded("solver exceeded its budget of " + std::to_string(opt_.node_budget) +
                         " visited states");
  const Key k = key(p);
  if (auto it = memo_.find(k); it != memo_.end()) return it->second;
  bool result = false;
  for (int graph = 1; graph <= 2 && !result; ++graph) {
    const std::size_t m = graph == 1 ? g1_.vertex_count() : g2_.vertex_count();
    const std::uint64_t used = graph == 1 ? p.used1 : p.used2;
    for (std::size_t v = 0; v < m && !result; ++v) {
      if ((used >> v) & 1) continue;
      const std::uint64_t bit = std::uint64_t{1} << v;
      (graph == 1 ? p.used1 : p.used2) |= bit;
      p.pending_graph = graph;
      p.pending_v = static_cast<std::uint8_t>(v);
      result = duplicator_node(p);
      p.pending_graph = 0;
      (graph == 1 ? p.used1 : p.used2) &= ~bit;
    }
  }
  memo_.emplace(k, result);
  return result;
}

bool Solver::duplicator_node(Position& p) {
  if (++nodes_ > opt_.node_budget)
    throw BudgetExceeded("solver exceeded its budget of " + std::to_string(opt_.node_budget) +
                         " visited states");
  const bool last = p.picks.size() + 1 == n_;
  std::optional<Key> k;
  if (!last) {
    k = key(p);
    if (auto it = memo_.find(*k); it != memo_.end()) return it->second;
  }
  const int cg = p.pending_graph;
  const std::uint8_t cv = p.pending_v;
  const int dg = cg == 1 ? 2 : 1;
  const std::size_t m = dg == 1 ? g1_.vertex_count() : g2_.vertex_count();
  const std::size_t m1 = g1_.vertex_count(), m2 = g2_.vertex_count();
  bool challenger = true;
  for (std::size_t y = 0; y < m && challenger; ++y) {
    const std::uint64_t used = dg == 1 ? p.used1 : p.used2;
    if ((used >> y) & 1) continue;
    const auto a = static_cast<std::uint8_t>(cg == 1 ? cv : y);
    const auto b = static_cast<std::uint8_t>(cg == 1 ? y : cv);
    const std::size_t r = n_ - p.picks.size() - 1;
    if (!consistent(p, a, b)) {
      const std::size_t u1 = m1 - std::popcount(p.used1) - (dg == 1 ? 1 : 0);
      const std::size_t u2 = m2 - std::popcount(p.used2) - (dg == 2 ? 1 : 0);
      challenger = broken_position_challenger_wins(u1, u2, r);
      continue;
    }
    if (last) {
      challenger = false;
      break;
    }
    std::uint64_t& reply_used = dg == 1 ? p.used1 : p.used2;
    p.picks.emplace_back(a, b);
    reply_used |= std::uint64_t{1} << y;
    p.pending_graph = 0;
    challenger = challenger_node(p);
    p.picks.pop_back();
    reply_used &= ~(std::uint64_t{1} << y);
    p.pending_graph = cg;
    p.pending_v = cv;
  }
  if (k) memo_.emplace(*k, challenger);
  return challenger;
}

Solver::Position Solver::from_state(const GameState& s) const {
  if (!(s.g1() == g1_) || !(s.g2() == g2_) || s.innings() != n_)
    throw InvalidParameter("state belongs to a different game");
  Position p;
  for (auto [a, b] : s.picks()) {
    p.picks.emplace_back(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b));
    p.used1 |= std::uint64_t{1} << a;
    p.used2 |= std::uint64_t{1} << b;
  }
  if (s.pending()) {
    p.pending_graph = s.pending()->graph;
    p.pending_v = static_cast<std::uint8_t>(s.pending()->v);
    (p.pending_graph == 1 ? p.used1 : p.used2) |= std::uint64_t{1} << p.pending_v;
  }
  return p;
}

bool Solver::challenger_wins(Position& p) {
  bool ok = true;
  for (std::size_t i = 0; i < p.picks.size() && ok; ++i)
    for (std::size_t j = i + 1; j < p.picks.size() && ok; ++j)
      ok = g1_.adjacent(p.picks[i].first, p.picks[j].first) ==
           g2_.adjacent(p.picks[i].second, p.picks[j].second);
  if (!ok) {
    std::size_t u1 = g1_.vertex_count() - std::popcount(p.used1);
    std::size_t u2 = g2_.vertex_count() - std::popcount(p.used2);
    const std::size_t r = n_ - p.picks.size();
    if (!p.pending_graph) return broken_position_challenger_wins(u1, u2, r);
    // Duplicator answers (any unused vertex) or has none.
    const std::size_t ud = p.pending_graph == 1 ? u2 : u1;
    if (ud == 0) return true;
    (p.pending_graph == 1 ? u2 : u1) -= 1;
    return broken_position_challenger_wins(u1, u2, r - 1);
  }
  return p.pending_graph ? duplicator_node(p) : challenger_node(p);
}

Player Solver::winner() {
  Position p;
  return challenger_wins(p) ? Player::Challenger : Player::Duplicator;
}

Player Solver::value(const GameState& s) {
  if (s.complete()) return eflab::winner(s).winner;
  Position p = from_state(s);
  return challenger_wins(p) ? Player::Challenger : Player::Duplicator;
}

std::optional<Move> Solver::best_move(const GameState& s) {
  if (s.complete()) return std::nullopt;
  const auto moves = legal_moves(s);
  if (moves.empty()) return std::nullopt;
  const Player side = s.to_move();
  for (const Move& m : moves) {
    const GameState next = s.with(m);
    if (value(next) == side) return m;
  }
  return moves.front();
}

SolveResult solve(const Graph& g1, const Graph& g2, std::size_t n, SolverOptions opt) {
  auto solver = std::make_shared<Solver>(g1, g2, n, opt);
  const Player w = solver->winner();
  const std::uint64_t nodes = solver->nodes_visited();
  // The strategy shares the solver and its memo table.
  class Shared : public Strategy {
   public:
    explicit Shared(std::shared_ptr<Solver> s) : s_(std::move(s)) {}
    std::string name() const override { return "solver-optimal"; }
    Move choose(const GameState& st) override {
      std::lock_guard lock(mu_);
      auto m = s_->best_move(st);
      if (!m) throw GameStateError("no legal move");
      return *m;
    }

   private:
    std::shared_ptr<Solver> s_;
    std::mutex mu_;
  };
  return {w, std::make_shared<Shared>(std::move(solver)), nodes};
}

std::shared_ptr<Strategy> solver_strategy(const Graph& g1, const Graph& g2, std::size_t n,
                                          SolverOptions opt) {
  return solve(g1, g2, n, opt).strategy;
}

// ---------------------------------------------------------------- simple strategies

namespace {

class RandomStrategy : public Strategy {
 public:
  explicit RandomStrategy(std::uint64_t seed) : rng_(seed) {}
  std::string name() const override { return "random"; }
  Move choose(const GameState& s) override {
    const auto moves = legal_moves(s);
    if (moves.empty()) throw GameStateError("no legal move");
    return moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng_)];
  }

 private:
  std::mt19937_64 rng_;
};

class FirstMoveStrategy : public Strategy {
 public:
  std::string name() const override { return "first-move"; }
  Move choose(const GameState& s) override {
    const auto moves = legal_moves(s);
    if (moves.empty()) throw GameStateError("no legal move");
    return moves.front();
  }
};

}  // namespace

std::shared_ptr<Strategy> random_strategy(std::uint64_t seed) {
  return std::make_shared<RandomStrategy>(seed);
}

std::shared_ptr<Strategy> first_move_strategy() { return std::make_shared<FirstMoveStrategy>(); }

// ---------------------------------------------------------------- cycle duplicator

namespace {

std::size_t cycle_distance(std::size_t m, Vertex a, Vertex b) {
  const std::size_t d = a > b ? a - b : b - a;
  return std::min(d, m - d);
}

// Clockwise offsets of the chosen vertices from the first one, with the
// indices of the picks sorted by offset.
struct CyclicOrder {
  std::vector<std::size_t> offset;  // per pick
  std::vector<std::size_t> order;   // pick indices sorted by offset
};

CyclicOrder cyclic_order(std::size_t m, const std::vector<Vertex>& pts) {
  CyclicOrder c;
  for (Vertex v : pts) c.offset.push_back((v + m - pts.front()) % m);
  c.order.resize(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) c.order[i] = i;
  std::sort(c.order.begin(), c.order.end(),
            [&](std::size_t a, std::size_t b) { return c.offset[a] < c.offset[b]; });
  return c;
}

}  // namespace

CycleDuplicator::CycleDuplicator(std::size_t m, std::size_t k, std::size_t n)
    : m_(m), k_(k), n_(n) {
  if (n >= 62 || std::min(m, k) <= (std::size_t{1} << (n + 1)))
    throw InvalidParameter("cycle duplicator needs min(m,k) > 2^(n+1); got m=" +
                           std::to_string(m) + ", k=" + std::to_string(k) +
                           ", n=" + std::to_string(n));
}

bool CycleDuplicator::distance_invariant(std::size_t m, std::size_t k, std::size_t n,
                                         const PartialMap& picks) {
  if (picks.size() > n) return false;
  const std::size_t far = std::size_t{1} << (n - picks.size());
  for (std::size_t i = 0; i < picks.size(); ++i)
    for (std::size_t j = i + 1; j < picks.size(); ++j) {
      const auto da = cycle_distance(m, picks[i].first, picks[j].first);
      const auto db = cycle_distance(k, picks[i].second, picks[j].second);
      if (da != db && !(da > far && db > far)) return false;
    }
  return true;
}

bool CycleDuplicator::arc_invariant(std::size_t m, std::size_t k, std::size_t n,
                                    const PartialMap& picks) {
  if (picks.empty()) return true;
  if (picks.size() > n) return false;
  std::vector<Vertex> a, b;
  for (auto [x, y] : picks) {
    a.push_back(x);
    b.push_back(y);
  }
  const auto ca = cyclic_order(m, a), cb = cyclic_order(k, b);
  if (ca.order != cb.order) return false;
  const std::size_t longer = std::size_t{1} << (n - picks.size() + 1);
  for (std::size_t t = 0; t < ca.order.size(); ++t) {
    const std::size_t i = ca.order[t];
    const bool wrap = t + 1 == ca.order.size();
    const std::size_t j = wrap ? ca.order[0] : ca.order[t + 1];
    const std::size_t la = (wrap ? m : ca.offset[j]) - ca.offset[i];
    const std::size_t lb = (wrap ? k : cb.offset[j]) - cb.offset[i];
    if (la != lb && !(la >= longer && lb >= longer)) return false;
  }
  return true;
}

Move CycleDuplicator::choose(const GameState& s) {
  if (!s.pending()) throw GameStateError("cycle duplicator asked to move on Challenger's turn");
  if (s.g1().vertex_count() != m_ || s.g2().vertex_count() != k_)
    throw InvalidParameter("cycle duplicator built for different cycle lengths");
  const PartialMap& picks = s.picks();
  ++checks_;
  if (!arc_invariant(m_, k_, n_, picks) || !distance_invariant(m_, k_, n_, picks))
    throw std::logic_error("cycle duplicator invariant violated after inning " +
                           std::to_string(picks.size()));
  const Move c = *s.pending();
  const int reply_graph = c.graph == 1 ? 2 : 1;
  if (picks.empty()) return {reply_graph, 0};

  // "own" is the Challenger's cycle, "other" the one we answer on.
  const std::size_t own_len = c.graph == 1 ? m_ : k_;
  const std::size_t other_len = c.graph == 1 ? k_ : m_;
  std::vector<Vertex> own, other;
  for (auto [x, y] : picks) {
    own.push_back(c.graph == 1 ? x : y);
    other.push_back(c.graph == 1 ? y : x);
  }
  const auto co = cyclic_order(own_len, own), ct = cyclic_order(other_len, other);
  const std::size_t ox = (c.v + own_len - own.front()) % own_len;
  // Arc (i -> j) of the own cycle containing the Challenger's vertex.
  std::size_t t = 0;
  while (t + 1 < co.order.size() && co.offset[co.order[t + 1]] < ox) ++t;
  const std::size_t i = co.order[t];
  const bool wrap = t + 1 == co.order.size();
  const std::size_t j = wrap ? co.order[0] : co.order[t + 1];
  const std::size_t l1 = (wrap ? own_len : co.offset[j]) - co.offset[i];
  const std::size_t l2 = (wrap ? other_len : ct.offset[j]) - ct.offset[i];
  const std::size_t p = ox - co.offset[i];
  const std::size_t half = std::size_t{1} << (n_ - picks.size());
  std::size_t q;
  if (l1 == l2 || p < half) {
    q = p;
  } else if (l1 - p < half) {
    q = l2 - (l1 - p);
  } else {
    q = half;
  }
  return {reply_graph, (other[i] + q) % other_len};
}

std::shared_ptr<CycleDuplicator> cycle_duplicator_strategy(std::size_t m, std::size_t k,
                                                           std::size_t n) {
  return std::make_shared<CycleDuplicator>(m, k, n);
}

// ---------------------------------------------------------------- formula challenger

FormulaChallenger::FormulaChallenger(Graph g1, Graph g2, Formula f)
    : g1_(std::move(g1)), g2_(std::move(g2)), nnf_(negation_normal_form(f)) {
  if (!free_variables(f).empty()) throw FreeVariableError("formula challenger needs a sentence");
  if (evaluate(g1_, nnf_) == evaluate(g2_, nnf_))
    throw InvalidParameter("graphs agree on \"" + to_string(f) + "\"; no strategy to read off");
}

Move FormulaChallenger::choose(const GameState& s) {
  if (s.pending()) throw GameStateError("formula challenger asked to move on Duplicator's turn");
  const auto fallback = [&] {
    const auto moves = legal_moves(s);
    if (moves.empty()) throw GameStateError("no legal move");
    return moves.front();
  };
  // Replay the strategy through the completed innings; the first inning not
  // yet played is the move to make.
  Assignment env1, env2;
  std::size_t next_pick = 0;
  Formula f = nnf_;
  while (true) {
    const bool t1 = evaluate(g1_, f, env1);
    if (t1 == evaluate(g2_, f, env2)) return fallback();
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::And:
      case K::Or: {
        // Conjunction: the conjunct false on the false side. Disjunction: the
        // disjunct true on the true side. Either one still disagrees.
        const bool want = f.kind() == K::Or;
        const bool on_g1 = want == t1;
        const Graph& g = on_g1 ? g1_ : g2_;
        const Assignment& env = on_g1 ? env1 : env2;
        f = evaluate(g, f.left(), env) == want ? f.left() : f.right();
        continue;
      }
      case K::Exists:
      case K::Forall: {
        // Play where the existential is true / the universal is false.
        const bool exists = f.kind() == K::Exists;
        const int side = (exists == t1) ? 1 : 2;
        const Graph& g = side == 1 ? g1_ : g2_;
        Assignment& env = side == 1 ? env1 : env2;
        const std::string& x = f.first();
        const Formula body = f.body();
        std::optional<Vertex> w;
        for (Vertex v = 0; v < g.vertex_count() && !w; ++v) {
          Assignment trial = env;
          trial[x] = v;
          if (evaluate(g, body, trial) == exists) w = v;
        }
        if (!w) return fallback();
        const auto& picks = s.picks();
        std::optional<std::size_t> earlier;
        for (std::size_t i = 0; i < next_pick; ++i)
          if ((side == 1 ? picks[i].first : picks[i].second) == *w) earlier = i;
        std::size_t bind;
        if (earlier) {
          bind = *earlier;  // already chosen: bind without spending an inning
        } else if (next_pick < picks.size()) {
          if ((side == 1 ? picks[next_pick].first : picks[next_pick].second) != *w)
            return fallback();
          bind = next_pick++;
        } else {
          return {side, *w};
        }
        env1[x] = picks[bind].first;
        env2[x] = picks[bind].second;
        f = body;
        continue;
      }
      default:
        // A disagreeing atom: the chosen pairs already break the isomorphism.
        return fallback();
    }
  }
}

std::shared_ptr<FormulaChallenger> formula_challenger_strategy(const Graph& g1, const Graph& g2,
                                                               const Formula& f) {
  return std::make_shared<FormulaChallenger>(g1, g2, f);
}

}  // namespace eflab
