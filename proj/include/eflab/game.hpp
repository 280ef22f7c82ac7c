#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "eflab/graph.hpp"
#include "eflab/logic.hpp"

namespace eflab {

enum class Player { Challenger, Duplicator };

inline Player opponent(Player p) {
  return p == Player::Challenger ? Player::Duplicator : Player::Challenger;
}
inline const char* code(Player p) { return p == Player::Challenger ? "C" : "D"; }

/// A vertex choice in graph 1 or graph 2.
struct Move {
  int graph = 1;
  Vertex v = 0;
  friend bool operator==(const Move&, const Move&) = default;
  friend auto operator<=>(const Move&, const Move&) = default;
};

/// Position in the discrete game on (g1, g2) with n innings. Value type;
/// transitions return new states.
class GameState {
 public:
  GameState(Graph g1, Graph g2, std::size_t innings);

  const Graph& g1() const { return *g1_; }
  const Graph& g2() const { return *g2_; }
  const Graph& graph(int index) const { return index == 1 ? *g1_ : *g2_; }
  std::size_t innings() const { return n_; }
  const PartialMap& picks() const { return picks_; }
  const std::optional<Move>& pending() const { return pending_; }
  /// 1-based inning currently being played.
  std::size_t inning() const { return picks_.size() + 1; }
  Player to_move() const { return pending_ ? Player::Duplicator : Player::Challenger; }

  /// All n innings played.
  bool complete() const { return picks_.size() == n_ && !pending_; }
  bool used(int graph, Vertex v) const;

  GameState with(const Move& m) const;

 private:
  std::shared_ptr<const Graph> g1_, g2_;
  std::size_t n_;
  PartialMap picks_;
  std::optional<Move> pending_;
  std::vector<bool> used1_, used2_;
};

/// Legal moves in (graph, vertex) order. Empty means the side to move loses.
/// Throws GameStateError once all innings are played.
std::vector<Move> legal_moves(const GameState& s);

/// Throws IllegalMove (with the reason) unless m is legal.
GameState apply_move(const GameState& s, const Move& m);

bool is_over(const GameState& s);

struct Outcome {
  Player winner;
  std::string reason;  // "win-condition" | "no-move"
};

/// Duplicator wins a complete game iff the picks form a partial isomorphism.
/// A side without a legal move loses. Throws GameStateError mid-game.
Outcome winner(const GameState& s);

/// A player's move-selection rule. Implementations may keep bookkeeping and
/// are not required to be thread-safe.
class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual std::string name() const = 0;
  virtual Move choose(const GameState& s) = 0;
};

struct TranscriptMove {
  Player by;
  Move move;
};

struct Transcript {
  Graph g1, g2;
  std::size_t innings = 0;
  std::vector<TranscriptMove> moves;
  Player winner = Player::Duplicator;
  std::string reason;
  /// Illegal move that ended the game, if any.
  std::optional<TranscriptMove> forfeit;
};

/// Referee: alternates the two strategies from the initial position. An
/// illegal move forfeits the game.
Transcript play(const Graph& g1, const Graph& g2, std::size_t n, Strategy& challenger,
                Strategy& duplicator);

/// Replays the legal moves and returns the resulting outcome, honouring a
/// recorded forfeit.
Outcome replay(const Transcript& t);

nlohmann::json to_json(const Transcript& t);
Transcript transcript_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------- solver

struct SolverOptions {
  std::uint64_t node_budget = 100'000'000;
  /// Automorphisms per graph used to canonicalize shallow positions.
  std::size_t automorphism_limit = 512;
  /// Positions with at most this many chosen vertices are keyed up to symmetry.
  std::size_t symmetry_depth = 2;
};

/// Backward induction over the game tree with a memo table. Budget overruns
/// raise BudgetExceeded; no answer is ever guessed.
class Solver {
 public:
  Solver(Graph g1, Graph g2, std::size_t n, SolverOptions opt = {});

  Player winner();
  /// Winner under optimal play from s (same graphs and innings).
  Player value(const GameState& s);
  /// Lowest winning move for the side to move, or the lowest legal move when
  /// that side is lost. nullopt when no move exists.
  std::optional<Move> best_move(const GameState& s);

  std::uint64_t nodes_visited() const { return nodes_; }
  std::size_t memo_size() const { return memo_.size(); }

 private:
  struct Key {
    std::uint64_t lo = 0, hi = 0;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<std::uint64_t>{}(k.lo * 0x9E3779B97F4A7C15ull ^ (k.hi + 0x632BE59BD9B4E019ull));
    }
  };
  using Pair = std::pair<std::uint8_t, std::uint8_t>;

  struct Position {
    std::vector<Pair> picks;
    std::uint64_t used1 = 0, used2 = 0;
    int pending_graph = 0;  // 0 = none
    std::uint8_t pending_v = 0;
  };

  Position from_state(const GameState& s) const;
  bool challenger_wins(Position& p);
  bool challenger_node(Position& p);
  bool duplicator_node(Position& p);
  bool consistent(const Position& p, std::uint8_t a, std::uint8_t b) const;
  Key key(const Position& p) const;
  Key encode(std::vector<Pair> pairs, int pending_graph, std::uint8_t pending_v) const;

  Graph g1_, g2_;
  std::size_t n_;
  SolverOptions opt_;
  std::vector<std::vector<Vertex>> aut1_, aut2_;
  std::unordered_map<Key, bool, KeyHash> memo_;
  std::uint64_t nodes_ = 0;
};

struct SolveResult {
  Player winner;
  /// Optimal strategy for the winner.
  std::shared_ptr<Strategy> strategy;
  std::uint64_t nodes = 0;
};

SolveResult solve(const Graph& g1, const Graph& g2, std::size_t n, SolverOptions opt = {});

// ---------------------------------------------------------------- strategies

/// Optimal play for whichever side calls it, backed by a shared solver.
std::shared_ptr<Strategy> solver_strategy(const Graph& g1, const Graph& g2, std::size_t n,
                                          SolverOptions opt = {});

std::shared_ptr<Strategy> random_strategy(std::uint64_t seed);

/// Always plays the lowest legal move.
std::shared_ptr<Strategy> first_move_strategy();

/// Duplicator on the cycles C_m (graph 1) and C_k (graph 2) with n innings.
/// Requires min(m, k) > 2^(n+1); refuses construction otherwise.
///
/// Keeps the chosen vertices in the same cyclic order on both cycles; after j
/// innings each pair of corresponding arcs between consecutive chosen
/// vertices is either equally long or both at least 2^(n-j+1) long. A
/// Challenger vertex at offset p on an arc is answered at offset p when it
/// is within 2^(n-j) of the arc's start, symmetrically near the arc's end,
/// and otherwise 2^(n-j) into the corresponding long arc.
class CycleDuplicator : public Strategy {
 public:
  CycleDuplicator(std::size_t m, std::size_t k, std::size_t n);
  std::string name() const override { return "cycle-duplicator"; }
  Move choose(const GameState& s) override;

  /// Distance form of the invariant after picks.size() innings: for all i, j
  /// either d(a_i,a_j) = d(b_i,b_j) or both exceed 2^(n - picks.size()).
  static bool distance_invariant(std::size_t m, std::size_t k, std::size_t n,
                                 const PartialMap& picks);
  /// Arc form of the invariant (stronger; implies the distance form).
  static bool arc_invariant(std::size_t m, std::size_t k, std::size_t n, const PartialMap& picks);

  std::size_t checks() const { return checks_; }

 private:
  std::size_t m_, k_, n_;
  std::size_t checks_ = 0;
};

std::shared_ptr<CycleDuplicator> cycle_duplicator_strategy(std::size_t m, std::size_t k,
                                                           std::size_t n);

/// Challenger strategy read off a sentence on which the graphs disagree:
/// play the witness of a true existential or the counterexample of a false
/// universal, recursing through the negation normal form. Wins within
/// quantifier_depth(f) innings against any Duplicator.
class FormulaChallenger : public Strategy {
 public:
  FormulaChallenger(Graph g1, Graph g2, Formula f);
  std::string name() const override { return "formula-challenger"; }
  Move choose(const GameState& s) override;
  const Formula& sentence() const { return nnf_; }

 private:
  Graph g1_, g2_;
  Formula nnf_;
};

std::shared_ptr<FormulaChallenger> formula_challenger_strategy(const Graph& g1, const Graph& g2,
                                                               const Formula& f);

}  // namespace eflab
