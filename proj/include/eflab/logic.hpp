#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "eflab/graph.hpp"

namespace eflab {

/// First-order formula over the signature {=, E}. Nodes are shared and
/// immutable, so copies are cheap and safe across threads.
class Formula {
 public:
  enum class Kind : std::uint8_t { Equal, Edge, Not, And, Or, Implies, Exists, Forall };

  static Formula equal(std::string x, std::string y);
  static Formula edge(std::string x, std::string y);
  static Formula negation(Formula f);
  static Formula conjunction(Formula l, Formula r);
  static Formula disjunction(Formula l, Formula r);
  static Formula implication(Formula l, Formula r);
  static Formula exists(std::string var, Formula body);
  static Formula forall(std::string var, Formula body);

  Kind kind() const { return node_->kind; }
  bool is_atom() const { return kind() == Kind::Equal || kind() == Kind::Edge; }
  bool is_binary() const {
    return kind() == Kind::And || kind() == Kind::Or || kind() == Kind::Implies;
  }
  bool is_quantifier() const { return kind() == Kind::Exists || kind() == Kind::Forall; }

  /// Atom arguments, or the bound variable of a quantifier (first()).
  const std::string& first() const { return node_->x; }
  const std::string& second() const { return node_->y; }

  /// Operand of Not / body of a quantifier / left operand of a connective.
  Formula left() const { return Formula(node_->l); }
  Formula right() const { return Formula(node_->r); }
  Formula body() const { return Formula(node_->l); }

  /// Number of AST nodes; atoms count as one.
  std::size_t size() const { return node_->size; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    std::string x, y;
    std::shared_ptr<const Node> l, r;
    std::size_t size;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Kind k, std::string x, std::string y, std::shared_ptr<const Node> l,
                      std::shared_ptr<const Node> r);

  std::shared_ptr<const Node> node_;
};

/// Variable assignment used by evaluate().
using Assignment = std::map<std::string, Vertex, std::less<>>;

/// Parse a formula (free variables allowed). Grammar:
///   formula := 'exists' ID '.' formula | 'forall' ID '.' formula | imp
///   imp     := or ('->' imp)?
///   or      := and ('|' and)*
///   and     := unary ('&' unary)*
///   unary   := '!' unary | '(' formula ')' | 'E' '(' ID ',' ID ')'
///            | ID '=' ID | ID '!=' ID | quantifier
/// A quantifier body extends as far right as possible.
Formula parse_formula(std::string_view text);

/// As parse_formula, but rejects free variables with FreeVariableError.
Formula parse_sentence(std::string_view text);

/// Canonical text; parse(print(f)) == f.
std::string to_string(const Formula& f);

std::set<std::string> free_variables(const Formula& f);

std::size_t quantifier_depth(const Formula& f);

/// Tarskian truth in g. Quantifiers range over all vertices, so the cost is
/// O(m^depth * size). Throws FreeVariableError on an unbound variable.
bool evaluate(const Graph& g, const Formula& f, const Assignment& env = {});

/// Negation normal form: negations only on atoms, no implications.
Formula negation_normal_form(const Formula& f);

struct EnumerationLimits {
  std::size_t max_depth = 3;
  std::size_t max_size = 9;
  /// Largest list enumerate_sentences() will materialize.
  std::size_t max_sentences = 2'000'000;
};

/// Number of sentences within the bounds (closed form count, no generation).
std::uint64_t count_sentences(std::size_t max_depth, std::size_t max_size);

/// Visits all sentences with quantifier depth <= max_depth and at most
/// max_size nodes, ordered by size and then by the structural code
/// (kind, left-operand size, left operand, right operand). The quantifier at
/// nesting level i binds x<i>, so alpha-variants appear once. Stops early when
/// the visitor returns false.
void for_each_sentence(std::size_t max_depth, std::size_t max_size,
                       const std::function<bool(const Formula&)>& visit);

/// Materialized for_each_sentence. Refuses (InvalidParameter) when the count
/// exceeds limits.max_sentences.
std::vector<Formula> enumerate_sentences(std::size_t max_depth, std::size_t max_size,
                                         const EnumerationLimits& limits = {});

struct DistinguishOptions {
  std::size_t max_size = 12;
  /// Cap on distinct representative formulas kept per scope.
  std::size_t max_representatives = 200'000;
};

/// A sentence of quantifier depth <= max_depth and minimal size on which g1
/// and g2 disagree, or nullopt when none exists up to opt.max_size. Formulas
/// are built bottom-up in enumeration order, keeping one representative per
/// pair of truth tables (over g1 and over g2), so the search covers the whole
/// enumeration at a fraction of its cost.
std::optional<Formula> find_distinguishing_sentence(const Graph& g1, const Graph& g2,
                                                    std::size_t max_depth,
                                                    const DistinguishOptions& opt = {});

}  // namespace eflab
