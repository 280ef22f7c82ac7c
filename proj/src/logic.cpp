#include "eflab/logic.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>
#include <utility>

#include "eflab/error.hpp"

namespace eflab {

// ---------------------------------------------------------------- AST

Formula Formula::make(Kind k, std::string x, std::string y, std::shared_ptr<const Node> l,
                      std::shared_ptr<const Node> r) {
  std::size_t size = 1 + (l ? l->size : 0) + (r ? r->size : 0);
  return Formula(std::make_shared<const Node>(
      Node{k, std::move(x), std::move(y), std::move(l), std::move(r), size}));
}

Formula Formula::equal(std::string x, std::string y) {
  return make(Kind::Equal, std::move(x), std::move(y), nullptr, nullptr);
}
Formula Formula::edge(std::string x, std::string y) {
  return make(Kind::Edge, std::move(x), std::move(y), nullptr, nullptr);
}
Formula Formula::negation(Formula f) { return make(Kind::Not, {}, {}, f.node_, nullptr); }
Formula Formula::conjunction(Formula l, Formula r) {
  return make(Kind::And, {}, {}, l.node_, r.node_);
}
Formula Formula::disjunction(Formula l, Formula r) {
  return make(Kind::Or, {}, {}, l.node_, r.node_);
}
Formula Formula::implication(Formula l, Formula r) {
  return make(Kind::Implies, {}, {}, l.node_, r.node_);
}
Formula Formula::exists(std::string var, Formula body) {
  return make(Kind::Exists, std::move(var), {}, body.node_, nullptr);
}
Formula Formula::forall(std::string var, Formula body) {
  return make(Kind::Forall, std::move(var), {}, body.node_, nullptr);
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  if (a.is_atom()) return a.first() == b.first() && a.second() == b.second();
  if (a.is_quantifier()) return a.first() == b.first() && a.body() == b.body();
  if (a.kind() == Formula::Kind::Not) return a.left() == b.left();
  return a.left() == b.left() && a.right() == b.right();
}

// ---------------------------------------------------------------- parser

namespace {

enum class Tok { Ident, Exists, Forall, Edge, LParen, RParen, Comma, Dot, Bang, Amp, Bar, Arrow,
                 Eq, Neq, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, column;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    const std::size_t l0 = line, c0 = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      std::string word(s.substr(i, j - i));
      Tok kind = Tok::Ident;
      if (word == "exists") {
        kind = Tok::Exists;
      } else if (word == "forall") {
        kind = Tok::Forall;
      } else if (word == "E") {
        std::size_t k = j;
        while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
        if (k < s.size() && s[k] == '(') kind = Tok::Edge;
      }
      out.push_back({kind, std::move(word), l0, c0});
      advance(j - i);
      continue;
    }
    auto two = [&](char next) { return i + 1 < s.size() && s[i + 1] == next; };
    Tok kind;
    std::size_t len = 1;
    switch (c) {
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case ',': kind = Tok::Comma; break;
      case '.': kind = Tok::Dot; break;
      case '&': kind = Tok::Amp; break;
      case '|': kind = Tok::Bar; break;
      case '=': kind = Tok::Eq; break;
      case '!':
        if (two('=')) {
          kind = Tok::Neq;
          len = 2;
        } else {
          kind = Tok::Bang;
        }
        break;
      case '-':
        if (!two('>')) throw ParseError("expected '->'", l0, c0);
        kind = Tok::Arrow;
        len = 2;
        break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", l0, c0);
    }
    out.push_back({kind, std::string(s.substr(i, len)), l0, c0});
    advance(len);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  Formula parse() {
    Formula f = formula();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const {
    const auto& t = peek();
    throw ParseError(msg.empty() ? "syntax error" : msg, t.line, t.column);
  }
  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what);
    ++pos_;
  }
  std::string ident() {
    if (peek().kind != Tok::Ident) fail("expected variable name");
    return take().text;
  }

  Formula formula() {
    if (peek().kind == Tok::Exists || peek().kind == Tok::Forall) return quantifier();
    return implication();
  }

  Formula quantifier() {
    const bool ex = take().kind == Tok::Exists;
    std::string var = ident();
    expect(Tok::Dot, "'.' after quantified variable");
    Formula body = formula();
    return ex ? Formula::exists(std::move(var), body) : Formula::forall(std::move(var), body);
  }

  Formula implication() {
    Formula l = disjunction();
    if (peek().kind == Tok::Arrow) {
      ++pos_;
      return Formula::implication(l, rhs_formula([this] { return implication(); }));
    }
    return l;
  }

  Formula disjunction() {
    Formula l = conjunction();
    while (peek().kind == Tok::Bar) {
      ++pos_;
      l = Formula::disjunction(l, rhs_formula([this] { return conjunction(); }));
    }
    return l;
  }

  Formula conjunction() {
    Formula l = unary();
    while (peek().kind == Tok::Amp) {
      ++pos_;
      l = Formula::conjunction(l, unary());
    }
    return l;
  }

  // A quantifier on the right of a binary operator swallows the rest.
  template <class Next>
  Formula rhs_formula(Next next) {
    if (peek().kind == Tok::Exists || peek().kind == Tok::Forall) return quantifier();
    return next();
  }

  Formula unary() {
    switch (peek().kind) {
      case Tok::Bang:
        ++pos_;
        return Formula::negation(unary());
      case Tok::LParen: {
        ++pos_;
        Formula f = formula();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Exists:
      case Tok::Forall:
        return quantifier();
      case Tok::Edge: {
        ++pos_;
        expect(Tok::LParen, "'(' after E");
        std::string x = ident();
        expect(Tok::Comma, "','");
        std::string y = ident();
        expect(Tok::RParen, "')'");
        return Formula::edge(std::move(x), std::move(y));
      }
      case Tok::Ident: {
        std::string x = take().text;
        if (peek().kind == Tok::Eq) {
          ++pos_;
          return Formula::equal(std::move(x), ident());
        }
        if (peek().kind == Tok::Neq) {
          ++pos_;
          return Formula::negation(Formula::equal(std::move(x), ident()));
        }
        fail("expected '=' or '!=' after variable");
      }
      default:
        fail("expected a formula");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

Formula parse_sentence(std::string_view text) {
  Formula f = parse_formula(text);
  auto free = free_variables(f);
  if (!free.empty()) throw FreeVariableError("free variable '" + *free.begin() + "' in sentence");
  return f;
}

// ---------------------------------------------------------------- printer

namespace {

int precedence(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Implies: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: return 0;
    default: return 4;
  }
}

// `tail` is true when nothing follows f before a closing delimiter, so a
// quantifier there can extend to the right without parentheses.
void print(const Formula& f, bool tail, std::string& out);

void print_operand(const Formula& f, bool parens, bool tail, std::string& out) {
  if (parens) out += '(';
  print(f, parens || tail, out);
  if (parens) out += ')';
}

void print(const Formula& f, bool tail, std::string& out) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Equal:
      out += f.first() + " = " + f.second();
      return;
    case K::Edge:
      out += "E(" + f.first() + "," + f.second() + ")";
      return;
    case K::Not: {
      const Formula c = f.left();
      if (c.kind() == K::Equal) {
        out += c.first() + " != " + c.second();
        return;
      }
      out += '!';
      print_operand(c, c.is_binary() || (c.is_quantifier() && !tail), tail, out);
      return;
    }
    case K::Exists:
    case K::Forall: {
      out += (f.kind() == K::Exists ? "exists " : "forall ") + f.first() + ". ";
      const Formula b = f.body();
      print_operand(b, b.is_binary(), tail, out);
      return;
    }
    default: {
      const int p = precedence(f);
      const Formula l = f.left(), r = f.right();
      const bool right_assoc = f.kind() == K::Implies;
      const int pl = precedence(l), pr = precedence(r);
      print_operand(l, l.is_quantifier() || (right_assoc ? pl <= p : pl < p), false, out);
      out += f.kind() == K::And ? " & " : f.kind() == K::Or ? " | " : " -> ";
      const bool rparens =
          r.is_quantifier() ? !tail : (right_assoc ? pr < p : pr <= p);
      print_operand(r, rparens, tail, out);
      return;
    }
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print(f, true, out);
  return out;
}

// ---------------------------------------------------------------- measures

namespace {

void collect_free(const Formula& f, std::vector<std::string>& bound, std::set<std::string>& out) {
  auto note = [&](const std::string& v) {
    if (std::find(bound.begin(), bound.end(), v) == bound.end()) out.insert(v);
  };
  if (f.is_atom()) {
    note(f.first());
    note(f.second());
  } else if (f.is_quantifier()) {
    bound.push_back(f.first());
    collect_free(f.body(), bound, out);
    bound.pop_back();
  } else {
    collect_free(f.left(), bound, out);
    if (f.is_binary()) collect_free(f.right(), bound, out);
  }
}

}  // namespace

std::set<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free(f, bound, out);
  return out;
}

std::size_t quantifier_depth(const Formula& f) {
  if (f.is_atom()) return 0;
  if (f.is_quantifier()) return 1 + quantifier_depth(f.body());
  if (f.kind() == Formula::Kind::Not) return quantifier_depth(f.left());
  return std::max(quantifier_depth(f.left()), quantifier_depth(f.right()));
}

// ---------------------------------------------------------------- evaluation

namespace {

struct Env {
  std::vector<std::pair<const std::string*, Vertex>> frames;
  const Assignment* outer;

  Vertex lookup(const std::string& v) const {
    for (auto it = frames.rbegin(); it != frames.rend(); ++it)
      if (*it->first == v) return it->second;
    if (auto it = outer->find(v); it != outer->end()) return it->second;
    throw FreeVariableError("unbound variable '" + v + "'");
  }
};

bool eval(const Graph& g, const Formula& f, Env& env) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Equal: return env.lookup(f.first()) == env.lookup(f.second());
    case K::Edge: return g.adjacent(env.lookup(f.first()), env.lookup(f.second()));
    case K::Not: return !eval(g, f.left(), env);
    case K::And: return eval(g, f.left(), env) && eval(g, f.right(), env);
    case K::Or: return eval(g, f.left(), env) || eval(g, f.right(), env);
    case K::Implies: return !eval(g, f.left(), env) || eval(g, f.right(), env);
    case K::Exists:
    case K::Forall: {
      const bool want = f.kind() == K::Exists;
      const Formula body = f.body();
      env.frames.emplace_back(&f.first(), 0);
      bool result = !want;
      for (Vertex v = 0; v < g.vertex_count(); ++v) {
        env.frames.back().second = v;
        if (eval(g, body, env) == want) {
          result = want;
          break;
        }
      }
      env.frames.pop_back();
      return result;
    }
  }
  return false;
}

}  // namespace

bool evaluate(const Graph& g, const Formula& f, const Assignment& env) {
  for (const auto& [name, v] : env)
    if (v >= g.vertex_count()) throw InvalidParameter("assignment of '" + name + "' out of range");
  Env e{{}, &env};
  return eval(g, f, e);
}

Formula negation_normal_form(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Equal:
    case K::Edge: return f;
    case K::And:
      return Formula::conjunction(negation_normal_form(f.left()), negation_normal_form(f.right()));
    case K::Or:
      return Formula::disjunction(negation_normal_form(f.left()), negation_normal_form(f.right()));
    case K::Implies:
      return Formula::disjunction(negation_normal_form(Formula::negation(f.left())),
                                  negation_normal_form(f.right()));
    case K::Exists: return Formula::exists(f.first(), negation_normal_form(f.body()));
    case K::Forall: return Formula::forall(f.first(), negation_normal_form(f.body()));
    case K::Not: break;
  }
  const Formula c = f.left();
  switch (c.kind()) {
    case K::Equal:
    case K::Edge: return f;
    case K::Not: return negation_normal_form(c.left());
    case K::And:
      return Formula::disjunction(negation_normal_form(Formula::negation(c.left())),
                                  negation_normal_form(Formula::negation(c.right())));
    case K::Or:
      return Formula::conjunction(negation_normal_form(Formula::negation(c.left())),
                                  negation_normal_form(Formula::negation(c.right())));
    case K::Implies:
      return Formula::conjunction(negation_normal_form(c.left()),
                                  negation_normal_form(Formula::negation(c.right())));
    case K::Exists:
      return Formula::forall(c.first(), negation_normal_form(Formula::negation(c.body())));
    case K::Forall:
      return Formula::exists(c.first(), negation_normal_form(Formula::negation(c.body())));
  }
  return f;
}

// ---------------------------------------------------------------- enumeration

namespace {

std::string var_name(std::size_t i) { return "x" + std::to_string(i); }

// count[v][s]: formulas of size s whose free variables lie in x0..x<v-1> and
// whose quantifier depth is at most max_depth - v.
std::vector<std::vector<std::uint64_t>> count_table(std::size_t max_depth, std::size_t max_size) {
  std::vector<std::vector<std::uint64_t>> n(max_depth + 1,
                                            std::vector<std::uint64_t>(max_size + 1, 0));
  auto sat_add = [](std::uint64_t a, std::uint64_t b) {
    return a > UINT64_MAX - b ? UINT64_MAX : a + b;
  };
  auto sat_mul = [](std::uint64_t a, std::uint64_t b) {
    return (a != 0 && b > UINT64_MAX / a) ? UINT64_MAX : a * b;
  };
  for (std::size_t s = 1; s <= max_size; ++s) {
    for (std::size_t v = 0; v <= max_depth; ++v) {
      std::uint64_t t = 0;
      if (s == 1) {
        t = 2 * v * v;
      } else {
        t = n[v][s - 1];
        for (std::size_t ls = 1; ls + 1 < s; ++ls)
          t = sat_add(t, sat_mul(3, sat_mul(n[v][ls], n[v][s - 1 - ls])));
        if (v < max_depth) t = sat_add(t, sat_mul(2, n[v + 1][s - 1]));
      }
      n[v][s] = t;
    }
  }
  return n;
}

class SentenceGenerator {
 public:
  SentenceGenerator(std::size_t max_depth, const std::function<bool(const Formula&)>& visit)
      : max_depth_(max_depth), visit_(visit) {}

  bool run(std::size_t max_size) {
    for (std::size_t s = 1; s <= max_size; ++s)
      if (!gen(s, 0, visit_)) return false;
    return true;
  }

 private:
  using Sink = std::function<bool(const Formula&)>;

  bool gen(std::size_t s, std::size_t v, const Sink& out) {
    using K = Formula::Kind;
    if (s == 0) return true;
    if (s == 1) {
      for (int kind = 0; kind < 2; ++kind)
        for (std::size_t i = 0; i < v; ++i)
          for (std::size_t j = 0; j < v; ++j) {
            Formula a = kind == 0 ? Formula::equal(var_name(i), var_name(j))
                                  : Formula::edge(var_name(i), var_name(j));
            if (!out(a)) return false;
          }
      return true;
    }
    if (!gen(s - 1, v, [&](const Formula& c) { return out(Formula::negation(c)); })) return false;
    for (K k : {K::And, K::Or, K::Implies}) {
      for (std::size_t ls = 1; ls + 1 < s; ++ls) {
        const bool ok = gen(ls, v, [&](const Formula& l) {
          return gen(s - 1 - ls, v, [&](const Formula& r) {
            Formula f = k == K::And ? Formula::conjunction(l, r)
                        : k == K::Or ? Formula::disjunction(l, r)
                                     : Formula::implication(l, r);
            return out(f);
          });
        });
        if (!ok) return false;
      }
    }
    if (v < max_depth_) {
      const std::string x = var_name(v);
      if (!gen(s - 1, v + 1, [&](const Formula& b) { return out(Formula::exists(x, b)); }))
        return false;
      if (!gen(s - 1, v + 1, [&](const Formula& b) { return out(Formula::forall(x, b)); }))
        return false;
    }
    return true;
  }

  std::size_t max_depth_;
  const Sink& visit_;
};

}  // namespace

std::uint64_t count_sentences(std::size_t max_depth, std::size_t max_size) {
  const auto n = count_table(max_depth, max_size);
  std::uint64_t total = 0;
  for (std::size_t s = 1; s <= max_size; ++s)
    total = total > UINT64_MAX - n[0][s] ? UINT64_MAX : total + n[0][s];
  return total;
}

void for_each_sentence(std::size_t max_depth, std::size_t max_size,
                       const std::function<bool(const Formula&)>& visit) {
  SentenceGenerator(max_depth, visit).run(max_size);
}

std::vector<Formula> enumerate_sentences(std::size_t max_depth, std::size_t max_size,
                                         const EnumerationLimits& limits) {
  if (max_depth > limits.max_depth || max_size > limits.max_size) {
    throw InvalidParameter("enumeration bounds depth " + std::to_string(max_depth) + ", size " +
                           std::to_string(max_size) + " exceed the limit (depth " +
                           std::to_string(limits.max_depth) + ", size " +
                           std::to_string(limits.max_size) + ")");
  }
  const std::uint64_t total = count_sentences(max_depth, max_size);
  if (total > limits.max_sentences) {
    throw InvalidParameter("enumeration would produce " + std::to_string(total) +
                           " sentences, more than the limit of " +
                           std::to_string(limits.max_sentences) +
                           "; use for_each_sentence to stream them");
  }
  std::vector<Formula> out;
  out.reserve(total);
  for_each_sentence(max_depth, max_size, [&](const Formula& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------- distinguishing

namespace {

// Truth tables of one formula over both graphs, for all assignments of the
// variables in scope. Assignment index: sum x_i * m^i.
struct Signature {
  std::vector<std::uint64_t> bits;
  bool operator==(const Signature& o) const { return bits == o.bits; }
};

struct SignatureHash {
  std::size_t operator()(const Signature& s) const {
    std::size_t h = 1469598103934665603ull;
    for (auto w : s.bits) h = (h ^ w) * 1099511628211ull + (h >> 29);
    return h;
  }
};

class TableLayout {
 public:
  TableLayout(std::size_t m1, std::size_t m2, std::size_t vars) : m1_(m1), m2_(m2) {
    n1_ = ipow(m1, vars);
    n2_ = ipow(m2, vars);
    words_ = (n1_ + n2_ + 63) / 64;
  }
  std::size_t words() const { return words_; }
  std::size_t n1() const { return n1_; }
  std::size_t n2() const { return n2_; }
  static std::size_t ipow(std::size_t b, std::size_t e) {
    std::size_t r = 1;
    while (e--) r *= b;
    return r;
  }
  bool get(const Signature& s, std::size_t bit) const { return (s.bits[bit >> 6] >> (bit & 63)) & 1; }
  void set(Signature& s, std::size_t bit) const { s.bits[bit >> 6] |= std::uint64_t{1} << (bit & 63); }
  void mask(Signature& s) const {
    const std::size_t total = n1_ + n2_;
    if (total % 64) s.bits.back() &= (std::uint64_t{1} << (total % 64)) - 1;
  }

 private:
  std::size_t m1_, m2_, n1_, n2_, words_;
};

class DistinguishSearch {
 public:
  DistinguishSearch(const Graph& g1, const Graph& g2, std::size_t depth, const DistinguishOptions& opt)
      : g1_(g1), g2_(g2), depth_(depth), opt_(opt) {
    for (std::size_t v = 0; v <= depth; ++v)
      layouts_.emplace_back(g1.vertex_count(), g2.vertex_count(), v);
    reps_.assign(depth + 1, std::vector<std::vector<Entry>>(opt.max_size + 1));
    seen_.resize(depth + 1);
  }

  std::optional<Formula> run() {
    for (std::size_t s = 1; s <= opt_.max_size; ++s) {
      for (std::size_t v = depth_ + 1; v-- > 0;) {
        build(s, v);
        if (found_) return found_;
      }
    }
    return std::nullopt;
  }

 private:
  struct Entry {
    Formula f;
    Signature sig;
  };

  void offer(std::size_t s, std::size_t v, const Formula& f, Signature sig) {
    if (found_) return;
    if (seen_[v].size() >= opt_.max_representatives) return;
    if (!seen_[v].insert(sig).second) return;
    if (v == 0) {
      const auto& L = layouts_[0];
      if (L.get(sig, 0) != L.get(sig, 1)) {
        found_ = f;
        return;
      }
    }
    reps_[v][s].push_back({f, std::move(sig)});
  }

  Signature atom(std::size_t v, bool edge, std::size_t i, std::size_t j) const {
    const auto& L = layouts_[v];
    Signature s{std::vector<std::uint64_t>(L.words(), 0)};
    auto fill = [&](const Graph& g, std::size_t count, std::size_t offset) {
      const std::size_t m = g.vertex_count();
      for (std::size_t idx = 0; idx < count; ++idx) {
        const std::size_t a = (idx / TableLayout::ipow(m, i)) % m;
        const std::size_t b = (idx / TableLayout::ipow(m, j)) % m;
        if (edge ? g.adjacent(a, b) : a == b) L.set(s, offset + idx);
      }
    };
    fill(g1_, L.n1(), 0);
    fill(g2_, L.n2(), L.n1());
    return s;
  }

  // Quantify away x<v> from a signature over v+1 variables.
  Signature quantify(std::size_t v, const Signature& inner, bool exists) const {
    const auto& Lin = layouts_[v + 1];
    const auto& Lout = layouts_[v];
    Signature s{std::vector<std::uint64_t>(Lout.words(), 0)};
    auto fold = [&](const Graph& g, std::size_t count, std::size_t in_off, std::size_t out_off) {
      const std::size_t m = g.vertex_count();
      for (std::size_t base = 0; base < count; ++base) {
        bool acc = !exists;
        for (std::size_t x = 0; x < m; ++x) {
          const bool b = Lin.get(inner, in_off + base + x * count);
          if (b == exists) {
            acc = exists;
            break;
          }
        }
        if (acc) Lout.set(s, out_off + base);
      }
    };
    fold(g1_, Lout.n1(), 0, 0);
    fold(g2_, Lout.n2(), Lin.n1(), Lout.n1());
    return s;
  }

  void build(std::size_t s, std::size_t v) {
    using K = Formula::Kind;
    const auto& L = layouts_[v];
    if (s == 1) {
      for (int kind = 0; kind < 2; ++kind)
        for (std::size_t i = 0; i < v; ++i)
          for (std::size_t j = 0; j < v; ++j) {
            Formula f = kind == 0 ? Formula::equal(var_name(i), var_name(j))
                                  : Formula::edge(var_name(i), var_name(j));
            offer(s, v, f, atom(v, kind == 1, i, j));
          }
      return;
    }
    for (std::size_t idx = 0; idx < reps_[v][s - 1].size(); ++idx) {
      const Entry& c = reps_[v][s - 1][idx];
      Signature sig = c.sig;
      for (auto& w : sig.bits) w = ~w;
      L.mask(sig);
      offer(s, v, Formula::negation(c.f), std::move(sig));
    }
    for (K k : {K::And, K::Or, K::Implies}) {
      for (std::size_t ls = 1; ls + 1 < s; ++ls) {
        const std::size_t rs = s - 1 - ls;
        for (std::size_t a = 0; a < reps_[v][ls].size(); ++a) {
          for (std::size_t b = 0; b < reps_[v][rs].size(); ++b) {
            if (found_) return;
            const Entry& l = reps_[v][ls][a];
            const Entry& r = reps_[v][rs][b];
            Signature sig{std::vector<std::uint64_t>(L.words())};
            for (std::size_t w = 0; w < L.words(); ++w) {
              const auto x = l.sig.bits[w], y = r.sig.bits[w];
              sig.bits[w] = k == K::And ? (x & y) : k == K::Or ? (x | y) : (~x | y);
            }
            L.mask(sig);
            if (seen_[v].count(sig)) continue;
            Formula f = k == K::And ? Formula::conjunction(l.f, r.f)
                        : k == K::Or ? Formula::disjunction(l.f, r.f)
                                     : Formula::implication(l.f, r.f);
            offer(s, v, f, std::move(sig));
          }
        }
      }
    }
    if (v < depth_) {
      const std::string x = var_name(v);
      for (bool ex : {true, false}) {
        for (std::size_t idx = 0; idx < reps_[v + 1][s - 1].size(); ++idx) {
          const Entry& c = reps_[v + 1][s - 1][idx];
          Formula f = ex ? Formula::exists(x, c.f) : Formula::forall(x, c.f);
          offer(s, v, f, quantify(v, c.sig, ex));
        }
      }
    }
  }

  const Graph& g1_;
  const Graph& g2_;
  std::size_t depth_;
  DistinguishOptions opt_;
  std::vector<TableLayout> layouts_;
  std::vector<std::vector<std::vector<Entry>>> reps_;
  std::vector<std::unordered_set<Signature, SignatureHash>> seen_;
  std::optional<Formula> found_;
};

}  // namespace

std::optional<Formula> find_distinguishing_sentence(const Graph& g1, const Graph& g2,
                                                    std::size_t max_depth,
                                                    const DistinguishOptions& opt) {
  if (max_depth > 4) throw InvalidParameter("distinguishing search depth is limited to 4");
  if (g1.vertex_count() == 0 || g2.vertex_count() == 0)
    throw InvalidParameter("graphs must be nonempty");
  return DistinguishSearch(g1, g2, max_depth, opt).run();
}

}  // namespace eflab
