#include "eflab/metric.hpp"

#include <numbers>

namespace eflab {

std::string to_string(NormKind n) { return n == NormKind::HS ? "HS" : "OP"; }

NormKind norm_kind_from(const std::string& s) {
  if (s == "HS" || s == "hs") return NormKind::HS;
  if (s == "OP" || s == "op") return NormKind::OP;
  throw InvalidParameter("norm must be HS or OP, got \"" + s + "\"");
}

double matrix_norm(const ComplexMatrix& x, NormKind n) {
  if (n == NormKind::HS) return hs_norm(x);
  return std::sqrt(std::max(0.0, hermitian_norm<double>(x.adjoint() * x)));
}

void ContinuousGameConfig::validate() const {
  if (l == 0 || m == 0) throw InvalidParameter("matrix dimensions must be positive");
  if (!(epsilon > 0)) throw InvalidParameter("epsilon must be positive");
  if (!(delta > 0) || delta > 1) throw InvalidParameter("delta must lie in (0, 1]");
}

std::string to_string(ClauseKind k) {
  switch (k) {
    case ClauseKind::Norm: return "norm";
    case ClauseKind::Product: return "product";
    case ClauseKind::Linear: return "linear";
    case ClauseKind::Adjoint: return "adjoint";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::DuplicatorWins: return "D";
    case Verdict::ChallengerWins: return "C";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

nlohmann::json to_json(const PayoffReport& r) {
  const auto& w = r.witness;
  return {{"max_violation", r.max_violation},
          {"witness",
           {{"clause", to_string(w.kind)},
            {"i", w.i},
            {"j", w.j},
            {"k", w.k},
            {"y", {w.y.real(), w.y.imag()}},
            {"z", {w.z.real(), w.z.imag()}}}},
          {"grid_slack", r.grid_slack},
          {"certified_bound", r.certified_bound},
          {"verdict", to_string(r.verdict)}};
}

double clause_value(const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b,
                    const ClauseWitness& w, NormKind n) {
  const std::size_t top = std::max({w.i, w.j, w.k});
  if (top >= a.size() || top >= b.size()) throw InvalidParameter("clause index out of range");
  auto side = [&](const std::vector<ComplexMatrix>& x) -> double {
    switch (w.kind) {
      case ClauseKind::Norm: return matrix_norm(x[w.i], n);
      case ClauseKind::Product: return matrix_norm(x[w.i] * x[w.j] - x[w.k], n);
      case ClauseKind::Linear: return matrix_norm(w.y * x[w.i] + w.z * x[w.j] - x[w.k], n);
      case ClauseKind::Adjoint: return matrix_norm(x[w.i].adjoint() - x[w.j], n);
    }
    return 0;
  };
  return std::abs(side(a) - side(b));
}

namespace {

constexpr double kBallSlack = 1e-9;

// Polar grid on the closed unit disk with covering radius delta: rings
// sqrt(2)·delta apart, points on each ring at most sqrt(2)·delta apart.
// Contains 0, ±1 and ±i.
std::vector<std::complex<double>> disk_grid(double delta) {
  const double h = std::sqrt(2.0) * delta;
  const auto rings = static_cast<std::size_t>(std::ceil(1.0 / h));
  std::vector<std::complex<double>> pts{0.0};
  for (std::size_t t = 1; t <= rings; ++t) {
    const double r = std::min(1.0, t * h);
    // A multiple of 4 so that ±1 and ±i lie on the outer ring.
    const auto count = 4 * static_cast<std::size_t>(std::ceil(std::numbers::pi * r / (2 * h)));
    for (std::size_t s = 0; s < count; ++s) pts.push_back(std::polar(r, 2 * std::numbers::pi * s / count));
  }
  return pts;
}

std::vector<ComplexMatrix> with_unit(const std::vector<ComplexMatrix>& x, std::size_t d,
                                     bool unital) {
  if (!unital) return x;
  std::vector<ComplexMatrix> out{identity(d)};
  out.insert(out.end(), x.begin(), x.end());
  return out;
}

void check_lists(const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b,
                 std::size_t l, std::size_t m) {
  if (a.size() != b.size())
    throw InvalidParameter("payoff needs equally many moves on both sides (" +
                           std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  auto check = [](const std::vector<ComplexMatrix>& xs, std::size_t d, const char* side) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i].rows() != static_cast<Eigen::Index>(d) || xs[i].cols() != xs[i].rows())
        throw InvalidParameter(std::string("move ") + std::to_string(i) + " on side " + side +
                               " is not " + std::to_string(d) + "x" + std::to_string(d));
      if (!xs[i].allFinite())
        throw IllegalPosition(std::string("move ") + std::to_string(i) + " on side " + side +
                              " has non-finite entries");
      const double n = op_norm(xs[i]);
      if (n > 1 + kBallSlack)
        throw IllegalPosition(std::string("move ") + std::to_string(i) + " on side " + side +
                              " has operator norm " + std::to_string(n) + " > 1");
    }
  };
  check(a, l, "1");
  check(b, m, "2");
}

struct Tracker {
  double best = 0;
  ClauseWitness witness;
  void offer(double v, const ClauseWitness& w) {
    if (v > best) {
      best = v;
      witness = w;
    }
  }
};

// Scalar-free clauses, evaluated exactly.
void exact_clauses(const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b,
                   NormKind n, Tracker& t,
                   double stop_at = std::numeric_limits<double>::infinity()) {
  const std::size_t k = a.size();
  for (std::size_t i = 0; i < k; ++i)
    t.offer(std::abs(matrix_norm(a[i], n) - matrix_norm(b[i], n)), {ClauseKind::Norm, i, 0, 0});
  if (t.best >= stop_at) return;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      t.offer(std::abs(matrix_norm(a[i].adjoint() - a[j], n) -
                       matrix_norm(b[i].adjoint() - b[j], n)),
              {ClauseKind::Adjoint, i, j, 0});
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (t.best >= stop_at) return;
      const ComplexMatrix pa = a[i] * a[j], pb = b[i] * b[j];
      for (std::size_t c = 0; c < k; ++c)
        t.offer(std::abs(matrix_norm(pa - a[c], n) - matrix_norm(pb - b[c], n)),
                {ClauseKind::Product, i, j, c});
    }
}

// Normalized HS Gram matrix <x_p, x_q> = (1/d) tr(x_p* x_q).
Eigen::MatrixXcd gram(const std::vector<ComplexMatrix>& x) {
  const auto k = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXcd g(k, k);
  for (Eigen::Index p = 0; p < k; ++p)
    for (Eigen::Index q = p; q < k; ++q) {
      const std::complex<double> v =
          (x[p].array().conjugate() * x[q].array()).sum() / static_cast<double>(x[p].rows());
      g(p, q) = v;
      g(q, p) = std::conj(v);
    }
  return g;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& g) {
  const auto e = hermitian_eigen<double>(g);
  Eigen::VectorXcd s(e.values.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = std::sqrt(std::max(0.0, e.values(i)));
  return e.vectors * s.asDiagonal() * e.vectors.adjoint();
}

ComplexMatrix sub3(const Eigen::MatrixXcd& g, std::size_t i, std::size_t j, std::size_t k) {
  const std::size_t idx[3] = {i, j, k};
  ComplexMatrix s(3, 3);
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) s(p, q) = g(idx[p], idx[q]);
  return s;
}

double quad(const ComplexMatrix& g, std::complex<double> y, std::complex<double> z) {
  const std::complex<double> v[3] = {y, z, -1.0};
  std::complex<double> s = 0;
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) s += std::conj(v[p]) * g(p, q) * v[q];
  return std::max(0.0, s.real());
}

}  // namespace

PayoffReport payoff_violation(const std::vector<ComplexMatrix>& a_in,
                              const std::vector<ComplexMatrix>& b_in,
                              const ContinuousGameConfig& cfg) {
  cfg.validate();
  check_lists(a_in, b_in, cfg.l, cfg.m);
  const auto a = with_unit(a_in, cfg.l, cfg.unital);
  const auto b = with_unit(b_in, cfg.m, cfg.unital);
  const std::size_t k = a.size();

  Tracker t;
  exact_clauses(a, b, cfg.norm, t);
  double certified = t.best;
  const double lipschitz = 4 * cfg.delta;
  const auto grid = disk_grid(cfg.delta);

  if (cfg.norm == NormKind::HS) {
    // ‖y x_i + z x_j − x_k‖_HS = ‖G^{1/2} v‖ with v = (y, z, −1) and G the
    // Gram matrix of (x_i, x_j, x_k), so each side is a norm on C^3 and
    // | ‖Xv‖ − ‖Yv‖ | ≤ ‖(X − Y) v‖, which is bounded over |y|,|z| ≤ 1 by
    // the entries of M = (X − Y)*(X − Y).
    const Eigen::MatrixXcd ga = gram(a), gb = gram(b);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j)
        for (std::size_t c = 0; c < k; ++c) {
          const ComplexMatrix sa = sub3(ga, i, j, c), sb = sub3(gb, i, j, c);
          const ComplexMatrix d = psd_sqrt(sa) - psd_sqrt(sb);
          const ComplexMatrix mm = d.adjoint() * d;
          const double bound = std::sqrt(std::max(
              0.0, mm(0, 0).real() + mm(1, 1).real() + mm(2, 2).real() +
                       2 * (std::abs(mm(0, 1)) + std::abs(mm(0, 2)) + std::abs(mm(1, 2)))));
          if (bound <= t.best) {
            certified = std::max(certified, bound);
            continue;
          }
          double local = 0;
          for (const auto& y : grid)
            for (const auto& z : grid) {
              const double v = std::abs(std::sqrt(quad(sa, y, z)) - std::sqrt(quad(sb, y, z)));
              local = std::max(local, v);
              t.offer(v, {ClauseKind::Linear, i, j, c, y, z});
            }
          certified = std::max(certified, std::min(bound, local + lipschitz));
        }
  } else {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j)
        for (std::size_t c = 0; c < k; ++c) {
          double local = 0;
          for (const auto& y : grid)
            for (const auto& z : grid) {
              const ComplexMatrix xa = y * a[i] + z * a[j] - a[c];
              const ComplexMatrix xb = y * b[i] + z * b[j] - b[c];
              const double v = std::abs(matrix_norm(xa, NormKind::OP) - matrix_norm(xb, NormKind::OP));
              local = std::max(local, v);
              t.offer(v, {ClauseKind::Linear, i, j, c, y, z});
            }
          certified = std::max(certified, local + lipschitz);
        }
  }

  PayoffReport r;
  r.max_violation = t.best;
  r.witness = t.witness;
  r.certified_bound = std::max(certified, t.best);
  r.grid_slack = r.certified_bound - r.max_violation;
  if (r.certified_bound <= cfg.epsilon)
    r.verdict = Verdict::DuplicatorWins;
  else if (r.max_violation > cfg.epsilon)
    r.verdict = Verdict::ChallengerWins;
  else
    r.verdict = Verdict::Inconclusive;
  return r;
}

double payoff_lower_bound(const std::vector<ComplexMatrix>& a_in,
                          const std::vector<ComplexMatrix>& b_in, NormKind n, bool unital,
                          double stop_at) {
  if (a_in.size() != b_in.size()) throw InvalidParameter("payoff needs equally many moves");
  if (a_in.empty()) return 0.0;
  const auto a = with_unit(a_in, a_in.front().rows(), unital);
  const auto b = with_unit(b_in, b_in.front().rows(), unital);
  Tracker t;
  exact_clauses(a, b, n, t, stop_at);
  const std::complex<double> s[5] = {0.0, 1.0, -1.0, {0.0, 1.0}, {0.0, -1.0}};
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i; j < a.size(); ++j)
      for (std::size_t c = 0; c < a.size(); ++c)
        for (const auto& y : s)
          for (const auto& z : s) {
            if (t.best >= stop_at) return t.best;
            t.offer(std::abs(matrix_norm(y * a[i] + z * a[j] - a[c], n) -
                             matrix_norm(y * b[i] + z * b[j] - b[c], n)),
                    {ClauseKind::Linear, i, j, c, y, z});
          }
  return t.best;
}

std::vector<ComplexMatrix> evenodd_challenger_moves(std::size_t m) {
  if (m == 0 || m % 2 != 0)
    throw InvalidParameter("evenodd moves need an even dimension, got " + std::to_string(m));
  const ComplexMatrix v = standard_partial_isometry(m);
  const ComplexMatrix vs = v.adjoint();
  const ComplexMatrix a3 = vs * v, a4 = v * vs;
  return {v, vs, a3, a4, a3 + a4, identity(m)};
}

ComplexMatrix pad_to(const ComplexMatrix& x, std::size_t d) {
  ComplexMatrix y = ComplexMatrix::Zero(d, d);
  const auto n = std::min<Eigen::Index>(x.rows(), static_cast<Eigen::Index>(d));
  y.topLeftCorner(n, n) = x.topLeftCorner(n, n);
  return y;
}

// ---------------------------------------------------------------- matrix games

MatrixGameState::MatrixGameState(ContinuousGameConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
}

MatrixGameState MatrixGameState::apply(const MatrixMove& mv) const {
  if (complete()) throw IllegalMove("game already finished");
  if (mv.side != 1 && mv.side != 2) throw IllegalMove("side must be 1 or 2");
  if (pending_ && pending_->side == mv.side)
    throw IllegalMove("Duplicator must answer in the other algebra");
  const auto d = static_cast<Eigen::Index>(dim(mv.side));
  if (mv.x.rows() != d || mv.x.cols() != d)
    throw IllegalMove("matrix must be " + std::to_string(d) + "x" + std::to_string(d));
  if (!mv.x.allFinite()) throw IllegalMove("matrix has non-finite entries");
  const double n = op_norm(mv.x);
  if (n > 1 + kBallSlack)
    throw IllegalMove("operator norm " + std::to_string(n) + " exceeds 1");
  MatrixGameState s = *this;
  if (!pending_) {
    s.pending_ = mv;
  } else {
    const MatrixMove& c = *pending_;
    s.a_.push_back(c.side == 1 ? c.x : mv.x);
    s.b_.push_back(c.side == 1 ? mv.x : c.x);
    s.pending_.reset();
  }
  return s;
}

PayoffReport matrix_game_result(const MatrixGameState& s) {
  if (!s.complete()) throw GameStateError("game not finished");
  return payoff_violation(s.a(), s.b(), s.config());
}

namespace {

class PaddingDuplicator : public MatrixStrategy {
 public:
  explicit PaddingDuplicator(std::size_t m) : m_(m) {}
  std::string name() const override { return "padding-duplicator"; }
  MatrixMove choose(const MatrixGameState& s) override {
    if (!s.pending()) throw GameStateError("padding duplicator asked to move on Challenger's turn");
    const int other = s.pending()->side == 1 ? 2 : 1;
    const std::size_t lo = std::min(s.dim(1), s.dim(2)), hi = std::max(s.dim(1), s.dim(2));
    if (lo != m_ || hi != m_ + 1)
      throw InvalidParameter("padding duplicator built for M_" + std::to_string(m_) + " vs M_" +
                             std::to_string(m_ + 1));
    return {other, pad_to(s.pending()->x, s.dim(other))};
  }

 private:
  std::size_t m_;
};

class EvenOddChallenger : public MatrixStrategy {
 public:
  std::string name() const override { return "evenodd-challenger"; }
  MatrixMove choose(const MatrixGameState& s) override {
    if (s.pending()) throw GameStateError("evenodd challenger asked to move on Duplicator's turn");
    const int side = s.dim(1) % 2 == 0 ? 1 : s.dim(2) % 2 == 0 ? 2 : 0;
    if (side == 0) throw InvalidParameter("evenodd challenger needs an even-dimensional side");
    const auto moves = evenodd_challenger_moves(s.dim(side));
    const std::size_t t = s.inning() - 1;
    return {side, t < moves.size() ? moves[t] : identity(s.dim(side))};
  }
};

class RandomMatrices : public MatrixStrategy {
 public:
  explicit RandomMatrices(std::uint64_t seed) : rng_(seed) {}
  std::string name() const override { return "random"; }
  MatrixMove choose(const MatrixGameState& s) override {
    const int side = s.pending() ? (s.pending()->side == 1 ? 2 : 1) : 1 + static_cast<int>(rng_() % 2);
    return {side, random_unit_ball(s.dim(side), rng_)};
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

std::shared_ptr<MatrixStrategy> padding_duplicator_strategy(std::size_t m) {
  if (m == 0) throw InvalidParameter("padding duplicator needs m >= 1");
  return std::make_shared<PaddingDuplicator>(m);
}

std::shared_ptr<MatrixStrategy> evenodd_challenger_strategy() {
  return std::make_shared<EvenOddChallenger>();
}

std::shared_ptr<MatrixStrategy> random_matrix_strategy(std::uint64_t seed) {
  return std::make_shared<RandomMatrices>(seed);
}

MatrixTranscript play_matrix_game(const ContinuousGameConfig& cfg, MatrixStrategy& challenger,
                                  MatrixStrategy& duplicator) {
  MatrixGameState s(cfg);
  MatrixTranscript t{cfg, {}, {}};
  while (!s.complete()) {
    MatrixStrategy& who = s.challenger_to_move() ? challenger : duplicator;
    const MatrixMove mv = who.choose(s);
    s = s.apply(mv);
    t.moves.push_back(mv);
  }
  t.report = matrix_game_result(s);
  return t;
}

nlohmann::json to_json(const ContinuousGameConfig& c) {
  return {{"l", c.l},         {"m", c.m},         {"n", c.innings}, {"epsilon", c.epsilon},
          {"norm", to_string(c.norm)}, {"delta", c.delta}, {"unital", c.unital}};
}

ContinuousGameConfig continuous_config_from_json(const nlohmann::json& j) {
  try {
    ContinuousGameConfig c;
    c.l = j.at("l").get<std::size_t>();
    c.m = j.at("m").get<std::size_t>();
    c.innings = j.at("n").get<std::size_t>();
    c.epsilon = j.at("epsilon").get<double>();
    c.norm = norm_kind_from(j.value("norm", std::string("HS")));
    c.delta = j.value("delta", 0.05);
    c.unital = j.value("unital", false);
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("malformed game config: ") + e.what());
  }
}

// ---------------------------------------------------------------- ψ

double psi_objective(const ComplexMatrix& x) {
  const ComplexMatrix p = x.adjoint() * x;
  const ComplexMatrix q = x * x.adjoint();
  const ComplexMatrix one = identity(x.rows());
  return std::max(hermitian_norm<double>(p - p * p), hermitian_norm<double>(p + q - one));
}

namespace {

struct Descent {
  double value;
  ComplexMatrix x;
  bool exhausted;
};

// Projected descent along the normalized central-difference gradient; the
// step doubles after a success and halves after a failure.
Descent descend(ComplexMatrix x, const PsiOptions& opt) {
  const Eigen::Index m = x.rows();
  double f = psi_objective(x);
  double step = opt.initial_step;
  ComplexMatrix g(m, m);
  for (std::size_t it = 0; it < opt.max_steps; ++it) {
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        for (const std::complex<double> dir : {std::complex<double>(1, 0), std::complex<double>(0, 1)}) {
          ComplexMatrix hi = x, lo = x;
          hi(i, j) += opt.fd_step * dir;
          lo(i, j) -= opt.fd_step * dir;
          const double d = (psi_objective(hi) - psi_objective(lo)) / (2 * opt.fd_step);
          if (dir.real() != 0)
            g(i, j).real(d);
          else
            g(i, j).imag(d);
        }
    const double gn = g.norm();
    if (gn == 0) return {f, x, false};
    while (true) {
      const ComplexMatrix cand = clip_to_unit_ball<double>(x - (step / gn) * g);
      const double fc = psi_objective(cand);
      if (fc < f) {
        x = cand;
        f = fc;
        step = std::min(2 * step, 1.0);
        break;
      }
      step /= 2;
      if (step < opt.min_step) return {f, x, false};
    }
  }
  return {f, x, true};
}

}  // namespace

PsiResult evaluate_psi(std::size_t m, const PsiOptions& opt) {
  if (m == 0) throw InvalidParameter("evaluate_psi: m must be positive");
  PsiResult r;
  r.seed = opt.seed;
  if (m % 2 == 0) {
    r.witness = standard_partial_isometry(m);
    r.value = psi_objective(r.witness);
    return r;
  }
  if (opt.restarts == 0) throw InvalidParameter("evaluate_psi: need at least one restart");
  r.upper_bound = true;
  r.value = std::numeric_limits<double>::infinity();
  std::mt19937_64 master(opt.seed);
  for (std::size_t s = 0; s < opt.restarts; ++s) {
    std::mt19937_64 rng(master());
    const Descent d = descend(random_unit_ball(m, rng), opt);
    r.budget_exhausted = r.budget_exhausted || d.exhausted;
    if (d.value < r.value) {
      r.value = d.value;
      r.witness = d.x;
    }
  }
  r.restarts = opt.restarts;
  return r;
}

// ---------------------------------------------------------------- permutations

double hamming_distance(const Permutation& p, const Permutation& q) {
  if (p.degree() == 0) return 0.0;
  return static_cast<double>(displacement(p, q)) / static_cast<double>(p.degree());
}

PayoffReport perm_payoff_violation(const std::vector<Permutation>& a,
                                   const std::vector<Permutation>& b, const PermGameConfig& cfg) {
  if (!(cfg.epsilon > 0)) throw InvalidParameter("epsilon must be positive");
  if (a.size() != b.size()) throw InvalidParameter("payoff needs equally many moves on both sides");
  for (const auto& p : a)
    if (p.degree() != cfg.m) throw InvalidParameter("side 1 permutations must have degree m");
  for (const auto& p : b)
    if (p.degree() != cfg.l) throw InvalidParameter("side 2 permutations must have degree l");
  auto dist = [&](const Permutation& p, const Permutation& q) {
    if (cfg.variant == PermPayoff::N2) return hamming_distance(p, q);
    return hs_norm(permutation_matrix(p) - permutation_matrix(q));
  };
  Tracker t;
  const std::size_t k = a.size();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const Permutation pa = a[i] * a[j], pb = b[i] * b[j];
      for (std::size_t c = 0; c < k; ++c)
        t.offer(std::abs(dist(pa, a[c]) - dist(pb, b[c])), {ClauseKind::Product, i, j, c});
    }
  PayoffReport r;
  r.max_violation = r.certified_bound = t.best;
  r.witness = t.witness;
  r.verdict = t.best < cfg.epsilon ? Verdict::DuplicatorWins : Verdict::ChallengerWins;
  return r;
}

nlohmann::json to_json(const PermGameConfig& c) {
  return {{"m", c.m}, {"l", c.l}, {"n", c.innings}, {"epsilon", c.epsilon},
          {"variant", c.variant == PermPayoff::N2 ? "N2" : "N3"}};
}

PermGameConfig perm_config_from_json(const nlohmann::json& j) {
  try {
    PermGameConfig c;
    c.m = j.at("m").get<std::size_t>();
    c.l = j.at("l").get<std::size_t>();
    c.innings = j.at("n").get<std::size_t>();
    c.epsilon = j.at("epsilon").get<double>();
    const auto v = j.value("variant", std::string("N2"));
    if (v != "N2" && v != "N3") throw InvalidParameter("variant must be N2 or N3");
    c.variant = v == "N2" ? PermPayoff::N2 : PermPayoff::N3;
    if (c.m == 0 || c.l == 0 || !(c.epsilon > 0)) throw InvalidParameter("bad permutation game config");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("malformed game config: ") + e.what());
  }
}

}  // namespace eflab
