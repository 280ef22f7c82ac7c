#pragma once

#include <complex>
#include <limits>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "eflab/matrix.hpp"

namespace eflab {

enum class NormKind { HS, OP };

std::string to_string(NormKind n);
NormKind norm_kind_from(const std::string& s);

/// Norm of a square matrix. OP is computed from the spectrum of x*x.
double matrix_norm(const ComplexMatrix& x, NormKind n);

/// Game on M_l (side 1) against M_m (side 2).
struct ContinuousGameConfig {
  std::size_t l = 2, m = 2;
  std::size_t innings = 1;
  double epsilon = 0.1;
  NormKind norm = NormKind::HS;
  /// Covering radius of the scalar grid on the unit disk.
  double delta = 0.05;
  /// Adjoin the unit as a constant at index 0 of both lists.
  bool unital = false;

  void validate() const;
};

enum class ClauseKind { Norm, Product, Linear, Adjoint };
std::string to_string(ClauseKind k);

/// One test quantity: |‖a_i‖ − ‖b_i‖|, |‖a_i a_j − a_k‖ − ‖b_i b_j − b_k‖|,
/// |‖y a_i + z a_j − a_k‖ − ‖y b_i + z b_j − b_k‖| or |‖a_i* − a_j‖ − ‖b_i* − b_j‖|.
struct ClauseWitness {
  ClauseKind kind = ClauseKind::Norm;
  std::size_t i = 0, j = 0, k = 0;
  std::complex<double> y{}, z{};
};

enum class Verdict { DuplicatorWins, ChallengerWins, Inconclusive };
std::string to_string(Verdict v);

struct PayoffReport {
  /// Largest clause value found; attained by witness.
  double max_violation = 0;
  ClauseWitness witness;
  /// certified_bound − max_violation: how much the scalar grid may have missed.
  double grid_slack = 0;
  /// Proven upper bound on the supremum over all scalars.
  double certified_bound = 0;
  Verdict verdict = Verdict::DuplicatorWins;
};

nlohmann::json to_json(const PayoffReport& r);

/// Value of a single clause.
double clause_value(const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b,
                    const ClauseWitness& w, NormKind n);

/// Supremum of the payoff clauses over all index triples and scalars with
/// max(|y|,|z|) ≤ 1. Scalars are scanned on a polar grid of covering radius
/// delta; each scalar clause is 2-Lipschitz in y and in z, so grid maxima
/// are within 4·delta of the supremum. For HS a sharper bound comes from the
/// Gram matrices of the three matrices involved. Duplicator wins when the
/// certified bound is ≤ ε, Challenger when a witness exceeds ε.
///
/// With cfg.unital the identity is prepended to both lists. Raises
/// IllegalPosition if a matrix leaves the operator unit ball.
PayoffReport payoff_violation(const std::vector<ComplexMatrix>& a,
                              const std::vector<ComplexMatrix>& b,
                              const ContinuousGameConfig& cfg);

/// Cheap lower bound on the same supremum: all scalar-free clauses plus the
/// scalar clause at y, z ∈ {0, ±1, ±i}. Returns early once the bound
/// reaches stop_at.
double payoff_lower_bound(const std::vector<ComplexMatrix>& a,
                          const std::vector<ComplexMatrix>& b, NormKind n, bool unital = false,
                          double stop_at = std::numeric_limits<double>::infinity());

/// Challenger's six moves built from the standard partial isometry of M_m.
std::vector<ComplexMatrix> evenodd_challenger_moves(std::size_t m);

/// Top-left d×d corner of x, padded with zeros when d exceeds its size.
/// pad_to(x, m+1) is α_m; pad_to(x, m) on M_{m+1} is β_m.
ComplexMatrix pad_to(const ComplexMatrix& x, std::size_t d);

// ---------------------------------------------------------------- matrix games

struct MatrixMove {
  int side = 1;
  ComplexMatrix x;
};

/// Position in the continuous game. Moves must lie in the operator unit ball
/// of the side's algebra.
class MatrixGameState {
 public:
  explicit MatrixGameState(ContinuousGameConfig cfg);

  const ContinuousGameConfig& config() const { return cfg_; }
  std::size_t dim(int side) const { return side == 1 ? cfg_.l : cfg_.m; }
  const std::vector<ComplexMatrix>& a() const { return a_; }
  const std::vector<ComplexMatrix>& b() const { return b_; }
  const std::optional<MatrixMove>& pending() const { return pending_; }
  std::size_t inning() const { return a_.size() + 1; }
  bool challenger_to_move() const { return !pending_; }
  bool complete() const { return a_.size() == cfg_.innings && !pending_; }

  /// Throws IllegalMove.
  MatrixGameState apply(const MatrixMove& mv) const;

 private:
  ContinuousGameConfig cfg_;
  std::vector<ComplexMatrix> a_, b_;
  std::optional<MatrixMove> pending_;
};

/// Payoff of a finished game.
PayoffReport matrix_game_result(const MatrixGameState& s);

class MatrixStrategy {
 public:
  virtual ~MatrixStrategy() = default;
  virtual std::string name() const = 0;
  virtual MatrixMove choose(const MatrixGameState& s) = 0;
};

/// Duplicator for M_m against M_{m+1} (either side): answers x by padding
/// with a zero row and column, or by deleting the last row and column.
std::shared_ptr<MatrixStrategy> padding_duplicator_strategy(std::size_t m);

/// Challenger playing evenodd_challenger_moves on the even side, then 1.
std::shared_ptr<MatrixStrategy> evenodd_challenger_strategy();

/// Uniform side (as Challenger) and operator-ball samples.
std::shared_ptr<MatrixStrategy> random_matrix_strategy(std::uint64_t seed);

struct MatrixTranscript {
  ContinuousGameConfig config;
  std::vector<MatrixMove> moves;
  PayoffReport report;
};

MatrixTranscript play_matrix_game(const ContinuousGameConfig& cfg, MatrixStrategy& challenger,
                                  MatrixStrategy& duplicator);

nlohmann::json to_json(const ContinuousGameConfig& c);
ContinuousGameConfig continuous_config_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------- ψ

struct PsiOptions {
  std::size_t restarts = 64;
  std::uint64_t seed = 1;
  std::size_t max_steps = 300;
  double initial_step = 0.1;
  double min_step = 1e-10;
  double fd_step = 1e-7;
};

struct PsiResult {
  double value = 0;
  ComplexMatrix witness;
  /// True when the value is only the best found (odd m).
  bool upper_bound = false;
  /// Some restart ran out of steps before its step size collapsed.
  bool budget_exhausted = false;
  std::size_t restarts = 0;
  std::uint64_t seed = 0;
};

/// max(‖x*x − (x*x)²‖_OP, ‖x*x + xx* − 1‖_OP).
double psi_objective(const ComplexMatrix& x);

/// Infimum of psi_objective over the operator unit ball of M_m. Even m gives
/// 0 with the standard partial isometry; odd m runs multi-start projected
/// descent and returns the best value found.
PsiResult evaluate_psi(std::size_t m, const PsiOptions& opt = {});

// ---------------------------------------------------------------- permutation games

double hamming_distance(const Permutation& p, const Permutation& q);

enum class PermPayoff { N2, N3 };

/// Game on S_m (side 1) against S_l (side 2).
struct PermGameConfig {
  std::size_t m = 4, l = 4;
  std::size_t innings = 1;
  double epsilon = 0.1;
  PermPayoff variant = PermPayoff::N2;
};

/// Max over i,j,k of |d(a_i a_j, a_k) − d(b_i b_j, b_k)|, with d the Hamming
/// distance (N2) or the HS distance of permutation matrices (N3). The
/// witness has kind Product. Duplicator wins iff every value is < ε.
PayoffReport perm_payoff_violation(const std::vector<Permutation>& a,
                                   const std::vector<Permutation>& b, const PermGameConfig& cfg);

nlohmann::json to_json(const PermGameConfig& c);
PermGameConfig perm_config_from_json(const nlohmann::json& j);

}  // namespace eflab
