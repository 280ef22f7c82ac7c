#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "eflab/graph.hpp"
#include "eflab/logic.hpp"
#include "eflab/metric.hpp"

namespace eflab {

/// Self-contained result of one experiment run. Trials and summary depend
/// only on the parameters; wall time and version are informational.
struct ExperimentRecord {
  std::string kind;
  nlohmann::json parameters = nlohmann::json::object();
  /// One flat JSON object per trial; these become the CSV rows.
  std::vector<nlohmann::json> trials;
  /// CSV column order; defaults to the keys of the first trial.
  std::vector<std::string> columns;
  nlohmann::json summary = nlohmann::json::object();
  double wall_time_seconds = 0;
  std::string version = EFLAB_VERSION;
};

nlohmann::json to_json(const ExperimentRecord& r);
ExperimentRecord experiment_from_json(const nlohmann::json& j);
/// Header row, then one line per trial.
std::string to_csv(const ExperimentRecord& r);

/// Seed of sample `index` derived from a master seed (splitmix64 step).
std::uint64_t sample_seed(std::uint64_t master, std::uint64_t index);

struct ZeroOneResult {
  double frequency = 0;
  std::size_t satisfied = 0;
  std::vector<bool> outcomes;
};

/// Fraction of G(m, p) samples satisfying the sentence f. Sample i is drawn
/// from sample_seed(seed, i).
ZeroOneResult zero_one_trial(const Formula& f, std::size_t m, std::size_t samples,
                             std::uint64_t seed, double p = 0.5);

ExperimentRecord zero_one_experiment(const Formula& f, std::size_t m, std::size_t samples,
                                     std::uint64_t seed, double p = 0.5);

struct DiagonalResult {
  std::vector<std::size_t> indices;
  /// Sentences applied before the subsequence ran out (all of them unless
  /// `emptied`).
  std::size_t sentences_processed = 0;
  bool emptied = false;
};

/// Nested refinement: for each sentence in order keep the majority truth
/// value among the surviving graphs (ties keep the graphs where it holds).
DiagonalResult diagonal_subsequence(const std::vector<Graph>& graphs,
                                    const std::vector<Formula>& sentences);

/// evaluate_psi for each dimension (each at most 32).
ExperimentRecord psi_sweep(const std::vector<std::size_t>& dims, const PsiOptions& opt = {});

}  // namespace eflab
