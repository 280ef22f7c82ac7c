#include "eflab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <sstream>
#include <thread>

#include "eflab/error.hpp"

namespace eflab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string csv_cell(const nlohmann::json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return v.dump();
}

}  // namespace

nlohmann::json to_json(const ExperimentRecord& r) {
  return {{"kind", r.kind},       {"version", r.version},   {"parameters", r.parameters},
          {"trials", r.trials},   {"columns", r.columns},   {"summary", r.summary},   {"wall_time_seconds", r.wall_time_seconds}};
}

ExperimentRecord experiment_from_json(const nlohmann::json& j) {
  try {
    ExperimentRecord r;
    r.kind = j.at("kind").get<std::string>();
    r.version = j.value("version", std::string{});
    r.parameters = j.at("parameters");
    r.trials = j.at("trials").get<std::vector<nlohmann::json>>();
    r.columns = j.value("columns", std::vector<std::string>{});
    r.summary = j.value("summary", nlohmann::json::object());
    r.wall_time_seconds = j.value("wall_time_seconds", 0.0);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("malformed experiment record: ") + e.what());
  }
}

std::string to_csv(const ExperimentRecord& r) {
  std::ostringstream os;
  if (r.trials.empty()) return "";
  std::vector<std::string> keys = r.columns;
  if (keys.empty())
    for (const auto& [k, v] : r.trials.front().items()) keys.push_back(k);
  for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
  os << '\n';
  for (const auto& t : r.trials) {
    for (std::size_t i = 0; i < keys.size(); ++i)
      os << (i ? "," : "") << (t.contains(keys[i]) ? csv_cell(t[keys[i]]) : "");
    os << '\n';
  }
  return os.str();
}

std::uint64_t sample_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

ZeroOneResult zero_one_trial(const Formula& f, std::size_t m, std::size_t samples,
                             std::uint64_t seed, double p) {
  if (!free_variables(f).empty()) throw FreeVariableError("zero_one_trial needs a sentence");
  if (samples == 0) throw InvalidParameter("zero_one_trial needs at least one sample");
  ZeroOneResult r;
  std::vector<char> holds(samples, 0);
  // Samples are independent; each worker takes a strided share.
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, samples);
  auto run = [&](std::size_t first) {
    for (std::size_t i = first; i < samples; i += workers)
      holds[i] = evaluate(random_graph(m, p, sample_seed(seed, i)), f);
  };
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 1; w < workers; ++w) jobs.push_back(std::async(std::launch::async, run, w));
  run(0);
  for (auto& j : jobs) j.get();
  r.outcomes.assign(holds.begin(), holds.end());
  for (char b : holds) r.satisfied += b != 0;
  r.frequency = static_cast<double>(r.satisfied) / static_cast<double>(samples);
  return r;
}

ExperimentRecord zero_one_experiment(const Formula& f, std::size_t m, std::size_t samples,
                                     std::uint64_t seed, double p) {
  const auto t0 = Clock::now();
  ExperimentRecord rec;
  rec.kind = "zeroone";
  rec.columns = {"sample", "seed", "holds"};
  rec.parameters = {{"sentence", to_string(f)}, {"m", m}, {"samples", samples},
                    {"seed", seed},             {"p", p}};
  const ZeroOneResult r = zero_one_trial(f, m, samples, seed, p);
  for (std::size_t i = 0; i < samples; ++i)
    rec.trials.push_back({{"sample", i}, {"seed", sample_seed(seed, i)}, {"holds", bool(r.outcomes[i])}});
  rec.summary = {{"frequency", r.frequency}, {"satisfied", r.satisfied}};
  rec.wall_time_seconds = seconds_since(t0);
  return rec;
}

DiagonalResult diagonal_subsequence(const std::vector<Graph>& graphs,
                                    const std::vector<Formula>& sentences) {
  for (const auto& f : sentences)
    if (!free_variables(f).empty())
      throw FreeVariableError("diagonal_subsequence needs sentences; \"" + to_string(f) +
                              "\" has free variables");
  DiagonalResult r;
  for (std::size_t i = 0; i < graphs.size(); ++i) r.indices.push_back(i);
  for (const auto& f : sentences) {
    if (r.indices.empty()) {
      r.emptied = true;
      return r;
    }
    std::vector<std::size_t> yes, no;
    for (std::size_t i : r.indices) (evaluate(graphs[i], f) ? yes : no).push_back(i);
    r.indices = yes.size() >= no.size() ? yes : no;
    ++r.sentences_processed;
  }
  r.emptied = r.indices.empty() && !sentences.empty();
  return r;
}

ExperimentRecord psi_sweep(const std::vector<std::size_t>& dims, const PsiOptions& opt) {
  for (std::size_t m : dims)
    if (m == 0 || m > 32) throw InvalidParameter("psi_sweep dimensions must lie in 1..32");
  const auto t0 = Clock::now();
  ExperimentRecord rec;
  rec.kind = "psi";
  rec.columns = {"m", "value", "restarts", "seed", "wall_time", "upper_bound", "budget_exhausted"};
  rec.parameters = {{"dims", dims},
                    {"restarts", opt.restarts},
                    {"seed", opt.seed},
                    {"max_steps", opt.max_steps},
                    {"initial_step", opt.initial_step},
                    {"min_step", opt.min_step},
                    {"fd_step", opt.fd_step}};
  std::size_t warnings = 0;
  for (std::size_t m : dims) {
    const auto t1 = Clock::now();
    const PsiResult r = evaluate_psi(m, opt);
    warnings += r.budget_exhausted;
    rec.trials.push_back({{"m", m},
                          {"value", r.value},
                          {"restarts", r.restarts},
                          {"seed", r.seed},
                          {"wall_time", seconds_since(t1)},
                          {"upper_bound", r.upper_bound},
                          {"budget_exhausted", r.budget_exhausted}});
  }
  rec.summary = {{"rows", dims.size()}, {"budget_warnings", warnings}};
  rec.wall_time_seconds = seconds_since(t0);
  return rec;
}

}  // namespace eflab
