// ef: command-line front end for the eflab library.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "eflab/experiments.hpp"
#include "eflab/game.hpp"
#include "eflab/metric.hpp"
#include "eflab/service.hpp"

#include <httplib.h>

using namespace eflab;
using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::uint64_t budget = SolverOptions{}.node_budget;
  std::string out;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw InvalidParameter("cannot write " + g.out);
  f << text;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// A spec like cycle:9, or a path to a graph JSON file.
Graph load_graph(const std::string& arg) {
  if (std::filesystem::is_regular_file(arg)) return graph_from_json(json::parse(slurp(arg)));
  return parse_graph_spec(arg);
}

/// Inline text, or a file holding it.
std::string sentence_text(const std::string& arg) {
  return std::filesystem::is_regular_file(arg) ? slurp(arg) : arg;
}

/// "1..8" or "1,3,5".
std::vector<std::size_t> parse_dims(const std::string& s) {
  std::vector<std::size_t> out;
  const auto dots = s.find("..");
  try {
    if (dots != std::string::npos) {
      const std::size_t lo = std::stoul(s.substr(0, dots)), hi = std::stoul(s.substr(dots + 2));
      if (lo > hi) throw InvalidParameter("empty dimension range " + s);
      for (std::size_t m = lo; m <= hi; ++m) out.push_back(m);
      return out;
    }
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, ',');) out.push_back(std::stoul(part));
  } catch (const std::logic_error&) {
    throw InvalidParameter("bad dimension list \"" + s + "\"");
  }
  return out;
}

bool wants_json(const Globals& g, const std::string& format) {
  if (format == "json") return true;
  if (format == "csv") return false;
  return g.out.size() >= 5 && g.out.compare(g.out.size() - 5, 5, ".json") == 0;
}

std::shared_ptr<Strategy> discrete_strategy(const std::string& name, const Graph& g1, const Graph& g2,
                                            std::size_t n, const Globals& g,
                                            const std::string& sentence) {
  if (name == "solver-optimal") {
    SolverOptions opt;
    opt.node_budget = g.budget;
    return solver_strategy(g1, g2, n, opt);
  }
  if (name == "cycle-duplicator") return cycle_duplicator_strategy(g1.vertex_count(), g2.vertex_count(), n);
  if (name == "formula-challenger") {
    std::optional<Formula> f;
    if (!sentence.empty()) f = parse_sentence(sentence_text(sentence));
    else f = find_distinguishing_sentence(g1, g2, n);
    if (!f) throw InvalidParameter("no distinguishing sentence of depth <= " + std::to_string(n));
    return formula_challenger_strategy(g1, g2, *f);
  }
  if (name == "random") return random_strategy(g.seed);
  if (name == "first-move") return first_move_strategy();
  throw InvalidParameter("unknown discrete strategy \"" + name + "\"");
}

std::shared_ptr<MatrixStrategy> matrix_strategy(const std::string& name,
                                                const ContinuousGameConfig& cfg, std::uint64_t seed) {
  if (name == "padding-duplicator") return padding_duplicator_strategy(std::min(cfg.l, cfg.m));
  if (name == "evenodd-challenger") return evenodd_challenger_strategy();
  if (name == "random") return random_matrix_strategy(seed);
  throw InvalidParameter("unknown continuous strategy \"" + name + "\"");
}

json matrix_transcript_json(const MatrixTranscript& t) {
  json moves = json::array();
  for (std::size_t i = 0; i < t.moves.size(); ++i)
    moves.push_back({{"by", i % 2 ? "D" : "C"}, {"side", t.moves[i].side}, {"x", to_json(t.moves[i].x)}});
  return {{"config", to_json(t.config)}, {"moves", moves}, {"report", to_json(t.report)},
          {"winner", to_string(t.report.verdict)}};
}

httplib::Server* running_server = nullptr;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ehrenfeucht-Fraisse game laboratory"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master random seed")->capture_default_str();
  app.add_option("--budget", g.budget, "Solver node budget")->capture_default_str();
  app.add_option("--out", g.out, "Write output to this file instead of stdout");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Decide a discrete game, or score a continuous position");
  std::string g1_arg, g2_arg, payoff_file, format;
  std::size_t n = 1;
  bool with_sentence = false;
  solve_cmd->add_option("--g1", g1_arg, "First graph (spec or JSON file)");
  solve_cmd->add_option("--g2", g2_arg, "Second graph (spec or JSON file)");
  solve_cmd->add_option("-n,--innings", n, "Number of innings")->capture_default_str();
  solve_cmd->add_flag("--sentence", with_sentence, "Also search a distinguishing sentence");
  solve_cmd->add_option("--payoff", payoff_file,
                        "JSON file {config, a, b}: score a finished continuous position instead");

  // play
  auto* play_cmd = app.add_subcommand("play", "Play two engine strategies against each other");
  std::string kind = "discrete", challenger = "random", duplicator = "solver-optimal", sentence;
  std::size_t l = 2, m = 3;
  double epsilon = 0.1, delta = 0.05;
  play_cmd->add_option("--kind", kind, "discrete | continuous-HS | continuous-OP")->capture_default_str();
  play_cmd->add_option("--g1", g1_arg, "First graph (discrete)");
  play_cmd->add_option("--g2", g2_arg, "Second graph (discrete)");
  play_cmd->add_option("-n,--innings", n, "Number of innings")->capture_default_str();
  play_cmd->add_option("--challenger", challenger, "Challenger strategy")->capture_default_str();
  play_cmd->add_option("--duplicator", duplicator, "Duplicator strategy")->capture_default_str();
  play_cmd->add_option("--formula", sentence, "Sentence (or file) for formula-challenger");
  play_cmd->add_option("--l", l, "Side 1 dimension (continuous)")->capture_default_str();
  play_cmd->add_option("--m", m, "Side 2 dimension (continuous)")->capture_default_str();
  play_cmd->add_option("--epsilon", epsilon, "Payoff threshold (continuous)")->capture_default_str();
  play_cmd->add_option("--delta", delta, "Grid spacing for the OP linear clause")->capture_default_str();

  // psi
  auto* psi_cmd = app.add_subcommand("psi", "Sweep the defect functional over dimensions");
  std::string dims = "1..8";
  std::size_t restarts = PsiOptions{}.restarts;
  psi_cmd->add_option("--dims", dims, "Range a..b or list a,b,c (each <= 32)")->capture_default_str();
  psi_cmd->add_option("--restarts", restarts, "Random restarts per odd dimension")->capture_default_str();
  psi_cmd->add_option("--format", format, "csv | json (default from --out extension, else csv)");

  // zeroone
  auto* zo_cmd = app.add_subcommand("zeroone", "Monte Carlo truth frequency on G(m, p)");
  std::size_t samples = 200, vertices = 40;
  double p = 0.5;
  zo_cmd->add_option("--sentence", sentence, "Sentence text or file")->required();
  zo_cmd->add_option("-m,--vertices", vertices, "Graph size")->capture_default_str();
  zo_cmd->add_option("--samples", samples, "Number of samples")->capture_default_str();
  zo_cmd->add_option("-p,--edge-probability", p, "Edge probability")->capture_default_str();
  zo_cmd->add_option("--format", format, "csv | json");

  // diagonal
  auto* diag_cmd = app.add_subcommand("diagonal", "Majority refinement of a graph list by sentences");
  std::vector<std::string> graph_args;
  std::string sentence_file;
  std::size_t depth = 2, max_size = 6;
  diag_cmd->add_option("--graph", graph_args, "Graph (repeatable; spec or JSON file)")->required();
  diag_cmd->add_option("--sentences", sentence_file, "File with one sentence per line");
  diag_cmd->add_option("--depth", depth, "Enumerate sentences up to this depth")->capture_default_str();
  diag_cmd->add_option("--max-size", max_size, "Enumerate sentences up to this size")->capture_default_str();

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the session HTTP service (address from EF_LAB_ADDR)");
  std::string snapshots;
  serve_cmd->add_option("--snapshots", snapshots, "Directory for JSON session snapshots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*solve_cmd) {
      if (!payoff_file.empty()) {
        const json in = json::parse(slurp(payoff_file));
        const auto cfg = continuous_config_from_json(in.at("config"));
        std::vector<ComplexMatrix> a, b;
        for (const auto& x : in.at("a")) a.push_back(matrix_from_json(x));
        for (const auto& x : in.at("b")) b.push_back(matrix_from_json(x));
        emit(g, to_json(payoff_violation(a, b, cfg)).dump(2));
        return 0;
      }
      if (g1_arg.empty() || g2_arg.empty()) {
        std::cerr << "solve needs --g1 and --g2 (or --payoff)\n";
        return 2;
      }
      const Graph g1 = load_graph(g1_arg), g2 = load_graph(g2_arg);
      SolverOptions opt;
      opt.node_budget = g.budget;
      const SolveResult r = solve(g1, g2, n, opt);
      json out = {{"g1", g1_arg}, {"g2", g2_arg}, {"n", n}, {"winner", code(r.winner)},
                  {"nodes", r.nodes}};
      if (with_sentence) {
        const auto f = find_distinguishing_sentence(g1, g2, n);
        out["sentence"] = f ? json(to_string(*f)) : json(nullptr);
      }
      emit(g, out.dump(2));
    } else if (*play_cmd) {
      if (kind == "discrete") {
        if (g1_arg.empty() || g2_arg.empty()) {
          std::cerr << "play needs --g1 and --g2\n";
          return 2;
        }
        const Graph g1 = load_graph(g1_arg), g2 = load_graph(g2_arg);
        auto c = discrete_strategy(challenger, g1, g2, n, g, sentence);
        auto d = discrete_strategy(duplicator, g1, g2, n, g, sentence);
        emit(g, to_json(play(g1, g2, n, *c, *d)).dump(2));
      } else if (kind == "continuous-HS" || kind == "continuous-OP") {
        ContinuousGameConfig cfg;
        cfg.l = l;
        cfg.m = m;
        cfg.innings = n;
        cfg.epsilon = epsilon;
        cfg.delta = delta;
        cfg.norm = kind == "continuous-HS" ? NormKind::HS : NormKind::OP;
        cfg.validate();
        auto c = matrix_strategy(challenger, cfg, g.seed);
        auto d = matrix_strategy(duplicator, cfg, sample_seed(g.seed, 1));
        emit(g, matrix_transcript_json(play_matrix_game(cfg, *c, *d)).dump(2));
      } else {
        std::cerr << "unknown --kind " << kind << '\n';
        return 2;
      }
    } else if (*psi_cmd) {
      PsiOptions opt;
      opt.seed = g.seed;
      opt.restarts = restarts;
      const auto rec = psi_sweep(parse_dims(dims), opt);
      emit(g, wants_json(g, format) ? to_json(rec).dump(2) : to_csv(rec));
    } else if (*zo_cmd) {
      const auto rec = zero_one_experiment(parse_sentence(sentence_text(sentence)), vertices, samples,
                                           g.seed, p);
      emit(g, wants_json(g, format) ? to_json(rec).dump(2) : to_csv(rec));
    } else if (*diag_cmd) {
      std::vector<Graph> graphs;
      for (const auto& a : graph_args) graphs.push_back(load_graph(a));
      std::vector<Formula> sentences;
      if (!sentence_file.empty()) {
        std::istringstream in(slurp(sentence_file));
        for (std::string line; std::getline(in, line);)
          if (line.find_first_not_of(" \t\r") != std::string::npos) sentences.push_back(parse_sentence(line));
      } else {
        sentences = enumerate_sentences(depth, max_size);
      }
      const auto r = diagonal_subsequence(graphs, sentences);
      json out = {{"indices", r.indices},
                  {"sentences", sentences.size()},
                  {"sentences_processed", r.sentences_processed},
                  {"emptied", r.emptied}};
      emit(g, out.dump(2));
    } else if (*serve_cmd) {
      ServiceOptions opt;
      opt.solver.node_budget = g.budget;
      if (!snapshots.empty()) opt.snapshot_dir = snapshots;
      SessionManager manager(opt);
      httplib::Server server;
      mount_routes(server, manager);
      const auto [host, port] = service_address(std::getenv("EF_LAB_ADDR"));
      running_server = &server;
      std::signal(SIGINT, [](int) { running_server->stop(); });
      std::signal(SIGTERM, [](int) { running_server->stop(); });
      std::cerr << "listening on " << host << ":" << port << '\n';
      if (!server.listen(host, port)) {
        std::cerr << "cannot bind " << host << ":" << port << '\n';
        return 1;
      }
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return 3;
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
