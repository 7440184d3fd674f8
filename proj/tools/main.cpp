#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "acceptance.hpp"
#include "mapgame/io.hpp"
#include "mapgame/knowledge.hpp"
#include "mapgame/qbf.hpp"
#include "mapgame/reductions.hpp"
#include "mapgame/service.hpp"
#include "mapgame/solver.hpp"
#include "mapgame/strategies.hpp"

namespace {

using namespace mapgame;
using io::json;

enum Exit { kOk = 0, kUsage = 1, kResource = 2, kFailed = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

qbf::Formula load_formula(const std::string& path) { return qbf::parse_qdimacs(io::read_file(path)); }

std::optional<qbf::Formula> provenance_formula(const io::Instance& inst) {
  if (!inst.provenance || !inst.provenance->contains("formula")) return std::nullopt;
  return qbf::parse_qdimacs((*inst.provenance)["formula"].get<std::string>());
}

void print_transcript(const Transcript& t) {
  for (const auto& s : t) std::cout << "  " << io::step_to_json(s).dump() << "\n";
}

int cmd_qbf(const std::string& action, const std::string& file) {
  auto f = load_formula(file);
  if (action == "eval") {
    auto ev = qbf::evaluate(f);
    std::cout << (ev.truth ? "true" : "false") << "\n";
    return kOk;
  }
  if (action == "normalize") {
    std::cout << qbf::normalize(f).to_qdimacs();
    return kOk;
  }
  throw UsageError("qbf action must be eval or normalize");
}

int cmd_reduce(const std::string& variant, const std::string& file, const std::string& out) {
  auto f = load_formula(file);
  if (!qbf::is_normalized(f)) {
    f = qbf::normalize(f);
    std::cerr << "note: formula normalized before reduction\n";
  }
  auto gi = reductions::build_variant(variant, f);
  auto inst = reductions::to_instance(gi);
  if (out.empty()) {
    std::cout << io::instance_to_text(inst.map, inst.spec);
  } else {
    io::save_instance(out, inst);
    std::cout << variant << ": " << gi.graph.vertex_count << " vertices, " << gi.graph.edges.size() << " edges, "
              << gi.graph.arcs.size() << " arcs";
    for (const auto& [k, v] : gi.provenance.constants) std::cout << ", " << k << "=" << v;
    std::cout << "\nwrote " << out << " and " << io::sidecar_path(out) << "\n";
  }
  return kOk;
}

int cmd_solve(const std::string& path, long long max_states, double max_seconds, bool show_principal) {
  auto inst = io::load_instance(path);
  Game game(inst.map, inst.spec);
  solver::Limits limits;
  limits.max_states = max_states;
  limits.max_seconds = max_seconds;
  auto r = solver::solve(game, limits);
  std::cout << solver::to_string(r.value) << "\n";
  std::cerr << "states: " << r.states << ", seconds: " << r.seconds << "\n";
  if (show_principal && r.principal) {
    std::cout << "principal line:\n";
    print_transcript(*r.principal);
  }
  return r.value == solver::Value::ResourceLimit ? kResource : kOk;
}

int report(const solver::VerifyResult& r) {
  std::cout << solver::to_string(r.verdict) << "\n";
  if (!r.message.empty()) std::cout << r.message << "\n";
  std::cerr << "states: " << r.states << ", seconds: " << r.seconds << "\n";
  if (r.counter) {
    std::cout << "counter-transcript:\n";
    print_transcript(*r.counter);
  }
  if (r.verdict == solver::Verdict::ResourceLimit) return kResource;
  return r.verdict == solver::Verdict::Holds ? kOk : kFailed;
}

int cmd_verify(const std::string& strategy, const std::string& adversary, const std::string& path,
               long long max_states, double max_seconds, bool no_quotient) {
  if (strategy.empty() == adversary.empty()) throw UsageError("give exactly one of --strategy and --adversary");
  auto inst = io::load_instance(path);
  Game game(inst.map, inst.spec);
  solver::VerifyOptions opt;
  opt.max_states = max_states;
  opt.max_seconds = max_seconds;
  opt.quotient = !no_quotient;
  if (!strategy.empty()) {
    std::unique_ptr<solver::SearcherStrategy> s;
    if (strategy == "optimal") {
      auto r = solver::solve(game, {max_states, -1, max_seconds});
      if (r.value == solver::Value::ResourceLimit) {
        std::cout << "resource-limit\n";
        return kResource;
      }
      s = solver::extract_searcher_strategy(r);
    } else {
      auto formula = provenance_formula(inst);
      if ((strategy == "stpath-proof" || strategy == "ham-proof") && !formula)
        throw UsageError("proof strategies need the instance's provenance sidecar");
      s = strategies::make_strategy(strategy, formula);
    }
    return report(solver::verify_searcher_strategy(game, *s, opt));
  }
  std::unique_ptr<solver::AdversaryPolicy> p;
  if (adversary == "optimal") {
    auto r = solver::solve(game, {max_states, -1, max_seconds});
    if (r.value == solver::Value::ResourceLimit) {
      std::cout << "resource-limit\n";
      return kResource;
    }
    p = solver::extract_adversary_policy(r);
  } else {
    p = strategies::make_policy(adversary == "first-consistent" ? "first" : adversary);
  }
  return report(solver::verify_adversary_policy(game, *p, opt));
}

int read_choice(std::size_t n) {
  for (;;) {
    std::cout << "choice [0-" << n - 1 << "]: " << std::flush;
    std::string line;
    if (!std::getline(std::cin, line)) throw UsageError("input ended");
    try {
      std::size_t pos = 0;
      int c = std::stoi(line, &pos);
      if (pos == line.size() && c >= 0 && static_cast<std::size_t>(c) < n) return c;
    } catch (const std::exception&) {
    }
    std::cout << "not a valid choice\n";
  }
}

int cmd_play(const std::string& path, const std::string& searcher, const std::string& adversary) {
  auto inst = io::load_instance(path);
  Game game(inst.map, inst.spec);
  auto formula = provenance_formula(inst);
  std::unique_ptr<solver::SearcherStrategy> engine_s;
  std::unique_ptr<solver::AdversaryPolicy> engine_a;
  std::optional<solver::SolveResult> solved;
  auto optimal = [&]() -> solver::SolveResult& {
    if (!solved) solved = solver::solve(game);
    if (solved->value == solver::Value::ResourceLimit) throw std::runtime_error("optimal engine: solve hit its limit");
    return *solved;
  };
  if (searcher == "optimal") engine_s = solver::extract_searcher_strategy(optimal());
  else if (searcher != "human") engine_s = strategies::make_strategy(searcher, formula);
  if (adversary == "optimal") engine_a = solver::extract_adversary_policy(optimal());
  else if (adversary != "human")
    engine_a = strategies::make_policy(adversary == "first-consistent" ? "first" : adversary);

  GameState s = game.new_game();
  Transcript t;
  while (s.turn != Turn::Terminal) {
    std::cout << "state: " << io::state_view(s).dump() << "\n";
    if (s.turn == Turn::SearcherToMove) {
      auto moves = game.searcher_moves(s);
      Move m;
      if (engine_s) {
        m = engine_s->choose(game, s);
      } else {
        for (std::size_t i = 0; i < moves.size(); ++i)
          std::cout << "  [" << i << "] " << io::move_to_json(moves[i]).dump() << "\n";
        m = moves[read_choice(moves.size())];
      }
      std::cout << "move: " << io::move_to_json(m).dump() << "\n";
      s = game.apply_move(s, m);
      t.push_back(m);
    } else {
      Reveal r;
      if (engine_a) {
        r = engine_a->choose(game, s);
      } else {
        auto reveals = knowledge::enumerate_reveals(s, game);
        for (std::size_t i = 0; i < reveals.size(); ++i)
          std::cout << "  [" << i << "] " << io::reveal_to_json(reveals[i]).dump() << "\n";
        r = reveals[read_choice(reveals.size())];
      }
      std::cout << "reveal: " << io::reveal_to_json(r).dump() << "\n";
      s = game.apply_reveal(s, r);
      t.push_back(r);
    }
  }
  std::cout << "outcome: " << to_string(s.outcome) << "\n";
  std::cout << "transcript: " << io::transcript_to_json(t).dump() << "\n";
  return kOk;
}

int cmd_export(const std::string& format, const std::string& path, const std::string& out) {
  if (format != "dot") throw UsageError("only dot export is supported");
  auto inst = io::load_instance(path);
  auto dot = to_dot(inst.map);
  if (out.empty()) std::cout << dot;
  else io::write_file(out, dot);
  return kOk;
}

int cmd_serve(const std::string& host, int port) {
  service::HttpServer server;
  int bound = server.bind(host, port);
  if (bound < 0) {
    std::cerr << "cannot bind " << host << ":" << port << "\n";
    return kUsage;
  }
  std::cerr << "serving on http://" << host << ":" << bound << "\n";
  server.listen();
  return kOk;
}

int cmd_selftest(const std::vector<std::string>& only, std::uint64_t seed) {
  acceptance::SuiteOptions opt;
  opt.only = only;
  opt.seed = seed;
  opt.log = &std::cerr;
  auto results = acceptance::run(opt, std::cout);
  for (const auto& r : results)
    if (!r.pass) return kFailed;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exploration games on unlabeled maps: reductions, solver and session service"};
  app.require_subcommand(1);

  auto* qbf_cmd = app.add_subcommand("qbf", "Evaluate or normalize a QDIMACS formula");
  std::string qbf_action, qbf_file;
  qbf_cmd->add_option("action", qbf_action, "eval or normalize")->required()->check(CLI::IsMember({"eval", "normalize"}));
  qbf_cmd->add_option("file", qbf_file, "QDIMACS file")->required();

  auto* reduce_cmd = app.add_subcommand("reduce", "Build a game instance from a formula");
  std::string variant, reduce_file, reduce_out;
  reduce_cmd->add_option("variant", variant)->required()->check(CLI::IsMember(reductions::variant_names()));
  reduce_cmd->add_option("qbf", reduce_file, "QDIMACS file")->required();
  reduce_cmd->add_option("-o,--output", reduce_out, "instance file (.mg.json); stdout when absent");

  auto* solve_cmd = app.add_subcommand("solve", "Decide who wins an instance");
  std::string solve_file;
  long long max_states = 10'000'000;
  double max_seconds = 0;
  bool show_principal = false;
  solve_cmd->add_option("instance", solve_file)->required();
  solve_cmd->add_option("--max-states", max_states, "explored-state budget");
  solve_cmd->add_option("--max-seconds", max_seconds, "time budget, 0 for none");
  solve_cmd->add_flag("--principal", show_principal, "print a principal line of play");

  auto* verify_cmd = app.add_subcommand("verify", "Check a fixed strategy or policy against every reply");
  std::string strategy, adversary, verify_file;
  bool no_quotient = false;
  std::vector<std::string> strategy_choices = strategies::strategy_names();
  strategy_choices.push_back("optimal");
  std::vector<std::string> policy_choices = strategies::policy_names();
  policy_choices.push_back("first-consistent");
  verify_cmd->add_option("--strategy", strategy, "searcher strategy")->check(CLI::IsMember(strategy_choices));
  verify_cmd->add_option("--adversary", adversary, "adversary policy")->check(CLI::IsMember(policy_choices));
  verify_cmd->add_option("instance", verify_file)->required();
  verify_cmd->add_option("--max-states", max_states, "explored-state budget");
  verify_cmd->add_option("--max-seconds", max_seconds, "time budget, 0 for none");
  verify_cmd->add_flag("--no-quotient", no_quotient, "branch on every reveal, not one per symmetry class");

  auto* play_cmd = app.add_subcommand("play", "Play an instance in the terminal");
  std::string play_file, play_searcher = "human", play_adversary = "sink-seeking";
  play_cmd->add_option("instance", play_file)->required();
  play_cmd->add_option("--searcher", play_searcher, "human, optimal or a strategy name");
  play_cmd->add_option("--adversary", play_adversary, "human, optimal or a policy name");

  auto* export_cmd = app.add_subcommand("export", "Export an instance map");
  std::string export_format, export_file, export_out;
  export_cmd->add_option("format", export_format, "dot")->required()->check(CLI::IsMember({"dot"}));
  export_cmd->add_option("instance", export_file)->required();
  export_cmd->add_option("-o,--output", export_out, "output file; stdout when absent");

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP session service");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve_cmd->add_option("--port", port, "TCP port, 0 for any free port");
  serve_cmd->add_option("--host", host, "bind address");

  auto* selftest_cmd = app.add_subcommand("selftest", "Run the acceptance property suites");
  std::vector<std::string> only;
  std::uint64_t seed = acceptance::SuiteOptions{}.seed;
  selftest_cmd->add_option("--only", only, "criteria to run")->check(CLI::IsMember(acceptance::criterion_names()));
  selftest_cmd->add_option("--seed", seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*qbf_cmd) return cmd_qbf(qbf_action, qbf_file);
    if (*reduce_cmd) return cmd_reduce(variant, reduce_file, reduce_out);
    if (*solve_cmd) return cmd_solve(solve_file, max_states, max_seconds, show_principal);
    if (*verify_cmd) return cmd_verify(strategy, adversary, verify_file, max_states, max_seconds, no_quotient);
    if (*play_cmd) return cmd_play(play_file, play_searcher, play_adversary);
    if (*export_cmd) return cmd_export(export_format, export_file, export_out);
    if (*serve_cmd) return cmd_serve(host, port);
    if (*selftest_cmd) return cmd_selftest(only, seed);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const qbf::ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
