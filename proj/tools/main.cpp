// lguess: equality saturation with preference-guided extraction.
//
// Subcommands:
//   gen      generate a factorization dataset
//   run      solve a single task with lguess | direct-es | direct-llm
//   bench    run a dataset and write JSONL results + a solved-count grid CSV
//   verify   check a rewrite-chain certificate against a rule set
//   saturate saturate a term and dump the e-graph (debugging)
//
// Exit codes: 0 solved/verified, 1 unsolved/invalid, 2 usage or environment
// error.

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "lguess/bench.hpp"
#include "lguess/chat_client.hpp"
#include "lguess/driver.hpp"
#include "lguess/errors.hpp"
#include "lguess/sexpr.hpp"

namespace {

using namespace lguess;

constexpr int kExitSolved = 0;
constexpr int kExitUnsolved = 1;
constexpr int kExitUsage = 2;

struct Range {
  unsigned lo = 2, hi = 5;
};

Range parse_range(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) {
    unsigned v = static_cast<unsigned>(std::stoul(text));
    return {v, v};
  }
  return {static_cast<unsigned>(std::stoul(text.substr(0, colon))),
          static_cast<unsigned>(std::stoul(text.substr(colon + 1)))};
}

RuleSet load_rules(const std::string& spec, const std::optional<std::string>& sig_file) {
  if (auto builtin = builtin_ruleset(spec)) {
    if (sig_file)
      return RuleSet::from_file(spec, nullptr);  // unreachable; builtin wins
    return *builtin;
  }
  if (sig_file) {
    Signature sig = Signature::from_file(*sig_file);
    return RuleSet::from_file(spec, &sig);
  }
  return RuleSet::from_file(spec, nullptr);
}

std::unique_ptr<Oracle> make_oracle_from_spec(const std::string& spec) {
  if (spec == "http")
    return std::make_unique<ChatOracle>(make_http_chat_client(http_chat_config_from_env()));
  constexpr std::string_view kScripted = "scripted:";
  constexpr std::string_view kHeuristic = "heuristic:";
  if (spec.rfind(kScripted, 0) == 0) {
    std::ifstream in(spec.substr(kScripted.size()));
    if (!in) throw ConfigError("cannot open script file: " + spec);
    std::vector<Choice> script;
    std::string tok;
    while (in >> tok) {
      if (tok == "current" || tok == "a")
        script.push_back(Choice::Current);
      else if (tok == "candidate" || tok == "b")
        script.push_back(Choice::Candidate);
      else
        throw ConfigError("script token must be current|candidate: " + tok);
    }
    return scripted_oracle(std::move(script));
  }
  if (spec.rfind(kHeuristic, 0) == 0)
    return heuristic_oracle(spec.substr(kHeuristic.size()));
  throw ConfigError("oracle must be http, scripted:FILE or heuristic:NAME, got " + spec);
}

std::shared_ptr<const Goal> make_goal_from_spec(const std::string& spec,
                                                const Signature& sig) {
  if (spec.empty()) return nullptr;
  if (spec == "mult-form") return Goal::multiplication_form();
  constexpr std::string_view kTerm = "term:";
  if (spec.rfind(kTerm, 0) == 0)
    return Goal::reach_term(parse_sexpr(spec.substr(kTerm.size()), sig));
  throw ConfigError("goal must be mult-form or term:<sexpr>, got " + spec);
}

int cmd_gen(const std::string& nd_range, const std::string& nv_range,
            unsigned per_cell, std::uint64_t seed, const std::string& out_path) {
  Range nd = parse_range(nd_range);
  Range nv = parse_range(nv_range);
  Signature sig = poly_signature(5);
  std::vector<Task> tasks =
      build_dataset(nd.lo, nd.hi, nv.lo, nv.hi, per_cell, seed, sig);
  for (const Task& t : tasks)
    if (!poly_equivalent(*t.start, *t.reference_product))
      throw ConfigError("generator produced an inconsistent task: " + t.id);
  dataset_to_file(tasks, out_path);
  std::cout << "wrote " << tasks.size() << " tasks to " << out_path << "\n";
  return kExitSolved;
}

struct RunArgs {
  std::string solver = "lguess";
  std::string rules = "ring-char2";
  std::optional<std::string> sig_file;
  std::string start;
  std::string goal;
  std::string oracle = "heuristic:smaller-size";
  std::string task_desc;
  double sat_timeout = 5.0;
  std::optional<std::uint64_t> sat_iters;
  std::optional<std::uint64_t> sat_nodes;
  unsigned rounds = 10;
  double alpha = 1.5;
  unsigned max_phases = 30;
  double timeout = 150.0;
  std::uint64_t seed = 1;
  std::string cert_out;
  std::string dump_egraph;
};

int cmd_run(const RunArgs& args) {
  RuleSet rules = load_rules(args.rules, args.sig_file);
  TermPtr start = parse_sexpr(args.start, rules.sig());
  std::shared_ptr<const Goal> goal = make_goal_from_spec(args.goal, rules.sig());

  PhaseConfig cfg;
  cfg.saturation = SaturationLimits{args.sat_iters, args.sat_nodes, args.sat_timeout};
  cfg.refine.rounds = args.rounds;
  cfg.refine.alpha = args.alpha;
  cfg.refine.rng_seed = args.seed;
  cfg.max_phases = args.max_phases;
  cfg.total_timeout_s = args.timeout;

  RunResult result;
  Solver solver = solver_from_string(args.solver);
  switch (solver) {
    case Solver::LGuess: {
      auto oracle = make_oracle_from_spec(args.oracle);
      result = run_lguess(start, rules, *oracle, goal, cfg, args.task_desc);
      break;
    }
    case Solver::DirectES:
      result = run_direct_es(start, rules, goal, cfg.saturation, cfg.total_timeout_s);
      break;
    case Solver::DirectLLM: {
      auto client = make_http_chat_client(http_chat_config_from_env());
      result = run_direct_llm(start, rules, goal, *client, args.task_desc);
      break;
    }
  }

  std::cout << "stop: " << to_string(result.stop_reason)
            << "  solved: " << (result.solved ? "yes" : "no")
            << "  phases: " << result.phase_count
            << "  iterations: " << result.saturation_iterations
            << "  queries: " << result.oracle_queries << "\n";
  std::cout << "final: " << print_sexpr(result.final_term) << "\n";
  for (std::size_t i = 0; i < result.checkpoints.size(); ++i)
    std::cout << "checkpoint[" << i << "]: " << print_sexpr(result.checkpoints[i])
              << "\n";

  ChainVerdict verdict = verify_chain(result.certificate, rules);
  std::cout << "certificate: " << result.certificate.steps.size() << " steps, "
            << (verdict.ok ? "verified" : "INVALID: " + verdict.reason) << "\n";
  if (!args.cert_out.empty()) {
    std::ofstream out(args.cert_out);
    if (!out) throw ConfigError("cannot write certificate: " + args.cert_out);
    out << certificate_to_string(result.certificate);
  }
  bool ok = goal ? result.solved : verdict.ok;
  return ok ? kExitSolved : kExitUnsolved;
}

struct BenchArgs {
  std::string dataset;
  std::string solver = "lguess";
  std::string rules = "poly-ac";
  std::string oracle = "heuristic:factor-progress";
  unsigned parallelism = 1;
  std::string out = "results.jsonl";
  std::string grid;
  double sat_timeout = 5.0;
  std::optional<std::uint64_t> sat_iters;
  std::optional<std::uint64_t> sat_nodes;
  unsigned rounds = 10;
  double alpha = 1.5;
  unsigned max_phases = 30;
  double timeout = 150.0;
  std::uint64_t seed = 1;
  bool with_timings = false;
};

int cmd_bench(const BenchArgs& args) {
  RuleSet rules = load_rules(args.rules, std::nullopt);
  std::vector<Task> dataset = dataset_from_file(args.dataset, rules.sig());

  BenchOptions options;
  options.solver = solver_from_string(args.solver);
  options.phase.saturation =
      SaturationLimits{args.sat_iters, args.sat_nodes, args.sat_timeout};
  options.phase.refine.rounds = args.rounds;
  options.phase.refine.alpha = args.alpha;
  options.phase.refine.rng_seed = args.seed;
  options.phase.max_phases = args.max_phases;
  options.phase.total_timeout_s = args.timeout;
  options.es_limits = options.phase.saturation;
  options.parallelism = args.parallelism;
  options.with_timings = args.with_timings;
  std::string oracle_spec = args.oracle;
  options.make_oracle = [oracle_spec] { return make_oracle_from_spec(oracle_spec); };
  options.make_chat_client = [] {
    return make_http_chat_client(http_chat_config_from_env());
  };

  BenchSummary summary = run_bench(dataset, rules, options);
  write_results_jsonl(summary, args.out, args.with_timings);
  std::string grid_path = args.grid.empty() ? args.out + ".grid.csv" : args.grid;
  write_grid_csv(summary, grid_path);
  std::cout << "solved " << summary.solved_total << "/" << summary.results.size()
            << "; results: " << args.out << "; grid: " << grid_path << "\n";
  return kExitSolved;
}

int cmd_verify(const std::string& cert_path, const std::string& rules_spec,
               const std::optional<std::string>& sig_file) {
  RuleSet rules = load_rules(rules_spec, sig_file);
  Certificate cert = certificate_from_file(cert_path, rules.sig());
  ChainVerdict verdict = verify_chain(cert, rules);
  if (verdict.ok) {
    std::cout << "ok: " << cert.steps.size() << " steps, final "
              << print_sexpr(cert.final_term()) << "\n";
    return kExitSolved;
  }
  std::cout << "invalid at step " << verdict.failing_step << ": " << verdict.reason
            << "\n";
  return kExitUnsolved;
}

int cmd_saturate(const std::string& rules_spec, const std::string& start_text,
                 std::uint64_t iters, const std::string& dump_path) {
  RuleSet rules = load_rules(rules_spec, std::nullopt);
  TermPtr start = parse_sexpr(start_text, rules.sig());
  EGraph g(rules.sig());
  g.add_term(start);
  SaturationReport report = g.saturate(rules, SaturationLimits::iterations(iters));
  std::cout << "iterations: " << report.iterations_run
            << "  nodes: " << report.node_count << "  classes: " << report.class_count
            << "  stop: " << to_string(report.stop_reason) << "\n";
  if (dump_path.empty())
    std::cout << g.dump();
  else {
    std::ofstream out(dump_path);
    if (!out) throw ConfigError("cannot write dump: " + dump_path);
    out << g.dump();
  }
  return kExitSolved;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equality saturation with preference-guided extraction"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a factorization dataset");
  std::string nd_range = "2:5", nv_range = "2:5", gen_out = "dataset.tsv";
  unsigned per_cell = 20;
  std::uint64_t gen_seed = 1;
  gen->add_option("--nd-range", nd_range, "degree range LO:HI");
  gen->add_option("--nv-range", nv_range, "variable-count range LO:HI");
  gen->add_option("--per-cell", per_cell, "tasks per (n_d, n_v) cell");
  gen->add_option("--seed", gen_seed, "master seed");
  gen->add_option("--out", gen_out, "output TSV path");

  // run
  auto* run = app.add_subcommand("run", "solve a single task");
  RunArgs run_args;
  run->add_option("--solver", run_args.solver, "lguess|direct-es|direct-llm");
  run->add_option("--rules", run_args.rules, "ring-char2|poly-ac|FILE");
  std::string run_sig;
  run->add_option("--sig", run_sig, "signature file for a rules FILE");
  run->add_option("--start", run_args.start, "starting s-expression")->required();
  run->add_option("--goal", run_args.goal, "mult-form | term:<sexpr>");
  run->add_option("--oracle", run_args.oracle, "http | scripted:FILE | heuristic:NAME");
  run->add_option("--task-desc", run_args.task_desc, "task description for prompts");
  run->add_option("--sat-timeout", run_args.sat_timeout, "saturation seconds per phase");
  std::uint64_t run_iters = 0, run_nodes = 0;
  run->add_option("--sat-iters", run_iters, "saturation iteration cap per phase");
  run->add_option("--sat-nodes", run_nodes, "saturation node cap per phase");
  run->add_option("--rounds", run_args.rounds, "refinement rounds per phase");
  run->add_option("--alpha", run_args.alpha, "model update factor (> 1)");
  run->add_option("--max-phases", run_args.max_phases, "phase cap");
  run->add_option("--timeout", run_args.timeout, "total seconds");
  run->add_option("--seed", run_args.seed, "rng seed");
  run->add_option("--cert-out", run_args.cert_out, "write the certificate here");

  // bench
  auto* bench = app.add_subcommand("bench", "run a dataset");
  BenchArgs bench_args;
  bench->add_option("--dataset", bench_args.dataset, "dataset TSV")->required();
  bench->add_option("--solver", bench_args.solver, "lguess|direct-es|direct-llm");
  bench->add_option("--rules", bench_args.rules, "ring-char2|poly-ac|FILE");
  bench->add_option("--oracle", bench_args.oracle, "http | scripted:FILE | heuristic:NAME");
  bench->add_option("--parallelism", bench_args.parallelism, "concurrent tasks");
  bench->add_option("--out", bench_args.out, "results JSONL path");
  bench->add_option("--grid", bench_args.grid, "grid CSV path (default <out>.grid.csv)");
  bench->add_option("--sat-timeout", bench_args.sat_timeout, "saturation seconds per phase");
  std::uint64_t bench_iters = 0, bench_nodes = 0;
  bench->add_option("--sat-iters", bench_iters, "saturation iteration cap");
  bench->add_option("--sat-nodes", bench_nodes, "saturation node cap");
  bench->add_option("--rounds", bench_args.rounds, "refinement rounds per phase");
  bench->add_option("--alpha", bench_args.alpha, "model update factor (> 1)");
  bench->add_option("--max-phases", bench_args.max_phases, "phase cap");
  bench->add_option("--timeout", bench_args.timeout, "total seconds per task");
  bench->add_option("--seed", bench_args.seed, "master rng seed");
  bench->add_flag("--timings", bench_args.with_timings,
                  "include wall times in the results file (non-reproducible)");

  // verify
  auto* verify = app.add_subcommand("verify", "verify a certificate");
  std::string cert_path, verify_rules = "ring-char2", verify_sig;
  verify->add_option("--cert", cert_path, "certificate file")->required();
  verify->add_option("--rules", verify_rules, "ring-char2|poly-ac|FILE");
  verify->add_option("--sig", verify_sig, "signature file for a rules FILE");

  // saturate (debugging)
  auto* saturate = app.add_subcommand("saturate", "saturate a term and dump the e-graph");
  std::string sat_rules = "ring-char2", sat_start, sat_dump;
  std::uint64_t sat_iters = 2;
  saturate->add_option("--rules", sat_rules, "ring-char2|poly-ac|FILE");
  saturate->add_option("--start", sat_start, "starting s-expression")->required();
  saturate->add_option("--iters", sat_iters, "iterations");
  saturate->add_option("--dump", sat_dump, "dump file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen(nd_range, nv_range, per_cell, gen_seed, gen_out);
    if (run->parsed()) {
      if (!run_sig.empty()) run_args.sig_file = run_sig;
      if (run_iters) run_args.sat_iters = run_iters;
      if (run_nodes) run_args.sat_nodes = run_nodes;
      return cmd_run(run_args);
    }
    if (bench->parsed()) {
      if (bench_iters) bench_args.sat_iters = bench_iters;
      if (bench_nodes) bench_args.sat_nodes = bench_nodes;
      return cmd_bench(bench_args);
    }
    if (verify->parsed())
      return cmd_verify(cert_path, verify_rules,
                        verify_sig.empty() ? std::nullopt
                                           : std::optional<std::string>(verify_sig));
    if (saturate->parsed())
      return cmd_saturate(sat_rules, sat_start, sat_iters, sat_dump);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
