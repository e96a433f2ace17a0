#include "lguess/bench.hpp"

#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "lguess/errors.hpp"
#include "lguess/sexpr.hpp"

namespace lguess {

Solver solver_from_string(const std::string& name) {
  if (name == "lguess") return Solver::LGuess;
  if (name == "direct-es") return Solver::DirectES;
  if (name == "direct-llm") return Solver::DirectLLM;
  throw ConfigError("unknown solver: " + name + " (want lguess|direct-es|direct-llm)");
}

std::string to_string(Solver s) {
  switch (s) {
    case Solver::LGuess: return "lguess";
    case Solver::DirectES: return "direct-es";
    case Solver::DirectLLM: return "direct-llm";
  }
  return "?";
}

namespace {

std::string task_description_for(const Task& task) {
  return "factorizing the polynomial s-expression " + print_sexpr(task.start) +
         " into a product of sums (a multiplication form).";
}

BenchTaskResult run_one(const Task& task, const RuleSet& rules,
                        const BenchOptions& options, std::size_t index) {
  BenchTaskResult r;
  r.id = task.id;
  r.n_d = task.spec.n_d;
  r.n_v = task.spec.n_v;

  auto goal = Goal::multiplication_form();
  RunResult run;
  switch (options.solver) {
    case Solver::LGuess: {
      if (!options.make_oracle)
        throw ConfigError("bench: lguess requires an oracle factory");
      std::unique_ptr<Oracle> oracle = options.make_oracle();
      PhaseConfig cfg = options.phase;
      cfg.refine.rng_seed = derive_seed(options.phase.refine.rng_seed, index);
      run = run_lguess(task.start, rules, *oracle, goal, cfg,
                       task_description_for(task));
      break;
    }
    case Solver::DirectES:
      run = run_direct_es(task.start, rules, goal, options.es_limits,
                          options.phase.total_timeout_s);
      break;
    case Solver::DirectLLM: {
      if (!options.make_chat_client)
        throw ConfigError("bench: direct-llm requires a chat client factory");
      auto client = options.make_chat_client();
      run = run_direct_llm(task.start, rules, goal, *client,
                           task_description_for(task));
      break;
    }
  }

  r.solved = run.solved;
  r.phases = run.phase_count;
  r.iterations = run.saturation_iterations;
  r.oracle_queries = run.oracle_queries;
  r.stop_reason = to_string(run.stop_reason);
  r.final_sexpr = print_sexpr(run.final_term);
  r.wall_time_s = run.wall_time_s;
  r.certificate_ok = verify_chain(run.certificate, rules).ok &&
                     run.certificate.final_term()->equals(*run.final_term);
  return r;
}

}  // namespace

BenchSummary run_bench(const std::vector<Task>& dataset, const RuleSet& rules,
                       const BenchOptions& options) {
  BenchSummary summary;
  summary.results.resize(dataset.size());

  unsigned workers = std::max(1u, options.parallelism);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::atomic<bool> failed{false};
  std::string error;
  std::mutex error_mu;

  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= dataset.size() || failed.load()) return;
      try {
        summary.results[i] = run_one(dataset[i], rules, options, i);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mu);
        failed = true;
        error = std::string("task ") + dataset[i].id + ": " + e.what();
        return;
      }
    }
  };
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failed) throw ConfigError("bench failed: " + error);

  for (const BenchTaskResult& r : summary.results) {
    auto& cell = summary.grid[{r.n_d, r.n_v}];
    ++cell.second;
    if (r.solved) {
      ++cell.first;
      ++summary.solved_total;
    }
  }
  return summary;
}

std::string results_to_jsonl(const BenchSummary& summary, bool with_timings) {
  std::ostringstream out;
  for (const BenchTaskResult& r : summary.results) {
    nlohmann::json j;
    j["id"] = r.id;
    j["n_d"] = r.n_d;
    j["n_v"] = r.n_v;
    j["solved"] = r.solved;
    j["phases"] = r.phases;
    j["iterations"] = r.iterations;
    j["oracle_queries"] = r.oracle_queries;
    j["stop_reason"] = r.stop_reason;
    j["final"] = r.final_sexpr;
    j["certificate_ok"] = r.certificate_ok;
    if (with_timings) j["wall_time_s"] = r.wall_time_s;
    out << j.dump() << '\n';
  }
  return out.str();
}

void write_results_jsonl(const BenchSummary& summary, const std::string& path,
                         bool with_timings) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write results file: " + path);
  out << results_to_jsonl(summary, with_timings);
}

std::string grid_to_csv(const BenchSummary& summary) {
  std::set<unsigned> nds, nvs;
  for (const auto& [key, cell] : summary.grid) {
    nds.insert(key.first);
    nvs.insert(key.second);
  }
  std::ostringstream out;
  out << "n_d\\n_v";
  for (unsigned nv : nvs) out << ',' << nv;
  out << '\n';
  for (unsigned nd : nds) {
    out << nd;
    for (unsigned nv : nvs) {
      auto it = summary.grid.find({nd, nv});
      out << ',' << (it == summary.grid.end() ? 0u : it->second.first);
    }
    out << '\n';
  }
  return out.str();
}

void write_grid_csv(const BenchSummary& summary, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write grid file: " + path);
  out << grid_to_csv(summary);
}

}  // namespace lguess
