#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lguess/driver.hpp"
#include "lguess/tasks.hpp"

namespace lguess {

enum class Solver : std::uint8_t { LGuess, DirectES, DirectLLM };

Solver solver_from_string(const std::string& name);
std::string to_string(Solver s);

struct BenchOptions {
  Solver solver = Solver::LGuess;
  PhaseConfig phase;                           // lguess
  SaturationLimits es_limits = SaturationLimits::seconds(150.0);  // direct-es
  std::function<std::unique_ptr<Oracle>()> make_oracle;           // per task
  std::function<std::shared_ptr<ChatClient>()> make_chat_client;  // direct-llm
  unsigned parallelism = 1;
  bool with_timings = false;  // timings make result files non-reproducible
};

struct BenchTaskResult {
  std::string id;
  unsigned n_d = 0;
  unsigned n_v = 0;
  bool solved = false;
  unsigned phases = 0;
  std::uint64_t iterations = 0;
  unsigned oracle_queries = 0;
  std::string stop_reason;
  std::string final_sexpr;
  bool certificate_ok = false;
  double wall_time_s = 0.0;
};

struct BenchSummary {
  std::vector<BenchTaskResult> results;  // dataset order
  // (n_d, n_v) -> (solved, total)
  std::map<std::pair<unsigned, unsigned>, std::pair<unsigned, unsigned>> grid;
  unsigned solved_total = 0;
};

/// Runs every task under its own e-graph, model, rng stream and oracle, up to
/// `parallelism` tasks concurrently; results are merged in dataset order.
/// Every solved run's certificate is re-verified and recorded.
BenchSummary run_bench(const std::vector<Task>& dataset, const RuleSet& rules,
                       const BenchOptions& options);

/// One JSON object per task, dataset order. Timing fields only with
/// with_timings.
void write_results_jsonl(const BenchSummary& summary, const std::string& path,
                         bool with_timings);
std::string results_to_jsonl(const BenchSummary& summary, bool with_timings);

/// Solved-count grid: rows n_d ascending, columns n_v ascending.
void write_grid_csv(const BenchSummary& summary, const std::string& path);
std::string grid_to_csv(const BenchSummary& summary);

}  // namespace lguess
