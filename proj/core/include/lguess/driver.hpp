#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lguess/certificate.hpp"
#include "lguess/egraph.hpp"
#include "lguess/extract.hpp"
#include "lguess/goal.hpp"
#include "lguess/oracle.hpp"

namespace lguess {

struct PhaseConfig {
  SaturationLimits saturation = SaturationLimits::seconds(5.0);
  RefineConfig refine;  // rounds 10, alpha 1.5, max_depth 0 = auto per phase
  unsigned max_phases = 30;
  double total_timeout_s = 150.0;
  std::uint64_t memory_limit_bytes = 24ull << 30;  // advisory only
};

enum class RunStop : std::uint8_t {
  Converged,
  Goal,
  Timeout,
  PhaseLimit,
  OracleFailure,
};

std::string to_string(RunStop r);

struct PhaseQuery {
  unsigned phase;
  QueryRecord record;
};

struct RunResult {
  bool solved = false;
  TermPtr final_term;
  std::vector<TermPtr> checkpoints;  // starts with the input term
  Certificate certificate;
  unsigned phase_count = 0;
  double wall_time_s = 0.0;
  unsigned oracle_queries = 0;
  RunStop stop_reason = RunStop::Converged;
  std::uint64_t saturation_iterations = 0;
  std::vector<PhaseQuery> query_log;
};

/// The multi-phase loop: per phase, saturate a fresh e-graph from the current
/// term; if a goal is given and represented, extract the smallest witness and
/// stop (no oracle query that phase); otherwise refine a fresh default bigram
/// model against the oracle and take its result as the checkpoint. Stops when
/// a checkpoint repeats (converged), at the phase cap or the total timeout;
/// an oracle hard failure keeps the last sound checkpoint. Every certificate
/// segment is verified as it is appended.
RunResult run_lguess(const TermPtr& start, const RuleSet& rules, Oracle& oracle,
                     std::shared_ptr<const Goal> goal, const PhaseConfig& cfg,
                     const std::string& task_description = "");

/// Plain equality saturation with the goal checked after every iteration.
RunResult run_direct_es(const TermPtr& start, const RuleSet& rules,
                        std::shared_ptr<const Goal> goal,
                        const SaturationLimits& limits,
                        double total_timeout_s = 150.0);

/// Asks the chat model for a complete rewrite chain in the certificate text
/// format and verifies it; solved iff the chain replays from `start` and its
/// final term satisfies the goal.
RunResult run_direct_llm(const TermPtr& start, const RuleSet& rules,
                         std::shared_ptr<const Goal> goal, ChatClient& client,
                         const std::string& task_description);

/// The prompt used by run_direct_llm (exposed for tests and logging).
std::string render_chain_prompt(const TermPtr& start, const RuleSet& rules,
                                const std::string& task_description);

}  // namespace lguess
