#include "lguess/driver.hpp"

#include <chrono>
#include <sstream>

#include "lguess/errors.hpp"
#include "lguess/sexpr.hpp"

namespace lguess {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void append_segment(Certificate& cert, const Certificate& segment) {
  if (cert.steps.empty() && !cert.initial)
    cert.initial = segment.initial;
  cert.steps.insert(cert.steps.end(), segment.steps.begin(), segment.steps.end());
}

std::string default_description(const TermPtr& start) {
  return "simplifying the s-expression " + print_sexpr(start) + ".";
}

}  // namespace

std::string to_string(RunStop r) {
  switch (r) {
    case RunStop::Converged: return "converged";
    case RunStop::Goal: return "goal";
    case RunStop::Timeout: return "timeout";
    case RunStop::PhaseLimit: return "phase-limit";
    case RunStop::OracleFailure: return "oracle-failure";
  }
  return "?";
}

RunResult run_lguess(const TermPtr& start, const RuleSet& rules, Oracle& oracle,
                     std::shared_ptr<const Goal> goal, const PhaseConfig& cfg,
                     const std::string& task_description) {
  if (cfg.max_phases < 1) throw ConfigError("phase config: max_phases must be >= 1");
  auto t0 = Clock::now();

  RunResult out;
  out.certificate.initial = start;
  out.checkpoints.push_back(start);
  out.final_term = start;
  TermPtr current = start;

  for (unsigned phase = 1; phase <= cfg.max_phases; ++phase) {
    double remaining = cfg.total_timeout_s - seconds_since(t0);
    if (remaining <= 0.0) {
      out.stop_reason = RunStop::Timeout;
      break;
    }

    EGraph g(rules.sig());
    ClassId root = g.add_term(current);
    SaturationLimits phase_limits = cfg.saturation;
    phase_limits.time_budget_s =
        phase_limits.time_budget_s
            ? std::min(*phase_limits.time_budget_s, remaining)
            : remaining;
    SaturationReport report = g.saturate(rules, phase_limits);
    out.saturation_iterations += report.iterations_run;
    out.phase_count = phase;

    if (goal) {
      if (auto witness = goal->find_witness(g, root)) {
        append_segment(out.certificate, g.explain(current, *witness));
        if (!(*witness)->equals(*current)) out.checkpoints.push_back(*witness);
        out.final_term = *witness;
        out.solved = true;
        out.stop_reason = RunStop::Goal;
        out.wall_time_s = seconds_since(t0);
        return out;
      }
    }

    RefineConfig refine = cfg.refine;
    if (refine.max_depth == 0) refine.max_depth = 2 * current->depth() + 2;
    if (refine.max_depth < current->depth())
      throw ConfigError("refine: max_depth below the phase input's depth");
    refine.rng_seed = derive_seed(cfg.refine.rng_seed, phase);

    // the task sentence stays fixed; the context term is this phase's input
    GoalContext gctx{task_description.empty() ? default_description(start)
                                              : task_description,
                     current};
    BigramModel model = default_model(rules.sig());
    ExtractResult res = extract_checkpoint(g, root, model, oracle, gctx, refine);
    for (QueryRecord& rec : res.log) {
      if (rec.answer != "skipped") ++out.oracle_queries;
      out.query_log.push_back(PhaseQuery{phase, std::move(rec)});
    }

    if (res.oracle_failed) {
      out.stop_reason = RunStop::OracleFailure;
      out.final_term = current;
      out.wall_time_s = seconds_since(t0);
      return out;
    }
    if (res.result->equals(*current)) {
      out.stop_reason = RunStop::Converged;
      out.final_term = current;
      out.wall_time_s = seconds_since(t0);
      return out;
    }

    try {
      append_segment(out.certificate, g.explain(current, res.result));
    } catch (const ExplainError& e) {
      // Keep the last certified checkpoint rather than adopt an
      // uncertifiable one; degrade like an oracle hard failure.
      QueryRecord note;
      note.answer = std::string("failed: ") + e.what();
      out.query_log.push_back(PhaseQuery{phase, std::move(note)});
      out.stop_reason = RunStop::OracleFailure;
      out.final_term = current;
      out.wall_time_s = seconds_since(t0);
      return out;
    }
    current = res.result;
    out.checkpoints.push_back(current);
    out.final_term = current;
  }

  if (out.stop_reason != RunStop::Timeout) out.stop_reason = RunStop::PhaseLimit;
  out.wall_time_s = seconds_since(t0);
  return out;
}

RunResult run_direct_es(const TermPtr& start, const RuleSet& rules,
                        std::shared_ptr<const Goal> goal,
                        const SaturationLimits& limits, double total_timeout_s) {
  limits.validate();
  if (!goal) throw ConfigError("run_direct_es needs a goal");
  auto t0 = Clock::now();

  RunResult out;
  out.certificate.initial = start;
  out.checkpoints.push_back(start);
  out.final_term = start;
  out.phase_count = 1;

  EGraph g(rules.sig());
  ClassId root = g.add_term(start);

  auto finish_solved = [&](const TermPtr& witness) {
    append_segment(out.certificate, g.explain(start, witness));
    if (!witness->equals(*start)) out.checkpoints.push_back(witness);
    out.final_term = witness;
    out.solved = true;
    out.stop_reason = RunStop::Goal;
    out.wall_time_s = seconds_since(t0);
  };

  if (auto witness = goal->find_witness(g, root)) {
    finish_solved(*witness);
    return out;
  }

  for (;;) {
    if (limits.max_iterations && out.saturation_iterations >= *limits.max_iterations) {
      out.stop_reason = RunStop::Timeout;
      break;
    }
    double remaining = total_timeout_s - seconds_since(t0);
    if (limits.time_budget_s)
      remaining = std::min(remaining, *limits.time_budget_s - seconds_since(t0));
    if (remaining <= 0.0) {
      out.stop_reason = RunStop::Timeout;
      break;
    }

    SaturationLimits step;
    step.max_iterations = 1;
    step.max_nodes = limits.max_nodes;
    step.time_budget_s = remaining;
    SaturationReport report = g.saturate(rules, step);
    out.saturation_iterations += report.iterations_run;

    if (auto witness = goal->find_witness(g, root)) {
      finish_solved(*witness);
      return out;
    }
    if (report.stop_reason == StopReason::Saturated) {
      out.stop_reason = RunStop::Converged;
      break;
    }
    if (report.stop_reason == StopReason::NodeLimit ||
        report.stop_reason == StopReason::TimeLimit) {
      out.stop_reason = RunStop::Timeout;
      break;
    }
  }
  out.wall_time_s = seconds_since(t0);
  return out;
}

std::string render_chain_prompt(const TermPtr& start, const RuleSet& rules,
                                const std::string& task_description) {
  std::ostringstream out;
  out << "I am " << (task_description.empty() ? default_description(start)
                                              : task_description)
      << "\n";
  out << "The available rewrite rules are:\n";
  for (const Rule& r : rules.rules())
    out << "  " << r.name << ": " << print_pattern(*r.lhs, rules.sig(), r.var_names)
        << " => " << print_pattern(*r.rhs, rules.sig(), r.var_names) << "\n";
  out << "Produce a complete step-by-step rewrite chain from the starting "
         "expression to the goal. Answer with one line `initial: "
      << print_sexpr(start)
      << "` followed by one line per rewrite step in the exact format\n"
         "`<rule-name> @ <dot-separated child path> -> <resulting s-expression>`\n"
         "where the path addresses the rewritten subterm (empty for the "
         "root). Output nothing else.";
  return out.str();
}

RunResult run_direct_llm(const TermPtr& start, const RuleSet& rules,
                         std::shared_ptr<const Goal> goal, ChatClient& client,
                         const std::string& task_description) {
  if (!goal) throw ConfigError("run_direct_llm needs a goal");
  auto t0 = Clock::now();

  RunResult out;
  out.certificate.initial = start;
  out.checkpoints.push_back(start);
  out.final_term = start;
  out.phase_count = 1;
  out.oracle_queries = 1;
  out.stop_reason = RunStop::OracleFailure;

  std::string response;
  try {
    response = client.complete(
        {{"user", render_chain_prompt(start, rules, task_description)}});
  } catch (const OracleError&) {
    out.wall_time_s = seconds_since(t0);
    return out;
  }

  // keep only the lines that look like certificate content
  std::istringstream in(response);
  std::ostringstream filtered;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find("initial:") != std::string::npos ||
        (line.find(" @ ") != std::string::npos && line.find(" -> ") != std::string::npos))
      filtered << line << '\n';
  }

  Certificate cert;
  try {
    cert = certificate_from_string(filtered.str(), rules.sig());
  } catch (const ParseError&) {
    out.wall_time_s = seconds_since(t0);
    return out;
  }

  out.certificate = cert;
  ChainVerdict verdict = verify_chain(cert, rules);
  bool starts_right = cert.initial->equals(*start);
  const TermPtr& final = cert.final_term();
  if (verdict.ok && starts_right && goal->matches(*final)) {
    out.solved = true;
    out.final_term = final;
    out.checkpoints.push_back(final);
    out.stop_reason = RunStop::Goal;
  }
  out.wall_time_s = seconds_since(t0);
  return out;
}

}  // namespace lguess
