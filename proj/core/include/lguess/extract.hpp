#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "lguess/bigram.hpp"
#include "lguess/egraph.hpp"
#include "lguess/oracle.hpp"
#include "lguess/rng.hpp"

namespace lguess {

/// Relative tolerance under which two extraction weights count as tied and
/// the (size, lexicographic) tie-break applies.
inline constexpr double kWeightTieRel = 1e-9;

/// True iff (w1, t1) is strictly better than (w2, t2): clearly larger weight,
/// or tied weight and smaller term in the canonical (size, lex) order.
bool weight_term_better(long double w1, const Term& t1, long double w2, const Term& t2);

/// Exact total model weight of the terms extractable from each class within
/// a depth budget: w(class, context, d) = sum over terms t of depth <= d of
/// the product of gamma over t's nodes, rooted at `context`. Computed
/// bottom-up in depth, polynomial in classes x contexts x depth.
class WeightTable {
 public:
  WeightTable(const EGraph& g, const BigramModel& m, std::uint32_t max_depth);

  long double weight(ClassId c, ContextId ctx, std::uint32_t depth) const;
  std::uint32_t max_depth() const { return max_depth_; }
  long double total(ClassId root) const {
    return weight(root, kRootContext, max_depth_);
  }

 private:
  std::uint32_t max_depth_;
  std::size_t contexts_;
  std::unordered_map<ClassId, std::size_t> slot_;
  std::vector<long double> w_;
};

WeightTable build_weights(const EGraph& g, ClassId root, const BigramModel& m,
                          std::uint32_t max_depth);

/// Draws a term t (depth <= table depth) with probability
/// prob_contribution(t) / total. Throws ConfigError when the total weight at
/// the root is zero.
TermPtr sample(const EGraph& g, ClassId root, const BigramModel& m,
               const WeightTable& wt, Rng& rng);

/// Most probable extractable term, ties by smallest size then lexicographic
/// s-expression. Fixpoint best-weight iteration; the depth bound caps the
/// iteration count as a safety net.
TermPtr argmax(const EGraph& g, ClassId root, const BigramModel& m,
               std::uint32_t max_depth);

struct RefineConfig {
  unsigned rounds = 10;
  double alpha = 1.5;
  std::uint32_t max_depth = 0;  // 0: caller derives 2 * depth(input) + 2
  unsigned retries_per_round = 3;
  std::uint64_t rng_seed = 1;
};

struct QueryRecord {
  unsigned round = 0;
  TermPtr current;
  TermPtr candidate;
  std::string answer;  // "current", "candidate", "skipped" or "failed"
  unsigned attempts = 0;
  double latency_ms = 0.0;
};

struct ExtractResult {
  TermPtr result;
  BigramModel model;
  std::vector<QueryRecord> log;
  bool oracle_failed = false;
};

/// The round-based refinement loop: one initial sample from m0, then per
/// round sample a candidate (re-sampling while it equals the current result,
/// up to retries_per_round; a still-equal candidate consumes the round
/// without a query), ask the oracle, update the model toward the preferred
/// term, and adopt the candidate if preferred. An oracle hard failure ends
/// the loop with the current result and oracle_failed set.
ExtractResult extract_checkpoint(const EGraph& g, ClassId root, const BigramModel& m0,
                                 Oracle& oracle, const GoalContext& goal_ctx,
                                 const RefineConfig& cfg);

}  // namespace lguess
