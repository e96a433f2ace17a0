#pragma once

// Shared helpers for the test suites: term shorthand, random-term and
// random-e-graph generators, and the brute-force extraction oracles that the
// sampler/argmax implementations are checked against.

#include <algorithm>
#include <map>
#include <vector>

#include "lguess/bigram.hpp"
#include "lguess/egraph.hpp"
#include "lguess/extract.hpp"
#include "lguess/rng.hpp"
#include "lguess/sexpr.hpp"
#include "lguess/term.hpp"

namespace lguess::test {

inline TermPtr t(const Signature& sig, const std::string& text) {
  return parse_sexpr(text, sig);
}

/// Uniformly random term over sig with size governed by `budget`.
inline TermPtr random_term(const Signature& sig, Rng& rng, unsigned depth_budget) {
  std::vector<Symbol> leaves, ops;
  for (Symbol s = 0; s < sig.size(); ++s)
    (sig.is_leaf(s) ? leaves : ops).push_back(s);
  if (depth_budget <= 1 || ops.empty() || rng.uniform_u64(100) < 30)
    return Term::leaf(sig, leaves[rng.uniform_index(leaves.size())]);
  Symbol op = ops[rng.uniform_index(ops.size())];
  std::vector<TermPtr> children;
  for (unsigned i = 0; i < sig.arity(op); ++i)
    children.push_back(random_term(sig, rng, depth_budget - 1));
  return Term::make(sig, op, std::move(children));
}

/// Random small e-graph: a few random terms added, then a few random unions
/// followed by an explicit saturation-free rebuild via a no-op rule pass is
/// not available publicly, so unions are created by adding pairs of terms
/// and merging through a tiny rule set instead. To keep this self-contained
/// the generator only adds terms (hashcons sharing already produces
/// interesting class structure) and optionally saturates with commutativity
/// for a couple of iterations.
struct RandomEGraph {
  std::unique_ptr<EGraph> graph;
  ClassId root;
};

inline RandomEGraph random_egraph(const Signature& sig, const RuleSet& rules, Rng& rng,
                                  unsigned n_terms, unsigned depth_budget,
                                  std::uint64_t saturate_iters) {
  auto g = std::make_unique<EGraph>(sig);
  TermPtr first = random_term(sig, rng, depth_budget);
  ClassId root = g->add_term(first);
  for (unsigned i = 1; i < n_terms; ++i) g->add_term(random_term(sig, rng, depth_budget));
  if (saturate_iters > 0)
    g->saturate(rules, SaturationLimits::iterations(saturate_iters));
  return {std::move(g), root};
}

/// Brute-force model weight of a term set: enumerate and fold prob_term.
inline long double total_prob(const std::vector<TermPtr>& terms, const BigramModel& m) {
  long double sum = 0.0L;
  for (const TermPtr& t : terms) sum += prob_term(m, *t);
  return sum;
}

/// Brute-force argmax over an enumeration, using the library's tie rule.
inline TermPtr brute_force_argmax(const std::vector<TermPtr>& terms,
                                  const BigramModel& m) {
  TermPtr best;
  long double best_w = -1.0L;
  for (const TermPtr& t : terms) {
    long double w = prob_term(m, *t);
    if (!best || weight_term_better(w, *t, best_w, *best)) {
      best = t;
      best_w = w;
    }
  }
  return best;
}

}  // namespace lguess::test
