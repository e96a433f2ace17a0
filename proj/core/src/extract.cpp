#include "lguess/extract.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "lguess/errors.hpp"
#include "lguess/sexpr.hpp"

namespace lguess {

bool weight_term_better(long double w1, const Term& t1, long double w2,
                        const Term& t2) {
  long double scale = std::max(std::abs(w1), std::abs(w2));
  long double tol = scale * kWeightTieRel;
  if (w1 > w2 + tol) return true;
  if (w2 > w1 + tol) return false;
  return term_cmp(t1, t2) < 0;
}

WeightTable::WeightTable(const EGraph& g, const BigramModel& m,
                         std::uint32_t max_depth)
    : max_depth_(max_depth), contexts_(m.contexts().count()) {
  if (!(m.sig() == g.sig()))
    throw ConfigError("weight table: model over a different signature");
  std::vector<ClassId> classes = g.canonical_classes();
  slot_.reserve(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) slot_.emplace(classes[i], i);
  w_.assign(classes.size() * contexts_ * (max_depth_ + 1), 0.0L);

  const ContextTable& ctxs = m.contexts();
  for (std::uint32_t d = 1; d <= max_depth_; ++d) {
    for (ClassId c : classes) {
      // per-op sums of child-weight products at depth d-1
      std::vector<std::pair<Symbol, long double>> op_sums;
      for (ENodeId n : g.canonical_nodes(c)) {
        auto view = g.node(n);
        long double prod = 1.0L;
        for (std::size_t k = 0; k < view.children.size() && prod > 0.0L; ++k)
          prod *= weight(g.find(view.children[k]),
                         ctxs.child_context(view.op, static_cast<unsigned>(k)), d - 1);
        if (prod <= 0.0L) continue;
        bool found = false;
        for (auto& [op, sum] : op_sums)
          if (op == view.op) {
            sum += prod;
            found = true;
            break;
          }
        if (!found) op_sums.emplace_back(view.op, prod);
      }
      std::size_t base = (slot_.at(c) * contexts_) * (max_depth_ + 1);
      for (ContextId ctx = 0; ctx < contexts_; ++ctx) {
        long double total = 0.0L;
        for (auto& [op, sum] : op_sums) total += m.prob(ctx, op) * sum;
        w_[base + ctx * (max_depth_ + 1) + d] = total;
      }
    }
  }
}

long double WeightTable::weight(ClassId c, ContextId ctx, std::uint32_t depth) const {
  if (depth > max_depth_) depth = max_depth_;
  auto it = slot_.find(c);
  if (it == slot_.end()) return 0.0L;
  return w_[(it->second * contexts_ + ctx) * (max_depth_ + 1) + depth];
}

WeightTable build_weights(const EGraph& g, ClassId root, const BigramModel& m,
                          std::uint32_t max_depth) {
  (void)root;
  return WeightTable(g, m, max_depth);
}

namespace {

TermPtr sample_rec(const EGraph& g, ClassId c, ContextId ctx, std::uint32_t depth,
                   const BigramModel& m, const WeightTable& wt, Rng& rng) {
  c = g.find(c);
  long double total = wt.weight(c, ctx, depth);
  if (total <= 0.0L)
    throw ConfigError("sample: zero total weight (class has no term within depth)");
  const ContextTable& ctxs = m.contexts();

  long double r = static_cast<long double>(rng.uniform_real()) * total;
  ENodeId picked = 0;
  bool have = false;
  for (ENodeId n : g.canonical_nodes(c)) {
    auto view = g.node(n);
    long double wn = m.prob(ctx, view.op);
    for (std::size_t k = 0; k < view.children.size() && wn > 0.0L; ++k)
      wn *= wt.weight(g.find(view.children[k]),
                      ctxs.child_context(view.op, static_cast<unsigned>(k)), depth - 1);
    if (wn <= 0.0L) continue;
    picked = n;
    have = true;
    if (r < wn) break;
    r -= wn;
  }
  if (!have) throw ConfigError("sample: no viable e-node despite positive weight");

  auto view = g.node(picked);
  std::vector<TermPtr> children;
  children.reserve(view.children.size());
  for (std::size_t k = 0; k < view.children.size(); ++k)
    children.push_back(sample_rec(g, view.children[k],
                                  ctxs.child_context(view.op, static_cast<unsigned>(k)),
                                  depth - 1, m, wt, rng));
  return Term::make(g.sig(), view.op, std::move(children));
}

}  // namespace

TermPtr sample(const EGraph& g, ClassId root, const BigramModel& m,
               const WeightTable& wt, Rng& rng) {
  return sample_rec(g, g.find(root), kRootContext, wt.max_depth(), m, wt, rng);
}

TermPtr argmax(const EGraph& g, ClassId root, const BigramModel& m,
               std::uint32_t max_depth) {
  struct Best {
    long double w = -1.0L;
    TermPtr term;
  };
  const ContextTable& ctxs = m.contexts();
  std::size_t n_ctx = ctxs.count();
  std::vector<ClassId> classes = g.canonical_classes();
  std::unordered_map<ClassId, std::size_t> slot;
  for (std::size_t i = 0; i < classes.size(); ++i) slot.emplace(classes[i], i);
  std::vector<Best> best(classes.size() * n_ctx);

  auto at = [&](ClassId c, ContextId ctx) -> Best& {
    return best[slot.at(g.find(c)) * n_ctx + ctx];
  };

  // All probabilities are < 1 for signatures with >= 2 symbols, so going
  // around a cycle only shrinks the product; the fixpoint converges. The
  // sweep cap is a safety net for degenerate gamma = 1 cases.
  std::size_t max_sweeps = classes.size() * n_ctx + max_depth + 8;
  bool changed = true;
  for (std::size_t sweep = 0; changed && sweep < max_sweeps; ++sweep) {
    changed = false;
    for (ClassId c : classes) {
      for (ENodeId n : g.canonical_nodes(c)) {
        auto view = g.node(n);
        // children bests are context-specific; gather once per node
        std::vector<TermPtr> child_terms(view.children.size());
        std::vector<long double> child_w(view.children.size());
        bool viable = true;
        for (std::size_t k = 0; k < view.children.size() && viable; ++k) {
          Best& cb = at(view.children[k],
                        ctxs.child_context(view.op, static_cast<unsigned>(k)));
          if (!cb.term)
            viable = false;
          else {
            child_terms[k] = cb.term;
            child_w[k] = cb.w;
          }
        }
        if (!viable) continue;
        for (ContextId ctx = 0; ctx < n_ctx; ++ctx) {
          long double w = m.prob(ctx, view.op);
          for (long double cw : child_w) w *= cw;
          Best& slot_best = at(c, ctx);
          if (!slot_best.term) {
            std::vector<TermPtr> copy(child_terms);
            slot_best = {w, Term::make(g.sig(), view.op, std::move(copy))};
            changed = true;
          } else {
            TermPtr cand = Term::make(g.sig(), view.op,
                                      std::vector<TermPtr>(child_terms));
            if (weight_term_better(w, *cand, slot_best.w, *slot_best.term)) {
              slot_best = {w, cand};
              changed = true;
            }
          }
        }
      }
    }
  }

  Best& root_best = at(root, kRootContext);
  if (!root_best.term)
    throw ConfigError("argmax: zero total weight (no finite term extractable)");
  return root_best.term;
}

ExtractResult extract_checkpoint(const EGraph& g, ClassId root, const BigramModel& m0,
                                 Oracle& oracle, const GoalContext& goal_ctx,
                                 const RefineConfig& cfg) {
  if (cfg.rounds < 1) throw ConfigError("refine: rounds must be >= 1");
  if (cfg.max_depth < 1) throw ConfigError("refine: max_depth must be >= 1");
  UpdateConfig update_cfg(cfg.alpha);

  Rng rng(cfg.rng_seed);
  ExtractResult out{nullptr, m0, {}, false};

  WeightTable table(g, out.model, cfg.max_depth);
  out.result = sample(g, root, out.model, table, rng);

  bool model_dirty = false;
  for (unsigned round = 1; round <= cfg.rounds; ++round) {
    if (model_dirty) {
      table = WeightTable(g, out.model, cfg.max_depth);
      model_dirty = false;
    }
    TermPtr candidate = sample(g, root, out.model, table, rng);
    for (unsigned retry = 0;
         candidate->equals(*out.result) && retry < cfg.retries_per_round; ++retry)
      candidate = sample(g, root, out.model, table, rng);

    QueryRecord rec;
    rec.round = round;
    rec.current = out.result;
    rec.candidate = candidate;
    if (candidate->equals(*out.result)) {
      rec.answer = "skipped";
      out.log.push_back(std::move(rec));
      continue;
    }

    auto t0 = std::chrono::steady_clock::now();
    try {
      Preference pref = oracle.compare(goal_ctx, out.result, candidate);
      rec.latency_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
              .count();
      rec.attempts = pref.attempts;
      rec.answer = to_string(pref.choice);
      if (pref.choice == Choice::Candidate) {
        out.model = update(out.model, *candidate, *out.result, update_cfg);
        out.result = candidate;
      } else {
        out.model = update(out.model, *out.result, *candidate, update_cfg);
      }
      model_dirty = true;
      out.log.push_back(std::move(rec));
    } catch (const OracleError& e) {
      rec.latency_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
              .count();
      rec.answer = std::string("failed: ") + e.what();
      out.log.push_back(std::move(rec));
      out.oracle_failed = true;
      break;
    }
  }
  return out;
}

}  // namespace lguess
