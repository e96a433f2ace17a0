#include <cassert>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "lguess/egraph.hpp"
#include "lguess/errors.hpp"
#include "lguess/sexpr.hpp"

namespace lguess {

/// Turns the justified-union forest of an EGraph into term-level rewrite
/// chains. Each rule union connects the lhs-instance root e-node with the
/// rhs-instance root e-node and records the substitution (variable -> class),
/// so a chain step instantiates both pattern sides with deterministic
/// representative terms ("flats": min-id e-node of a class, expanded
/// recursively). Congruence unions need no steps because flats are
/// per-canonical-class. Alignment between a carried term and a pattern
/// instantiation descends structurally and recurses into child classes.
class Explainer {
 public:
  explicit Explainer(const EGraph& g)
      : g_(g), rules_(g.rules_ ? g.rules_.get() : nullptr) {}

  Certificate run(const TermPtr& from, const TermPtr& to) {
    Certificate cert;
    cert.initial = from;
    cert.steps = explain_terms(from, to);
    return cert;
  }

 private:
  using Steps = std::vector<CertStep>;

  struct TravEdge {
    ENodeId from;
    ENodeId to;
    const EGraph::Justification* just;
    bool lhs_at_from;  // justification's lhs side sits at `from`
  };

  TermPtr class_flat(ClassId c) {
    c = g_.find(c);
    auto it = flat_memo_.find(c);
    if (it != flat_memo_.end()) return it->second;
    TermPtr t = node_flat(g_.classes_[c].min_node);
    flat_memo_.emplace(c, t);
    return t;
  }

  // Terminates because the min-id e-node of any class has children whose
  // classes contain e-nodes with strictly smaller ids.
  TermPtr node_flat(ENodeId n) {
    const auto& rec = g_.enodes_[n];
    std::vector<TermPtr> children;
    children.reserve(rec.children.size());
    for (ClassId ch : rec.children) children.push_back(class_flat(ch));
    return Term::make(*g_.sig_, rec.op, std::move(children));
  }

  TermPtr instantiate(const Pattern& p, const std::vector<TermPtr>& var_terms) {
    if (p.is_var()) {
      if (!var_terms[p.var_id()])
        throw ExplainError("internal: unbound variable in justification");
      return var_terms[p.var_id()];
    }
    std::vector<TermPtr> children;
    children.reserve(p.children().size());
    for (const PatternPtr& c : p.children())
      children.push_back(instantiate(*c, var_terms));
    return Term::make(*g_.sig_, p.op_symbol(), std::move(children));
  }

  bool traversal_allowed(const EGraph::Justification& just, bool lhs_at_from) const {
    if (just.is_congruence() || lhs_at_from) return true;
    return rules_ && rules_->inverse_of(just.rule).has_value();
  }

  void build_adjacency() {
    if (adjacency_built_) return;
    adjacency_built_ = true;
    adj_.assign(g_.enodes_.size(), {});
    for (ENodeId n = 0; n < g_.forest_.size(); ++n) {
      if (!g_.forest_[n]) continue;
      const auto& e = *g_.forest_[n];
      adj_[n].push_back({e.to, e.just.get(), e.forward});
      adj_[e.to].push_back({n, e.just.get(), !e.forward});
    }
    for (const auto& alt : g_.alt_edges_) {
      adj_[alt.from].push_back({alt.to, alt.just.get(), true});
      adj_[alt.to].push_back({alt.from, alt.just.get(), false});
    }
  }

  struct Hop {
    ENodeId to;
    const EGraph::Justification* just;
    bool lhs_at_from;
  };

  // BFS between two e-nodes of one class, first over forward-replayable
  // traversals only, then (if disconnected that way) over everything.
  std::vector<TravEdge> find_path(ENodeId a, ENodeId b) {
    build_adjacency();
    for (int pass = 0; pass < 2; ++pass) {
      std::unordered_map<ENodeId, std::pair<ENodeId, const Hop*>> parent;
      std::vector<ENodeId> queue{a};
      parent.emplace(a, std::make_pair(a, nullptr));
      for (std::size_t i = 0; i < queue.size() && !parent.count(b); ++i) {
        ENodeId u = queue[i];
        for (const Hop& hop : adj_[u]) {
          if (parent.count(hop.to)) continue;
          if (pass == 0 && !traversal_allowed(*hop.just, hop.lhs_at_from)) continue;
          parent.emplace(hop.to, std::make_pair(u, &hop));
          queue.push_back(hop.to);
        }
      }
      if (!parent.count(b)) continue;
      std::vector<TravEdge> path;
      for (ENodeId n = b; n != a;) {
        auto& [prev, hop] = parent.at(n);
        path.push_back({prev, n, hop->just, hop->lhs_at_from});
        n = prev;
      }
      std::reverse(path.begin(), path.end());
      return path;
    }
    throw ExplainError("internal: terms share a class but no justification path");
  }

  Steps explain_terms(const TermPtr& from, const TermPtr& to) {
    if (from->equals(*to)) return {};
    if (budget_ == 0) throw ExplainError("explanation budget exceeded");
    --budget_;

    auto key = std::make_pair(print_sexpr(from), print_sexpr(to));
    if (!in_flight_.insert(key).second)
      throw ExplainError("cyclic explanation for " + key.first + " = " + key.second);
    struct Guard {
      std::set<std::pair<std::string, std::string>>& s;
      const std::pair<std::string, std::string>& k;
      ~Guard() { s.erase(k); }
    } guard{in_flight_, key};

    auto a = g_.lookup(from);
    auto b = g_.lookup(to);
    if (!a || !b) throw ExplainError("term not represented in e-graph");
    if (g_.class_of(*a) != g_.class_of(*b))
      throw ExplainError("terms are not equivalent in this e-graph");

    Steps steps;
    TermPtr cur = from;
    if (*a != *b) {
      for (const TravEdge& e : find_path(*a, *b)) {
        if (e.just->is_congruence()) continue;  // same shape, no step needed
        if (!rules_) throw ExplainError("e-graph has no recorded rule set");
        const Rule& rule = rules_->rules()[e.just->rule];
        const Pattern* lhs = rule.lhs.get();
        const Pattern* rhs = rule.rhs.get();
        std::string step_name = rule.name;
        if (!e.lhs_at_from) {
          auto inv = rules_->inverse_of(e.just->rule);
          if (!inv)
            throw ExplainError("chain needs the reverse of one-directional rule '" +
                               rule.name + "', which has no inverse in the set");
          std::swap(lhs, rhs);
          step_name = rules_->rules()[*inv].name;
        }
        std::vector<TermPtr> var_terms(rule.var_names.size());
        for (std::size_t v = 0; v < var_terms.size(); ++v)
          if (e.just->subst[v] != kNoClass)
            var_terms[v] = class_flat(e.just->subst[v]);
        // Keep step endpoints aligned with the edge's endpoint e-nodes when a
        // pattern side is a bare variable.
        if (rhs->is_var()) var_terms[rhs->var_id()] = node_flat(e.to);
        if (lhs->is_var()) var_terms[lhs->var_id()] = node_flat(e.from);

        TermPtr before = instantiate(*lhs, var_terms);
        align(steps, cur, before);
        TermPtr after = instantiate(*rhs, var_terms);
        steps.push_back(CertStep{step_name, {}, after});
        cur = after;
      }
    }
    align(steps, cur, to);
    return steps;
  }

  // cur and target are terms of the same e-node shape: equal root operator,
  // children pairwise in the same class. Rewrites cur into target child by
  // child, splicing the child chains at their positions.
  void align(Steps& steps, TermPtr& cur, const TermPtr& target) {
    if (cur->equals(*target)) {
      cur = target;
      return;
    }
    if (cur->op() != target->op())
      throw ExplainError("internal: chain misaligned at " + print_sexpr(cur) +
                         " vs " + print_sexpr(target));
    for (std::uint32_t k = 0; k < cur->children().size(); ++k) {
      if (cur->child(k)->equals(*target->child(k))) continue;
      Steps sub = explain_terms(cur->child(k), target->child(k));
      for (CertStep& s : sub) {
        Position pos;
        pos.reserve(1 + s.position.size());
        pos.push_back(k);
        pos.insert(pos.end(), s.position.begin(), s.position.end());
        std::uint32_t child_path[1] = {k};
        TermPtr next = replace_at(cur, child_path, s.result);
        steps.push_back(CertStep{std::move(s.rule_name), std::move(pos), next});
        cur = next;
      }
      if (!cur->child(k)->equals(*target->child(k)))
        throw ExplainError("internal: child alignment incomplete");
    }
    cur = target;
  }

  const EGraph& g_;
  const RuleSet* rules_;
  std::unordered_map<ClassId, TermPtr> flat_memo_;
  std::set<std::pair<std::string, std::string>> in_flight_;
  std::size_t budget_ = 1u << 20;
  bool adjacency_built_ = false;
  std::vector<std::vector<Hop>> adj_;
};

Certificate EGraph::explain(const TermPtr& t1, const TermPtr& t2) const {
  Explainer ex(*this);
  Certificate cert = ex.run(t1, t2);
  if (!cert.steps.empty()) {
    if (!rules_) throw ExplainError("e-graph has no recorded rule set");
    ChainVerdict verdict = verify_chain(cert, *rules_);
    if (!verdict.ok)
      throw ExplainError("internal: produced chain fails verification at step " +
                         std::to_string(verdict.failing_step) + ": " + verdict.reason);
  }
  return cert;
}

}  // namespace lguess
