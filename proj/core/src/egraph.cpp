#include "lguess/egraph.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <sstream>

#include "lguess/errors.hpp"
#include "lguess/sexpr.hpp"

namespace lguess {

void SaturationLimits::validate() const {
  if (!max_iterations && !max_nodes && !time_budget_s)
    throw ConfigError("saturation limits: at least one limit must be set");
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::Saturated: return "saturated";
    case StopReason::IterationLimit: return "iteration-limit";
    case StopReason::NodeLimit: return "node-limit";
    case StopReason::TimeLimit: return "time-limit";
  }
  return "?";
}

EGraph::EGraph(const Signature& sig, std::size_t hard_node_cap)
    : sig_(&sig), hard_node_cap_(hard_node_cap) {}

ClassId EGraph::find(ClassId c) const {
  // Path halving; logically const.
  auto& parent = const_cast<std::vector<ClassId>&>(uf_parent_);
  while (parent[c] != c) {
    parent[c] = parent[parent[c]];
    c = parent[c];
  }
  return c;
}

std::size_t EGraph::class_count() const {
  std::size_t n = 0;
  for (ClassId c = 0; c < uf_parent_.size(); ++c)
    if (uf_parent_[c] == c) ++n;
  return n;
}

std::vector<ClassId> EGraph::canonical_classes() const {
  std::vector<ClassId> out;
  for (ClassId c = 0; c < uf_parent_.size(); ++c)
    if (uf_parent_[c] == c) out.push_back(c);
  return out;
}

std::uint64_t EGraph::node_key_hash(Symbol op,
                                    const std::vector<ClassId>& children) const {
  std::uint64_t h = 0x9ae16a3b2f90404fULL ^ (op * 0x9e3779b97f4a7c15ULL);
  for (ClassId c : children) {
    h ^= c + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
  }
  return h;
}

std::vector<ClassId> EGraph::canonical_children(ENodeId n) const {
  std::vector<ClassId> out = enodes_[n].children;
  for (ClassId& c : out) c = find(c);
  return out;
}

bool EGraph::same_key(ENodeId a, Symbol op,
                      const std::vector<ClassId>& children) const {
  const ENodeRec& rec = enodes_[a];
  if (rec.op != op || rec.children.size() != children.size()) return false;
  for (std::size_t i = 0; i < children.size(); ++i)
    if (find(rec.children[i]) != children[i]) return false;
  return true;
}

ENodeId* EGraph::hashcons_find(Symbol op, const std::vector<ClassId>& children,
                               std::uint64_t h) {
  auto [lo, hi] = hashcons_.equal_range(h);
  for (auto it = lo; it != hi; ++it)
    if (enodes_[it->second].in_hashcons && same_key(it->second, op, children))
      return &it->second;
  return nullptr;
}

ClassId EGraph::fresh_class(ENodeId n) {
  ClassId c = static_cast<ClassId>(uf_parent_.size());
  uf_parent_.push_back(c);
  uf_size_.push_back(1);
  classes_.push_back(EClass{{n}, {}, n});
  return c;
}

std::pair<ClassId, ENodeId> EGraph::add_enode(Symbol op,
                                              std::vector<ClassId> children) {
  for (ClassId& c : children) c = find(c);
  std::uint64_t h = node_key_hash(op, children);
  if (ENodeId* hit = hashcons_find(op, children, h))
    return {class_of(*hit), *hit};

  if (enodes_.size() >= hard_node_cap_)
    throw ConfigError("e-graph node limit exceeded");

  ENodeId id = static_cast<ENodeId>(enodes_.size());
  enodes_.push_back(ENodeRec{op, children, kNoClass, h, true});
  forest_.emplace_back();
  ClassId c = fresh_class(id);
  enodes_[id].cls = c;
  for (ClassId child : children) {
    ClassId cc = find(child);
    classes_[cc].parents.push_back(id);
  }
  hashcons_.emplace(h, id);
  return {c, id};
}

ClassId EGraph::add_term(const TermPtr& t) {
  if (!(t->sig() == *sig_))
    throw ConfigError("add_term: term over a different signature");
  std::vector<ClassId> children;
  children.reserve(t->children().size());
  for (const TermPtr& c : t->children()) children.push_back(add_term(c));
  return add_enode(t->op(), std::move(children)).first;
}

std::optional<ENodeId> EGraph::lookup(const TermPtr& t) const {
  std::vector<ClassId> children;
  children.reserve(t->children().size());
  for (const TermPtr& c : t->children()) {
    auto n = lookup(c);
    if (!n) return std::nullopt;
    children.push_back(class_of(*n));
  }
  std::uint64_t h = node_key_hash(t->op(), children);
  auto* self = const_cast<EGraph*>(this);
  if (ENodeId* hit = self->hashcons_find(t->op(), children, h)) return *hit;
  return std::nullopt;
}

void EGraph::make_forest_root(ENodeId n) {
  // Reverse the parent chain from n so n becomes the root of its tree.
  std::vector<ENodeId> chain{n};
  while (forest_[chain.back()]) chain.push_back(forest_[chain.back()]->to);
  for (std::size_t i = chain.size(); i-- > 1;) {
    Edge e = *forest_[chain[i - 1]];
    forest_[chain[i]] = Edge{chain[i - 1], e.just, !e.forward};
  }
  forest_[n].reset();
}

void EGraph::record_alt_edge(ENodeId u, ENodeId v, Justification just) {
  if (u == v) return;
  std::uint64_t a = std::min(u, v), b = std::max(u, v);
  std::uint64_t key = (a << 40) ^ (b << 16) ^ (just.rule + 1);
  if (!alt_seen_.insert(key).second) return;
  alt_edges_.push_back(
      AltEdge{u, v, std::make_shared<const Justification>(std::move(just))});
}

void EGraph::union_with_reason(ENodeId u, ENodeId v, Justification just) {
  ClassId cu = class_of(u);
  ClassId cv = class_of(v);
  if (cu == cv) {
    record_alt_edge(u, v, std::move(just));
    return;
  }

  make_forest_root(u);
  forest_[u] = Edge{v, std::make_shared<const Justification>(std::move(just)), true};

  ClassId winner = cu, loser = cv;
  if (uf_size_[winner] < uf_size_[loser] ||
      (uf_size_[winner] == uf_size_[loser] && loser < winner))
    std::swap(winner, loser);
  uf_parent_[loser] = winner;
  uf_size_[winner] += uf_size_[loser];

  EClass& w = classes_[winner];
  EClass& l = classes_[loser];
  w.min_node = std::min(w.min_node, l.min_node);
  w.nodes.insert(w.nodes.end(), l.nodes.begin(), l.nodes.end());
  w.parents.insert(w.parents.end(), l.parents.begin(), l.parents.end());
  l.nodes.clear();
  l.nodes.shrink_to_fit();
  l.parents.clear();
  l.parents.shrink_to_fit();
  pending_.push_back(winner);
}

void EGraph::rebuild() {
  while (!pending_.empty()) {
    ClassId c = find(pending_.back());
    pending_.pop_back();
    std::vector<ENodeId> parents = std::move(classes_[c].parents);
    classes_[c].parents.clear();
    std::vector<ENodeId> kept;
    kept.reserve(parents.size());
    for (ENodeId p : parents) {
      ENodeRec& rec = enodes_[p];
      if (!rec.in_hashcons) continue;  // already congruence-deduped
      // remove the stale hashcons entry for p
      auto [lo, hi] = hashcons_.equal_range(rec.key_hash);
      for (auto it = lo; it != hi; ++it)
        if (it->second == p) {
          hashcons_.erase(it);
          break;
        }
      std::vector<ClassId> canon = canonical_children(p);
      std::uint64_t h = node_key_hash(rec.op, canon);
      if (ENodeId* hit = hashcons_find(rec.op, canon, h)) {
        // congruent with an existing node
        rec.in_hashcons = false;
        if (class_of(p) != class_of(*hit))
          union_with_reason(p, *hit, Justification{});
        else
          record_alt_edge(p, *hit, Justification{});
      } else {
        rec.key_hash = h;
        hashcons_.emplace(h, p);
        kept.push_back(p);
      }
    }
    EClass& cls = classes_[find(c)];
    cls.parents.insert(cls.parents.end(), kept.begin(), kept.end());
  }
  // dedup parent lists so they do not grow unboundedly across merges
  for (ClassId c = 0; c < uf_parent_.size(); ++c) {
    if (uf_parent_[c] != c) continue;
    auto& ps = classes_[c].parents;
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  }
}

std::vector<ENodeId> EGraph::canonical_nodes(ClassId c) const {
  std::vector<ENodeId> out;
  for (ENodeId n : classes_[find(c)].nodes)
    if (enodes_[n].in_hashcons) out.push_back(n);
  std::sort(out.begin(), out.end());
  return out;
}

// --- e-matching ------------------------------------------------------------

void EGraph::ematch_node(const Pattern& p, ENodeId n, std::vector<ClassId>& subst,
                         std::vector<std::vector<ClassId>>& results) const {
  const ENodeRec& rec = enodes_[n];
  if (p.op_symbol() != rec.op) return;

  // Depth-first over pattern children with backtracking on the substitution.
  struct Frame {
    const Pattern* pat;
    ClassId cls;
  };
  // Recursive lambda: match children of p against rec's children.
  std::vector<std::pair<PatternVar, bool>> trail;  // vars bound at this node

  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == p.children().size()) {
      results.push_back(subst);
      return;
    }
    const Pattern& cp = *p.children()[k];
    ClassId cc = find(rec.children[k]);
    if (cp.is_var()) {
      ClassId& slot = subst[cp.var_id()];
      if (slot == kNoClass) {
        slot = cc;
        go(k + 1);
        slot = kNoClass;
      } else if (find(slot) == cc) {
        go(k + 1);
      }
      return;
    }
    for (ENodeId m : classes_[cc].nodes) {
      if (!enodes_[m].in_hashcons) continue;
      std::vector<std::vector<ClassId>> sub_results;
      ematch_node(cp, m, subst, sub_results);
      for (auto& s : sub_results) {
        std::vector<ClassId> saved = subst;
        subst = s;
        go(k + 1);
        subst = saved;
      }
    }
  };
  go(0);
}

void EGraph::ematch_rules(const RuleSet& rules, std::vector<Match>& out) const {
  std::size_t snapshot = enodes_.size();
  for (std::uint32_t r = 0; r < rules.rules().size(); ++r) {
    const Rule& rule = rules.rules()[r];
    std::vector<ClassId> subst(rule.var_count(), kNoClass);
    for (ENodeId n = 0; n < snapshot; ++n) {
      if (!enodes_[n].in_hashcons) continue;
      if (rule.lhs->is_var()) continue;  // variable-rooted lhs is not supported
      std::vector<std::vector<ClassId>> results;
      ematch_node(*rule.lhs, n, subst, results);
      for (auto& s : results) out.push_back(Match{r, std::move(s), n});
    }
  }
}

std::pair<ClassId, ENodeId> EGraph::add_instantiation(
    const Pattern& p, const std::vector<ClassId>& subst) {
  if (p.is_var()) {
    ClassId c = find(subst[p.var_id()]);
    return {c, classes_[c].min_node};
  }
  std::vector<ClassId> children;
  children.reserve(p.children().size());
  for (const PatternPtr& cp : p.children())
    children.push_back(add_instantiation(*cp, subst).first);
  return add_enode(p.op_symbol(), std::move(children));
}

SaturationReport EGraph::saturate(const RuleSet& rules, const SaturationLimits& limits) {
  limits.validate();
  if (node_count() == 0) throw ConfigError("saturate: e-graph is empty");
  if (!(rules.sig() == *sig_))
    throw ConfigError("saturate: rule set over a different signature");
  if (!rules_) {
    rules_ = std::make_shared<const RuleSet>(rules);
  } else if (rules_->name() != rules.name() ||
             rules_->rules().size() != rules.rules().size()) {
    throw ConfigError("saturate: e-graph already saturated with a different rule set");
  }

  using Clock = std::chrono::steady_clock;
  auto start = Clock::now();
  auto expired = [&] {
    if (!limits.time_budget_s) return false;
    std::chrono::duration<double> dt = Clock::now() - start;
    return dt.count() >= *limits.time_budget_s;
  };

  SaturationReport report;
  for (;;) {
    if (limits.max_iterations && report.iterations_run >= *limits.max_iterations) {
      report.stop_reason = StopReason::IterationLimit;
      break;
    }
    if (limits.max_nodes && node_count() >= *limits.max_nodes) {
      report.stop_reason = StopReason::NodeLimit;
      break;
    }
    if (expired()) {
      report.stop_reason = StopReason::TimeLimit;
      break;
    }

    std::vector<Match> matches;
    ematch_rules(rules, matches);

    bool changed = false;
    bool aborted = false;
    std::size_t nodes_before = enodes_.size();
    for (std::size_t i = 0; i < matches.size(); ++i) {
      if (limits.max_nodes && node_count() >= *limits.max_nodes) {
        report.stop_reason = StopReason::NodeLimit;
        aborted = true;
        break;
      }
      if ((i & 0x3f) == 0 && expired()) {
        report.stop_reason = StopReason::TimeLimit;
        aborted = true;
        break;
      }
      const Match& m = matches[i];
      const Rule& rule = rules.rules()[m.rule];
      auto [rhs_class, rhs_node] = add_instantiation(*rule.rhs, m.subst);
      if (class_of(m.root) != find(rhs_class)) {
        union_with_reason(m.root, rhs_node, Justification{m.rule, m.subst});
        changed = true;
      } else {
        record_alt_edge(m.root, rhs_node, Justification{m.rule, m.subst});
      }
    }
    changed |= enodes_.size() != nodes_before;
    rebuild();
    ++report.iterations_run;

    if (aborted) break;
    if (!changed) {
      report.stop_reason = StopReason::Saturated;
      break;
    }
  }
  report.node_count = node_count();
  report.class_count = class_count();
  return report;
}

// --- queries ----------------------------------------------------------------

bool EGraph::represents(ClassId root, const TermPtr& t) const {
  std::map<std::pair<ClassId, const Term*>, bool> memo;
  std::function<bool(ClassId, const TermPtr&)> go = [&](ClassId c,
                                                        const TermPtr& u) -> bool {
    c = find(c);
    auto key = std::make_pair(c, u.get());
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool ok = false;
    for (ENodeId n : classes_[c].nodes) {
      const ENodeRec& rec = enodes_[n];
      if (!rec.in_hashcons || rec.op != u->op()) continue;
      bool all = true;
      for (std::size_t k = 0; k < rec.children.size() && all; ++k)
        all = go(rec.children[k], u->child(k));
      if (all) {
        ok = true;
        break;
      }
    }
    memo[key] = ok;
    return ok;
  };
  return go(root, t);
}

std::vector<TermPtr> EGraph::enumerate_terms(ClassId root, std::size_t max_count,
                                             std::uint32_t max_depth) const {
  std::map<std::pair<ClassId, std::uint32_t>, std::vector<TermPtr>> memo;
  std::function<const std::vector<TermPtr>&(ClassId, std::uint32_t)> go =
      [&](ClassId c, std::uint32_t depth) -> const std::vector<TermPtr>& {
    c = find(c);
    auto key = std::make_pair(c, depth);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<TermPtr> acc;
    if (depth > 0) {
      for (ENodeId n : canonical_nodes(c)) {
        const ENodeRec& rec = enodes_[n];
        if (rec.children.empty()) {
          acc.push_back(Term::leaf(*sig_, rec.op));
          continue;
        }
        // cartesian product over child term lists
        std::vector<const std::vector<TermPtr>*> lists;
        bool empty = false;
        for (ClassId ch : rec.children) {
          const auto& l = go(ch, depth - 1);
          if (l.empty()) {
            empty = true;
            break;
          }
          lists.push_back(&l);
        }
        if (empty) continue;
        std::vector<std::size_t> idx(lists.size(), 0);
        for (;;) {
          std::vector<TermPtr> children;
          children.reserve(lists.size());
          for (std::size_t k = 0; k < lists.size(); ++k)
            children.push_back((*lists[k])[idx[k]]);
          acc.push_back(Term::make(*sig_, rec.op, std::move(children)));
          if (acc.size() > max_count * 2 && max_count != 0) break;  // soft guard
          std::size_t k = 0;
          while (k < idx.size()) {
            if (++idx[k] < lists[k]->size()) break;
            idx[k] = 0;
            ++k;
          }
          if (k == idx.size()) break;
        }
      }
    }
    std::sort(acc.begin(), acc.end(), term_less);
    if (max_count != 0 && acc.size() > max_count) acc.resize(max_count);
    return memo.emplace(key, std::move(acc)).first->second;
  };
  return go(root, max_depth);
}

std::string EGraph::dump() const {
  std::vector<ClassId> canon = canonical_classes();
  std::map<ClassId, std::size_t> dense;
  for (std::size_t i = 0; i < canon.size(); ++i) dense[canon[i]] = i;
  std::ostringstream out;
  for (std::size_t i = 0; i < canon.size(); ++i) {
    std::vector<std::string> nodes;
    for (ENodeId n : canonical_nodes(canon[i])) {
      const ENodeRec& rec = enodes_[n];
      std::string s;
      if (rec.children.empty()) {
        s = sig_->name(rec.op);
      } else {
        s = "(" + sig_->name(rec.op);
        for (ClassId ch : rec.children)
          s += " c" + std::to_string(dense.at(find(ch)));
        s += ")";
      }
      nodes.push_back(std::move(s));
    }
    std::sort(nodes.begin(), nodes.end());
    out << 'c' << i << ':';
    for (std::size_t k = 0; k < nodes.size(); ++k)
      out << (k ? " | " : " ") << nodes[k];
    out << '\n';
  }
  return out.str();
}

void EGraph::check_invariants() const {
  // find is idempotent
  for (ClassId c = 0; c < uf_parent_.size(); ++c)
    if (find(find(c)) != find(c)) throw std::logic_error("find not idempotent");

  // hashcons uniqueness + congruence: equal canonical shapes must be the
  // same class, and exactly one of them is the hashcons representative
  std::map<std::string, std::pair<ENodeId, int>> shapes;
  for (ENodeId n = 0; n < enodes_.size(); ++n) {
    std::string key = std::to_string(enodes_[n].op);
    for (ClassId c : canonical_children(n)) key += "," + std::to_string(c);
    auto [it, fresh] = shapes.emplace(key, std::make_pair(n, 0));
    if (!fresh && class_of(it->second.first) != class_of(n))
      throw std::logic_error("congruence violated: equal shapes in distinct classes");
    it->second.second += enodes_[n].in_hashcons ? 1 : 0;
  }
  for (auto& [key, v] : shapes)
    if (v.second != 1)
      throw std::logic_error("hashcons does not hold exactly one node per shape");

  // class node lists are consistent with class_of
  for (ClassId c = 0; c < uf_parent_.size(); ++c) {
    if (uf_parent_[c] != c) continue;
    for (ENodeId n : classes_[c].nodes)
      if (class_of(n) != c)
        throw std::logic_error("class node list inconsistent");
  }
}

}  // namespace lguess
