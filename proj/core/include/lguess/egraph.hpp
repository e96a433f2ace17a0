#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lguess/certificate.hpp"
#include "lguess/rules.hpp"
#include "lguess/term.hpp"

namespace lguess {

using ClassId = std::uint32_t;
using ENodeId = std::uint32_t;

constexpr ClassId kNoClass = std::numeric_limits<ClassId>::max();

struct SaturationLimits {
  std::optional<std::uint64_t> max_iterations;
  std::optional<std::uint64_t> max_nodes;
  std::optional<double> time_budget_s;

  void validate() const;  // at least one limit must be present

  static SaturationLimits iterations(std::uint64_t n) { return {n, {}, {}}; }
  static SaturationLimits seconds(double s) { return {{}, {}, s}; }
};

enum class StopReason : std::uint8_t {
  Saturated,
  IterationLimit,
  NodeLimit,
  TimeLimit,
};

std::string to_string(StopReason r);

struct SaturationReport {
  std::uint64_t iterations_run = 0;
  std::size_t node_count = 0;
  std::size_t class_count = 0;
  StopReason stop_reason = StopReason::Saturated;
};

/// E-graph: union-find over e-class ids plus a hashcons from canonical
/// e-nodes to classes, with congruence closure restored by an explicit
/// rebuild after each saturation iteration. Every union is justified (rule
/// application or congruence), which is what explain() walks to produce
/// rewrite-chain certificates.
///
/// Single writer; read-only queries on a quiescent e-graph may run
/// concurrently.
class EGraph {
 public:
  explicit EGraph(const Signature& sig,
                  std::size_t hard_node_cap = std::numeric_limits<std::size_t>::max());

  const Signature& sig() const { return *sig_; }

  /// Adds t (hashconsed); re-adding an equal term returns the same canonical
  /// id. Throws ConfigError if the hard node cap would be exceeded.
  ClassId add_term(const TermPtr& t);

  ClassId find(ClassId c) const;
  bool same_class(ClassId a, ClassId b) const { return find(a) == find(b); }

  std::size_t node_count() const { return enodes_.size(); }
  std::size_t class_count() const;
  std::vector<ClassId> canonical_classes() const;

  /// One iteration = e-match every rule against the state at iteration
  /// start, apply all matches, merge, rebuild congruence. Stops at fixpoint
  /// or at the first limit hit. Resumable: saturate(k1) then saturate(k2) is
  /// equivalent to saturate(k1 + k2) iterations.
  SaturationReport saturate(const RuleSet& rules, const SaturationLimits& limits);

  /// True iff t is extractable from `root`.
  bool represents(ClassId root, const TermPtr& t) const;

  /// Distinct terms extractable from root with depth <= max_depth, in
  /// ascending (size, lexicographic s-expression) order. Both caps are
  /// applied per class during construction, so a binding max_count makes the
  /// result a deterministic prefix rather than the exact full set.
  std::vector<TermPtr> enumerate_terms(ClassId root, std::size_t max_count,
                                       std::uint32_t max_depth) const;

  /// Rewrite-chain certificate from t1 to t2; every step verifies against
  /// the rule set used during saturation. Throws ExplainError if the terms
  /// are not represented or not equivalent, or if a needed chain would
  /// reverse a one-directional rule that has no inverse in the set.
  Certificate explain(const TermPtr& t1, const TermPtr& t2) const;

  // --- low-level views used by extraction -------------------------------

  struct NodeView {
    Symbol op;
    const std::vector<ClassId>& children;  // as stored; canonicalize via find
  };
  NodeView node(ENodeId n) const { return {enodes_[n].op, enodes_[n].children}; }
  /// Canonical (hashcons-representative) e-node ids of a class; duplicates
  /// produced by congruence merges are excluded.
  std::vector<ENodeId> canonical_nodes(ClassId c) const;
  ClassId class_of(ENodeId n) const { return find(enodes_[n].cls); }
  /// E-node id for t's root if t is (syntactically) hashconsed, else nullopt.
  std::optional<ENodeId> lookup(const TermPtr& t) const;

  /// One line per class `cN: (op c_i c_j) | ...`, classes in canonical-id
  /// order with dense renumbering; for debugging and golden tests.
  std::string dump() const;

  /// Debug audit: hashcons uniqueness and congruence closure. Throws
  /// std::logic_error on violation.
  void check_invariants() const;

 private:
  struct ENodeRec {
    Symbol op;
    std::vector<ClassId> children;  // canonical at insertion time
    ClassId cls;                    // class at creation; canonicalize via find
    std::uint64_t key_hash;         // hash of current hashcons key
    bool in_hashcons;
  };

  struct Justification {
    std::uint32_t rule = kNoRule;          // kNoRule means congruence
    std::vector<ClassId> subst;            // PatternVar -> class at match time
    static constexpr std::uint32_t kNoRule = 0xffffffffu;
    bool is_congruence() const { return rule == kNoRule; }
  };

  struct Edge {
    ENodeId to;
    std::shared_ptr<const Justification> just;
    bool forward;  // justification's lhs side is the edge's owner
  };

  // A union attempt between already-equal nodes still carries a usable
  // justification; explain() path search may route through these when the
  // primary forest edge would need an un-invertible reverse application.
  struct AltEdge {
    ENodeId from;
    ENodeId to;
    std::shared_ptr<const Justification> just;
  };

  struct EClass {
    std::vector<ENodeId> nodes;
    std::vector<ENodeId> parents;
    ENodeId min_node;
  };

  struct Match {
    std::uint32_t rule;
    std::vector<ClassId> subst;
    ENodeId root;
  };

  // hashcons key is (op, canonical children) of an e-node
  std::uint64_t node_key_hash(Symbol op, const std::vector<ClassId>& children) const;
  std::vector<ClassId> canonical_children(ENodeId n) const;
  bool same_key(ENodeId a, Symbol op, const std::vector<ClassId>& children) const;
  ENodeId* hashcons_find(Symbol op, const std::vector<ClassId>& children,
                         std::uint64_t h);

  std::pair<ClassId, ENodeId> add_enode(Symbol op, std::vector<ClassId> children);
  ClassId fresh_class(ENodeId n);
  void record_alt_edge(ENodeId u, ENodeId v, Justification just);
  void union_with_reason(ENodeId u, ENodeId v, Justification just);
  void make_forest_root(ENodeId n);
  void rebuild();

  void ematch_rules(const RuleSet& rules, std::vector<Match>& out) const;
  void ematch_node(const Pattern& p, ENodeId n, std::vector<ClassId>& subst,
                   std::vector<std::vector<ClassId>>& results) const;
  std::pair<ClassId, ENodeId> add_instantiation(const Pattern& p,
                                                const std::vector<ClassId>& subst);

  friend class Explainer;

  const Signature* sig_;
  std::size_t hard_node_cap_;

  std::vector<ClassId> uf_parent_;
  std::vector<std::uint32_t> uf_size_;
  std::vector<EClass> classes_;  // indexed by class id; valid at canonical ids
  std::vector<ENodeRec> enodes_;
  std::vector<std::optional<Edge>> forest_;  // per enode: edge toward parent
  std::vector<AltEdge> alt_edges_;
  std::unordered_set<std::uint64_t> alt_seen_;  // dedup of (u, v, rule)
  // hashcons: buckets by key hash; values are enode ids
  std::unordered_multimap<std::uint64_t, ENodeId> hashcons_;
  std::vector<ClassId> pending_;  // classes whose parents need repair

  std::shared_ptr<const RuleSet> rules_;  // set by first saturate()
};

}  // namespace lguess
