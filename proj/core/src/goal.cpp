#include "lguess/goal.hpp"

#include <unordered_map>

#include "lguess/tasks.hpp"

namespace lguess {

namespace {

class ReachTermGoal final : public Goal {
 public:
  explicit ReachTermGoal(TermPtr target) : target_(std::move(target)) {}

  bool matches(const Term& t) const override { return t.equals(*target_); }

  std::optional<TermPtr> find_witness(const EGraph& g, ClassId root) const override {
    if (g.represents(root, target_)) return target_;
    return std::nullopt;
  }

 private:
  TermPtr target_;
};

// Per-class minimum over a restricted term shape, Bellman-style: sweep until
// no entry improves. Improvements strictly decrease (size, lex), and there
// are finitely many terms at or below any fixed size, so this terminates.
class MinTable {
 public:
  explicit MinTable(const EGraph& g) : g_(g) {}

  const TermPtr* get(ClassId c) const {
    auto it = best_.find(g_.find(c));
    return it == best_.end() ? nullptr : &it->second;
  }

  // offer returns true if t improved class c's entry
  bool offer(ClassId c, const TermPtr& t) {
    c = g_.find(c);
    auto it = best_.find(c);
    if (it == best_.end()) {
      best_.emplace(c, t);
      return true;
    }
    if (term_cmp(*t, *it->second) < 0) {
      it->second = t;
      return true;
    }
    return false;
  }

 private:
  const EGraph& g_;
  std::unordered_map<ClassId, TermPtr> best_;
};

class MultiplicationFormGoal final : public Goal {
 public:
  bool matches(const Term& t) const override { return is_goal(t); }

  std::optional<TermPtr> find_witness(const EGraph& g, ClassId root) const override {
    const Signature& sig = g.sig();
    auto star = sig.find("*");
    auto plus = sig.find("+");

    // pure: terms over {+, leaves}; goal: products of pure factors
    MinTable pure(g);
    MinTable goal(g);
    std::vector<ClassId> classes = g.canonical_classes();
    bool changed = true;
    while (changed) {
      changed = false;
      for (ClassId c : classes) {
        for (ENodeId n : g.canonical_nodes(c)) {
          auto view = g.node(n);
          if (view.children.empty()) {
            TermPtr leaf = Term::leaf(sig, view.op);
            changed |= pure.offer(c, leaf);
            changed |= goal.offer(c, leaf);
            continue;
          }
          if (plus && view.op == *plus) {
            const TermPtr* a = pure.get(view.children[0]);
            const TermPtr* b = pure.get(view.children[1]);
            if (a && b) {
              TermPtr t = Term::make(sig, view.op, {*a, *b});
              changed |= pure.offer(c, t);
              changed |= goal.offer(c, t);
            }
          } else if (star && view.op == *star) {
            const TermPtr* a = goal.get(view.children[0]);
            const TermPtr* b = goal.get(view.children[1]);
            if (a && b)
              changed |= goal.offer(c, Term::make(sig, view.op, {*a, *b}));
          }
        }
      }
    }
    const TermPtr* w = goal.get(root);
    if (!w) return std::nullopt;
    return *w;
  }
};

class PredicateGoal final : public Goal {
 public:
  PredicateGoal(std::function<bool(const Term&)> pred, std::size_t max_count,
                std::uint32_t max_depth)
      : pred_(std::move(pred)), max_count_(max_count), max_depth_(max_depth) {}

  bool matches(const Term& t) const override { return pred_(t); }

  std::optional<TermPtr> find_witness(const EGraph& g, ClassId root) const override {
    for (const TermPtr& t : g.enumerate_terms(root, max_count_, max_depth_))
      if (pred_(*t)) return t;
    return std::nullopt;
  }

 private:
  std::function<bool(const Term&)> pred_;
  std::size_t max_count_;
  std::uint32_t max_depth_;
};

}  // namespace

std::shared_ptr<const Goal> Goal::reach_term(TermPtr target) {
  return std::make_shared<ReachTermGoal>(std::move(target));
}

std::shared_ptr<const Goal> Goal::multiplication_form() {
  return std::make_shared<MultiplicationFormGoal>();
}

std::shared_ptr<const Goal> Goal::predicate(std::function<bool(const Term&)> pred,
                                            std::size_t max_count,
                                            std::uint32_t max_depth) {
  return std::make_shared<PredicateGoal>(std::move(pred), max_count, max_depth);
}

}  // namespace lguess
