#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "lguess/egraph.hpp"
#include "lguess/term.hpp"

namespace lguess {

/// A stopping predicate over terms, with an e-graph witness search that
/// returns the smallest (size, then lexicographic) represented term
/// satisfying it.
class Goal {
 public:
  virtual ~Goal() = default;
  virtual bool matches(const Term& t) const = 0;
  virtual std::optional<TermPtr> find_witness(const EGraph& g, ClassId root) const = 0;

  /// Goal: the e-graph represents exactly `target`.
  static std::shared_ptr<const Goal> reach_term(TermPtr target);
  /// Goal: any multiplication form (tasks::is_goal).
  static std::shared_ptr<const Goal> multiplication_form();
  /// Arbitrary predicate; the witness search enumerates up to
  /// max_count terms of depth <= max_depth, so it is best-effort.
  static std::shared_ptr<const Goal> predicate(std::function<bool(const Term&)> pred,
                                               std::size_t max_count = 20000,
                                               std::uint32_t max_depth = 24);
};

}  // namespace lguess
