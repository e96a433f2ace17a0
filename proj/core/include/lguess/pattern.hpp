#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lguess/term.hpp"

namespace lguess {

/// Index of a pattern variable within its Rule.
using PatternVar = std::uint32_t;

class Pattern;
using PatternPtr = std::shared_ptr<const Pattern>;

/// A term shape whose leaves may be pattern variables. Pattern variables are
/// symbols that do not occur in the signature (conventionally a, b, c).
class Pattern {
 public:
  static PatternPtr var(PatternVar v);
  static PatternPtr op(const Signature& sig, Symbol op, std::vector<PatternPtr> children);

  bool is_var() const { return is_var_; }
  PatternVar var_id() const { return var_; }
  Symbol op_symbol() const { return op_; }
  const std::vector<PatternPtr>& children() const { return children_; }

  /// Variables occurring in the pattern, ascending, deduplicated.
  std::vector<PatternVar> vars() const;

 private:
  Pattern() = default;
  bool is_var_ = false;
  PatternVar var_ = 0;
  Symbol op_ = 0;
  std::vector<PatternPtr> children_;
};

/// Substitution from pattern variables to terms. Indexed by PatternVar;
/// unbound slots are null.
using Substitution = std::vector<TermPtr>;

/// Syntactic match of p against t. Nonlinear patterns (a repeated variable)
/// impose structural-equality constraints. Returns the substitution or
/// nullopt.
std::optional<Substitution> match_pattern(const Pattern& p, const TermPtr& t,
                                          std::size_t var_count);

/// Instantiates p under subst; every variable of p must be bound.
TermPtr substitute(const Pattern& p, const Signature& sig, const Substitution& subst);

/// Parses a pattern s-expression over `sig`: arity-0 atoms not in the
/// signature become pattern variables (registered in `var_names`, which maps
/// PatternVar -> name and may be shared between the two sides of a rule).
PatternPtr parse_pattern(std::string_view text, const Signature& sig,
                         std::vector<std::string>& var_names);

std::string print_pattern(const Pattern& p, const Signature& sig,
                          const std::vector<std::string>& var_names);

}  // namespace lguess
