#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lguess/pattern.hpp"

namespace lguess {

/// A named directed rewrite rule. Bidirectional laws are stored as two
/// directed rules sharing a base name, suffixed -fwd/-rev.
struct Rule {
  std::string name;
  PatternPtr lhs;
  PatternPtr rhs;
  std::vector<std::string> var_names;  // PatternVar -> display name

  std::size_t var_count() const { return var_names.size(); }
};

/// An immutable, shareable collection of directed rules over one signature.
class RuleSet {
 public:
  RuleSet(std::string name, Signature sig);

  void add(const std::string& rule_name, std::string_view lhs, std::string_view rhs);
  /// Adds `<base>-fwd` (lhs => rhs) and `<base>-rev` (rhs => lhs).
  void add_bidirectional(const std::string& base, std::string_view lhs,
                         std::string_view rhs);

  const std::string& name() const { return name_; }
  const Signature& sig() const { return sig_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const Rule* find(std::string_view rule_name) const;
  std::size_t index_of(std::string_view rule_name) const;

  /// Index of a rule applying `rules()[i]` right-to-left, if the set contains
  /// one (same lhs/rhs swapped, up to variable renaming).
  std::optional<std::size_t> inverse_of(std::size_t i) const;

  /// Rule definition file: optional [ops]/[vars]/[consts] signature sections,
  /// then a [rules] section with lines `name: lhs => rhs` or
  /// `name: lhs <=> rhs` (the latter expands to -fwd/-rev).
  static RuleSet from_string(std::string_view text, const std::string& set_name,
                             const Signature* sig = nullptr);
  static RuleSet from_file(const std::string& path, const Signature* sig = nullptr);
  std::string to_string() const;

 private:
  void check_rule(const Rule& r) const;
  void compute_inverses() const;

  std::string name_;
  Signature sig_;
  std::vector<Rule> rules_;
  mutable std::vector<std::optional<std::size_t>> inverses_;
};

/// The builtin rule sets:
///  - "ring-char2": the commutative-ring-with-characteristic-2 laws
///    (11 directed rules: Sqr x2, Add-C x2, Times-C x2, Add-A x2, Distr,
///    Char-2, Add-0) over ring_char2_signature().
///  - "poly-ac": the factorization system (Add-C x2, Add-A x2, Times-C x2,
///    Times-A x2, Distr, Factor) over poly_signature(5).
RuleSet ring_char2_rules();
RuleSet poly_ac_rules();
RuleSet poly_ac_rules(const Signature& sig);

/// Builtin set by name, or nullopt.
std::optional<RuleSet> builtin_ruleset(std::string_view name);
std::vector<std::string> builtin_ruleset_names();

}  // namespace lguess
