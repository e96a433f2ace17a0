#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lguess {

/// Index of a symbol within its Signature.
using Symbol = std::uint32_t;

/// A finite term alphabet: operators with fixed arities plus arity-0
/// variables and constants. Immutable once built (freeze() or file load);
/// safe to share across threads.
class Signature {
 public:
  enum class Kind : std::uint8_t { Operator, Variable, Constant };

  Symbol add_operator(std::string name, unsigned arity);
  Symbol add_variable(std::string name);
  Symbol add_constant(std::string name);

  std::optional<Symbol> find(std::string_view name) const;
  const std::string& name(Symbol s) const { return entries_[s].name; }
  unsigned arity(Symbol s) const { return entries_[s].arity; }
  Kind kind(Symbol s) const { return entries_[s].kind; }
  bool is_leaf(Symbol s) const { return entries_[s].arity == 0; }

  std::size_t size() const { return entries_.size(); }

  /// Number of bigram contexts: 1 (root) + sum of operator arities.
  std::size_t context_count() const;

  bool operator==(const Signature& other) const;

  /// Sections [ops] (lines "name arity"), [vars] and [consts] (one name per
  /// line). '#' starts a comment.
  static Signature from_string(std::string_view text);
  static Signature from_file(const std::string& path);
  std::string to_string() const;

 private:
  struct Entry {
    std::string name;
    unsigned arity;
    Kind kind;
  };

  Symbol add(std::string name, unsigned arity, Kind kind);

  std::vector<Entry> entries_;
  std::unordered_map<std::string, Symbol> by_name_;
};

/// The ring signature of the char-2 running example: sqr/1, */2, +/2,
/// variables x and y, constant 0.
Signature ring_char2_signature();

/// Polynomial signature: +/2, */2 and the first n_v of the variables
/// x, y, z, w, v.
Signature poly_signature(unsigned n_v);

}  // namespace lguess
