#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lguess/signature.hpp"

namespace lguess {

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// Immutable operator tree over a Signature. Subtrees may be shared; all
/// operations are pure, so terms are safe to share across threads.
class Term {
 public:
  static TermPtr make(const Signature& sig, Symbol op, std::vector<TermPtr> children);
  static TermPtr leaf(const Signature& sig, Symbol op);

  Symbol op() const { return op_; }
  std::span<const TermPtr> children() const { return children_; }
  const TermPtr& child(std::size_t i) const { return children_[i]; }
  const Signature& sig() const { return *sig_; }

  /// Number of nodes.
  std::uint32_t size() const { return size_; }
  /// A single node has depth 1.
  std::uint32_t depth() const { return depth_; }
  std::uint64_t hash() const { return hash_; }

  bool equals(const Term& other) const;

 private:
  Term(const Signature& sig, Symbol op, std::vector<TermPtr> children);

  const Signature* sig_;
  Symbol op_;
  std::vector<TermPtr> children_;
  std::uint32_t size_;
  std::uint32_t depth_;
  std::uint64_t hash_;
};

inline bool term_eq(const TermPtr& a, const TermPtr& b) {
  return a == b || (a && b && a->equals(*b));
}

std::uint32_t term_size(const Term& t);

/// Three-way comparison in the canonical term order: ascending node count,
/// ties by lexicographic order of the printed s-expression. The lexicographic
/// leg is computed structurally but agrees exactly with comparing
/// print_sexpr() strings.
int term_cmp(const Term& a, const Term& b);
inline bool term_less(const TermPtr& a, const TermPtr& b) { return term_cmp(*a, *b) < 0; }

/// For ordered containers keyed by term value.
struct TermLess {
  bool operator()(const TermPtr& a, const TermPtr& b) const { return term_less(a, b); }
};

/// Returns t with the subterm at `path` (child indices from the root)
/// replaced by `replacement`. Shares all untouched subtrees.
TermPtr replace_at(const TermPtr& t, std::span<const std::uint32_t> path,
                   const TermPtr& replacement);

/// Subterm at `path`, or nullptr if the path does not address a node.
TermPtr subterm_at(const TermPtr& t, std::span<const std::uint32_t> path);

}  // namespace lguess
