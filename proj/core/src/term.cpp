#include "lguess/term.hpp"

#include <algorithm>
#include <stdexcept>

#include "lguess/errors.hpp"

namespace lguess {

namespace {

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

Term::Term(const Signature& sig, Symbol op, std::vector<TermPtr> children)
    : sig_(&sig), op_(op), children_(std::move(children)) {
  size_ = 1;
  depth_ = 1;
  std::uint64_t h = hash_combine(0x243f6a8885a308d3ULL, op);
  for (const TermPtr& c : children_) {
    size_ += c->size_;
    depth_ = std::max(depth_, c->depth_ + 1);
    h = hash_combine(h, c->hash_);
  }
  hash_ = h;
}

TermPtr Term::make(const Signature& sig, Symbol op, std::vector<TermPtr> children) {
  if (op >= sig.size()) throw ConfigError("symbol out of range for signature");
  if (children.size() != sig.arity(op))
    throw ConfigError("arity mismatch building term for '" + sig.name(op) + "'");
  for (const TermPtr& c : children)
    if (!c || !(c->sig() == sig))
      throw ConfigError("child term over a different signature");
  return TermPtr(new Term(sig, op, std::move(children)));
}

TermPtr Term::leaf(const Signature& sig, Symbol op) { return make(sig, op, {}); }

bool Term::equals(const Term& other) const {
  if (this == &other) return true;
  if (hash_ != other.hash_ || op_ != other.op_ || size_ != other.size_)
    return false;
  for (std::size_t i = 0; i < children_.size(); ++i)
    if (!children_[i]->equals(*other.children_[i])) return false;
  return true;
}

std::uint32_t term_size(const Term& t) { return t.size(); }

namespace {

// Lexicographic comparison of printed s-expressions, done structurally.
// A compound term prints as "(op ...)" and '(' sorts below every character
// that may start a symbol name, so compound < leaf at equal positions.
int lex_cmp(const Term& a, const Term& b) {
  bool leaf_a = a.children().empty();
  bool leaf_b = b.children().empty();
  const std::string& na = a.sig().name(a.op());
  const std::string& nb = b.sig().name(b.op());
  if (leaf_a != leaf_b) return leaf_a ? 1 : -1;
  int c = na.compare(nb);
  if (leaf_a) return c;
  if (c != 0) {
    // "(op1 ..." vs "(op2 ...": if one operator name is a prefix of the
    // other, the following character is ' ' in the shorter one, which sorts
    // below any name character, so the plain string compare is still right.
    return c;
  }
  for (std::size_t i = 0; i < a.children().size(); ++i) {
    c = lex_cmp(*a.child(i), *b.child(i));
    if (c != 0) return c;
  }
  return 0;
}

}  // namespace

int term_cmp(const Term& a, const Term& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return lex_cmp(a, b);
}

TermPtr subterm_at(const TermPtr& t, std::span<const std::uint32_t> path) {
  TermPtr cur = t;
  for (std::uint32_t i : path) {
    if (!cur || i >= cur->children().size()) return nullptr;
    cur = cur->child(i);
  }
  return cur;
}

TermPtr replace_at(const TermPtr& t, std::span<const std::uint32_t> path,
                   const TermPtr& replacement) {
  if (path.empty()) return replacement;
  std::uint32_t head = path[0];
  if (head >= t->children().size())
    throw std::out_of_range("replace_at: path does not address a node");
  std::vector<TermPtr> children(t->children().begin(), t->children().end());
  children[head] = replace_at(children[head], path.subspan(1), replacement);
  return Term::make(t->sig(), t->op(), std::move(children));
}

}  // namespace lguess
