#include "lguess/pattern.hpp"

#include <algorithm>
#include <cctype>

#include "lguess/errors.hpp"

namespace lguess {

PatternPtr Pattern::var(PatternVar v) {
  auto p = std::shared_ptr<Pattern>(new Pattern());
  p->is_var_ = true;
  p->var_ = v;
  return p;
}

PatternPtr Pattern::op(const Signature& sig, Symbol op, std::vector<PatternPtr> children) {
  if (children.size() != sig.arity(op))
    throw ConfigError("pattern arity mismatch for '" + sig.name(op) + "'");
  auto p = std::shared_ptr<Pattern>(new Pattern());
  p->op_ = op;
  p->children_ = std::move(children);
  return p;
}

namespace {

void collect_vars(const Pattern& p, std::vector<PatternVar>& out) {
  if (p.is_var()) {
    out.push_back(p.var_id());
    return;
  }
  for (const PatternPtr& c : p.children()) collect_vars(*c, out);
}

bool match_rec(const Pattern& p, const TermPtr& t, Substitution& subst) {
  if (p.is_var()) {
    TermPtr& slot = subst[p.var_id()];
    if (!slot) {
      slot = t;
      return true;
    }
    return slot->equals(*t);
  }
  if (t->op() != p.op_symbol()) return false;
  for (std::size_t i = 0; i < p.children().size(); ++i)
    if (!match_rec(*p.children()[i], t->child(i), subst)) return false;
  return true;
}

}  // namespace

std::vector<PatternVar> Pattern::vars() const {
  std::vector<PatternVar> out;
  collect_vars(*this, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<Substitution> match_pattern(const Pattern& p, const TermPtr& t,
                                          std::size_t var_count) {
  Substitution subst(var_count);
  if (!match_rec(p, t, subst)) return std::nullopt;
  return subst;
}

TermPtr substitute(const Pattern& p, const Signature& sig, const Substitution& subst) {
  if (p.is_var()) {
    const TermPtr& t = subst[p.var_id()];
    if (!t) throw ConfigError("substitute: unbound pattern variable");
    return t;
  }
  std::vector<TermPtr> children;
  children.reserve(p.children().size());
  for (const PatternPtr& c : p.children())
    children.push_back(substitute(*c, sig, subst));
  return Term::make(sig, p.op_symbol(), std::move(children));
}

namespace {

// Minimal s-expression reader for patterns; mirrors the term parser but
// resolves unknown arity-0 atoms to pattern variables.
struct PatToken {
  enum Kind { LParen, RParen, Atom, End } kind;
  std::string text;
  std::size_t offset;
};

class PatLexer {
 public:
  explicit PatLexer(std::string_view text) : text_(text) {}
  PatToken next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ >= text_.size()) return {PatToken::End, "", pos_};
    std::size_t start = pos_;
    char c = text_[pos_];
    if (c == '(') { ++pos_; return {PatToken::LParen, "(", start}; }
    if (c == ')') { ++pos_; return {PatToken::RParen, ")", start}; }
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (d == '(' || d == ')' || std::isspace(static_cast<unsigned char>(d))) break;
      ++pos_;
    }
    return {PatToken::Atom, std::string(text_.substr(start, pos_ - start)), start};
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

class PatParser {
 public:
  PatParser(std::string_view text, const Signature& sig, std::vector<std::string>& vars)
      : lex_(text), sig_(sig), vars_(vars) {}

  PatternPtr parse() {
    PatToken t = lex_.next();
    PatternPtr p = parse_one(t);
    PatToken end = lex_.next();
    if (end.kind != PatToken::End)
      throw ParseError("trailing input after pattern", end.offset);
    return p;
  }

 private:
  PatternVar var_for(const std::string& name) {
    for (PatternVar i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return i;
    vars_.push_back(name);
    return static_cast<PatternVar>(vars_.size() - 1);
  }

  PatternPtr parse_one(const PatToken& t) {
    if (t.kind == PatToken::Atom) {
      if (auto sym = sig_.find(t.text)) {
        if (sig_.arity(*sym) != 0)
          throw ParseError("operator '" + t.text + "' requires arguments", t.offset);
        return Pattern::op(sig_, *sym, {});
      }
      return Pattern::var(var_for(t.text));
    }
    if (t.kind != PatToken::LParen)
      throw ParseError("expected pattern", t.offset);
    PatToken head = lex_.next();
    if (head.kind != PatToken::Atom)
      throw ParseError("expected operator after '('", head.offset);
    auto sym = sig_.find(head.text);
    if (!sym)
      throw ParseError("unknown operator '" + head.text + "' in pattern", head.offset);
    std::vector<PatternPtr> children;
    for (;;) {
      PatToken u = lex_.next();
      if (u.kind == PatToken::RParen) break;
      if (u.kind == PatToken::End) throw ParseError("unbalanced '('", t.offset);
      children.push_back(parse_one(u));
    }
    if (children.size() != sig_.arity(*sym))
      throw ParseError("arity mismatch for '" + head.text + "' in pattern", t.offset);
    return Pattern::op(sig_, *sym, std::move(children));
  }

  PatLexer lex_;
  const Signature& sig_;
  std::vector<std::string>& vars_;
};

}  // namespace

PatternPtr parse_pattern(std::string_view text, const Signature& sig,
                         std::vector<std::string>& var_names) {
  return PatParser(text, sig, var_names).parse();
}

std::string print_pattern(const Pattern& p, const Signature& sig,
                          const std::vector<std::string>& var_names) {
  if (p.is_var()) return var_names[p.var_id()];
  if (p.children().empty()) return sig.name(p.op_symbol());
  std::string out = "(" + sig.name(p.op_symbol());
  for (const PatternPtr& c : p.children()) {
    out += ' ';
    out += print_pattern(*c, sig, var_names);
  }
  out += ')';
  return out;
}

}  // namespace lguess
