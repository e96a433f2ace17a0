#include "lguess/sexpr.hpp"

#include <cctype>

#include "lguess/errors.hpp"

namespace lguess {

namespace {

struct Token {
  enum Kind { LParen, RParen, Atom, End } kind;
  std::string_view text;
  std::size_t offset;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ >= text_.size()) return {Token::End, {}, pos_};
    std::size_t start = pos_;
    char c = text_[pos_];
    if (c == '(') { ++pos_; return {Token::LParen, text_.substr(start, 1), start}; }
    if (c == ')') { ++pos_; return {Token::RParen, text_.substr(start, 1), start}; }
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (d == '(' || d == ')' || std::isspace(static_cast<unsigned char>(d)))
        break;
      ++pos_;
    }
    return {Token::Atom, text_.substr(start, pos_ - start), start};
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : lex_(text), sig_(sig) {}

  TermPtr parse() {
    Token t = lex_.next();
    TermPtr result = parse_term(t);
    Token end = lex_.next();
    if (end.kind != Token::End)
      throw ParseError("trailing input after s-expression", end.offset);
    return result;
  }

 private:
  TermPtr parse_term(const Token& t) {
    switch (t.kind) {
      case Token::Atom:
        return make_leaf(t);
      case Token::LParen:
        return parse_list(t);
      case Token::RParen:
        throw ParseError("unexpected ')'", t.offset);
      case Token::End:
        throw ParseError("unexpected end of input", t.offset);
    }
    throw ParseError("unreachable", t.offset);
  }

  TermPtr make_leaf(const Token& t) {
    auto sym = sig_.find(t.text);
    if (!sym) throw ParseError("unknown symbol '" + std::string(t.text) + "'", t.offset);
    if (sig_.arity(*sym) != 0)
      throw ParseError("operator '" + std::string(t.text) +
                           "' requires arguments; write (" + std::string(t.text) + " ...)",
                       t.offset);
    return Term::leaf(sig_, *sym);
  }

  TermPtr parse_list(const Token& open) {
    Token head = lex_.next();
    if (head.kind != Token::Atom) {
      if (head.kind == Token::End)
        throw ParseError("unbalanced '('", open.offset);
      throw ParseError("expected operator after '('", head.offset);
    }
    auto sym = sig_.find(head.text);
    if (!sym)
      throw ParseError("unknown symbol '" + std::string(head.text) + "'", head.offset);
    unsigned arity = sig_.arity(*sym);
    std::vector<TermPtr> children;
    for (;;) {
      Token t = lex_.next();
      if (t.kind == Token::RParen) break;
      if (t.kind == Token::End) throw ParseError("unbalanced '('", open.offset);
      children.push_back(parse_term(t));
      if (children.size() > arity)
        throw ParseError("too many arguments for '" + std::string(head.text) +
                             "' (arity " + std::to_string(arity) + ")",
                         t.offset);
    }
    if (children.size() != arity)
      throw ParseError("arity mismatch for '" + std::string(head.text) + "': got " +
                           std::to_string(children.size()) + ", need " +
                           std::to_string(arity),
                       open.offset);
    return Term::make(sig_, *sym, std::move(children));
  }

  Lexer lex_;
  const Signature& sig_;
};

void print_rec(const Term& t, std::string& out) {
  const std::string& name = t.sig().name(t.op());
  if (t.children().empty()) {
    out += name;
    return;
  }
  out += '(';
  out += name;
  for (const TermPtr& c : t.children()) {
    out += ' ';
    print_rec(*c, out);
  }
  out += ')';
}

}  // namespace

TermPtr parse_sexpr(std::string_view text, const Signature& sig) {
  return Parser(text, sig).parse();
}

std::string print_sexpr(const Term& t) {
  std::string out;
  out.reserve(t.size() * 4);
  print_rec(t, out);
  return out;
}

}  // namespace lguess
