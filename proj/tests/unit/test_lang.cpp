#include "doctest.h"
#include "lguess/errors.hpp"
#include "lguess/sexpr.hpp"
#include "lguess/signature.hpp"
#include "test_support.hpp"

using namespace lguess;
using lguess::test::random_term;
using lguess::test::t;

TEST_CASE("signature basics") {
  Signature sig = ring_char2_signature();
  CHECK(sig.size() == 6);
  CHECK(sig.arity(*sig.find("sqr")) == 1);
  CHECK(sig.arity(*sig.find("*")) == 2);
  CHECK(sig.arity(*sig.find("+")) == 2);
  CHECK(sig.kind(*sig.find("x")) == Signature::Kind::Variable);
  CHECK(sig.kind(*sig.find("0")) == Signature::Kind::Constant);
  CHECK(!sig.find("nope"));
  CHECK(sig.context_count() == 6);  // root, sqr_1, *_1, *_2, +_1, +_2

  CHECK_THROWS_AS(
      [] {
        Signature s;
        s.add_operator("f", 1);
        s.add_variable("f");
      }(),
      ConfigError);
}

TEST_CASE("signature file round trip") {
  Signature sig = ring_char2_signature();
  Signature back = Signature::from_string(sig.to_string());
  CHECK(back == sig);
}

TEST_CASE("parse and print") {
  Signature sig = ring_char2_signature();
  TermPtr term = t(sig, "(sqr (+ x y))");
  CHECK(print_sexpr(term) == "(sqr (+ x y))");
  CHECK(term->op() == *sig.find("sqr"));
  CHECK(term->size() == 4);
  CHECK(term->depth() == 3);

  CHECK(print_sexpr(t(sig, "x")) == "x");
  CHECK(term_size(*t(sig, "x")) == 1);
  CHECK(term_size(*t(sig, "(+ (sqr x) (sqr y))")) == 5);

  // whitespace insensitivity
  CHECK(t(sig, "  ( sqr\n (+ x   y) ) ")->equals(*term));
}

TEST_CASE("parse errors carry byte offsets") {
  Signature sig = ring_char2_signature();
  CHECK_THROWS_AS(parse_sexpr("(+ x", sig), ParseError);
  CHECK_THROWS_AS(parse_sexpr("(+ x y z)", sig), ParseError);
  CHECK_THROWS_AS(parse_sexpr("(+ x)", sig), ParseError);
  CHECK_THROWS_AS(parse_sexpr("(foo x y)", sig), ParseError);
  CHECK_THROWS_AS(parse_sexpr("x)", sig), ParseError);
  CHECK_THROWS_AS(parse_sexpr("", sig), ParseError);
  try {
    parse_sexpr("(+ x (foo y y))", sig);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 6);
  }
}

TEST_CASE("print then parse is the identity on random terms") {
  Signature sig = ring_char2_signature();
  Rng rng(0x5eed);
  for (int i = 0; i < 1000; ++i) {
    TermPtr term = random_term(sig, rng, 6);
    TermPtr back = parse_sexpr(print_sexpr(term), sig);
    REQUIRE(back->equals(*term));
  }
}

TEST_CASE("term order matches printed s-expression order") {
  Signature sig = ring_char2_signature();
  Rng rng(0xabcdef);
  for (int i = 0; i < 500; ++i) {
    TermPtr a = random_term(sig, rng, 5);
    TermPtr b = random_term(sig, rng, 5);
    int got = term_cmp(*a, *b);
    int want;
    if (a->size() != b->size())
      want = a->size() < b->size() ? -1 : 1;
    else {
      int c = print_sexpr(a).compare(print_sexpr(b));
      want = c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    REQUIRE((got < 0) == (want < 0));
    REQUIRE((got == 0) == (want == 0));
  }
}

TEST_CASE("subterm_at and replace_at") {
  Signature sig = ring_char2_signature();
  TermPtr term = t(sig, "(+ (+ (* x x) 0) (* y y))");
  Position p{0, 1};
  CHECK(print_sexpr(subterm_at(term, p)) == "0");
  TermPtr swapped = replace_at(term, p, t(sig, "(+ x y)"));
  CHECK(print_sexpr(swapped) == "(+ (+ (* x x) (+ x y)) (* y y))");
  CHECK(print_sexpr(term) == "(+ (+ (* x x) 0) (* y y))");  // original untouched
  CHECK(subterm_at(term, Position{5}) == nullptr);
}
