#include "doctest.h"
#include "lguess/certificate.hpp"
#include "lguess/errors.hpp"
#include "lguess/rules.hpp"
#include "lguess/sexpr.hpp"
#include "test_support.hpp"

using namespace lguess;
using lguess::test::t;

TEST_CASE("pattern matching") {
  RuleSet rs = ring_char2_rules();
  const Signature& sig = rs.sig();

  SUBCASE("nonlinear pattern needs equal subterms") {
    const Rule* char2 = rs.find("Char-2");
    REQUIRE(char2);
    auto hit = match_pattern(*char2->lhs, t(sig, "(+ (* x y) (* x y))"),
                             char2->var_count());
    REQUIRE(hit);
    CHECK(print_sexpr((*hit)[0]) == "(* x y)");
    CHECK(!match_pattern(*char2->lhs, t(sig, "(+ x y)"), char2->var_count()));
  }

  SUBCASE("constant leaf in a pattern") {
    const Rule* add0 = rs.find("Add-0");
    REQUIRE(add0);
    auto hit = match_pattern(*add0->lhs, t(sig, "(+ (* x x) 0)"), add0->var_count());
    REQUIRE(hit);
    CHECK(print_sexpr((*hit)[0]) == "(* x x)");
    CHECK(!match_pattern(*add0->lhs, t(sig, "(+ 0 x)"), add0->var_count()));
  }

  SUBCASE("rhs may not invent variables") {
    RuleSet bad("bad", ring_char2_signature());
    CHECK_THROWS_AS(bad.add("oops", "(+ a 0)", "(+ a b)"), ConfigError);
  }
}

TEST_CASE("apply_rule_at") {
  RuleSet rs = ring_char2_rules();
  const Signature& sig = rs.sig();

  CHECK(print_sexpr(apply_rule_at(t(sig, "(sqr (+ x y))"), *rs.find("Sqr-fwd"), {})) ==
        "(* (+ x y) (+ x y))");
  CHECK(print_sexpr(apply_rule_at(t(sig, "(+ (* x y) (* x y))"), *rs.find("Char-2"),
                                  {})) == "0");
  CHECK(print_sexpr(apply_rule_at(t(sig, "(+ (+ (* x x) 0) (* y y))"),
                                  *rs.find("Add-0"), {0})) ==
        "(+ (* x x) (* y y))");

  // failures are distinguishable: bad position vs pattern mismatch
  CHECK_THROWS_AS(apply_rule_at(t(sig, "x"), *rs.find("Sqr-fwd"), {3}),
                  std::out_of_range);
  CHECK_THROWS_AS(apply_rule_at(t(sig, "(+ x y)"), *rs.find("Sqr-fwd"), {}),
                  ConfigError);
}

TEST_CASE("builtin rule sets") {
  RuleSet ring = ring_char2_rules();
  CHECK(ring.rules().size() == 11);
  const Rule* tc = ring.find("Times-C-fwd");
  REQUIRE(tc);
  CHECK(print_pattern(*tc->lhs, ring.sig(), tc->var_names) == "(* a b)");
  CHECK(print_pattern(*tc->rhs, ring.sig(), tc->var_names) == "(* b a)");

  RuleSet poly = poly_ac_rules();
  CHECK(poly.rules().size() == 10);
  const Rule* factor = poly.find("Factor");
  REQUIRE(factor);
  CHECK(print_pattern(*factor->lhs, poly.sig(), factor->var_names) ==
        "(+ (* a c) (* b c))");
  CHECK(print_pattern(*factor->rhs, poly.sig(), factor->var_names) ==
        "(* (+ a b) c)");

  SUBCASE("inverse lookup is structural") {
    CHECK(poly.inverse_of(poly.index_of("Distr")) == poly.index_of("Factor"));
    CHECK(poly.inverse_of(poly.index_of("Factor")) == poly.index_of("Distr"));
    // commutativity is its own inverse up to variable renaming
    auto addc_inv = poly.inverse_of(poly.index_of("Add-C-fwd"));
    REQUIRE(addc_inv);
    CHECK((*addc_inv == poly.index_of("Add-C-fwd") ||
           *addc_inv == poly.index_of("Add-C-rev")));
    CHECK(!ring.inverse_of(ring.index_of("Char-2")));
    CHECK(!ring.inverse_of(ring.index_of("Add-0")));
    CHECK(!ring.inverse_of(ring.index_of("Distr")));
    CHECK(ring.inverse_of(ring.index_of("Sqr-fwd")) == ring.index_of("Sqr-rev"));
  }
}

TEST_CASE("rule set file round trip") {
  RuleSet poly = poly_ac_rules();
  RuleSet back = RuleSet::from_string(poly.to_string(), "poly-ac");
  REQUIRE(back.rules().size() == poly.rules().size());
  for (std::size_t i = 0; i < poly.rules().size(); ++i)
    CHECK(back.rules()[i].name == poly.rules()[i].name);

  // the <=> shorthand expands to a directed pair
  Signature sig = ring_char2_signature();
  RuleSet custom = RuleSet::from_string("[rules]\nSqr: (sqr a) <=> (* a a)\n",
                                        "custom", &sig);
  CHECK(custom.rules().size() == 2);
  CHECK(custom.find("Sqr-fwd"));
  CHECK(custom.find("Sqr-rev"));
}

TEST_CASE("verify_chain") {
  RuleSet rs = ring_char2_rules();
  const Signature& sig = rs.sig();

  SUBCASE("empty chain is ok and final == initial") {
    Certificate cert;
    cert.initial = t(sig, "(sqr (+ x y))");
    CHECK(verify_chain(cert, rs).ok);
    CHECK(cert.final_term()->equals(*cert.initial));
  }

  SUBCASE("good single step; corrupting it is caught with the right index") {
    Certificate cert;
    cert.initial = t(sig, "(sqr (+ x y))");
    cert.steps.push_back({"Sqr-fwd", {}, t(sig, "(* (+ x y) (+ x y))")});
    cert.steps.push_back({"Add-C-fwd", {0}, t(sig, "(* (+ y x) (+ x y))")});
    CHECK(verify_chain(cert, rs).ok);

    Certificate bad = cert;
    bad.steps.push_back({"Distr", {1}, t(sig, "(+ (* x y) (* y y))")});
    ChainVerdict verdict = verify_chain(bad, rs);
    CHECK(!verdict.ok);
    CHECK(verdict.failing_step == 2);

    Certificate wrong_result = cert;
    wrong_result.steps[1].result = t(sig, "(* (+ x y) (+ y x))");
    verdict = verify_chain(wrong_result, rs);
    CHECK(!verdict.ok);
    CHECK(verdict.failing_step == 1);

    Certificate unknown = cert;
    unknown.steps[0].rule_name = "Nope";
    verdict = verify_chain(unknown, rs);
    CHECK(!verdict.ok);
    CHECK(verdict.failing_step == 0);
  }

  SUBCASE("single apply_rule_at step always verifies") {
    Rng rng(0x77);
    for (int i = 0; i < 200; ++i) {
      TermPtr term = lguess::test::random_term(sig, rng, 5);
      for (std::size_t r = 0; r < rs.rules().size(); ++r) {
        const Rule& rule = rs.rules()[r];
        // try the rule at every position; build a 1-step certificate on a hit
        std::function<void(const TermPtr&, Position&)> walk =
            [&](const TermPtr& u, Position& pos) {
              if (match_pattern(*rule.lhs, u, rule.var_count())) {
                Certificate cert;
                cert.initial = term;
                cert.steps.push_back(
                    {rule.name, pos, apply_rule_at(term, rule, pos)});
                REQUIRE(verify_chain(cert, rs).ok);
              }
              for (std::uint32_t k = 0; k < u->children().size(); ++k) {
                pos.push_back(k);
                walk(u->child(k), pos);
                pos.pop_back();
              }
            };
        Position pos;
        walk(term, pos);
      }
    }
  }
}

TEST_CASE("fwd then rev at the same position is the identity") {
  RuleSet rs = ring_char2_rules();
  const Signature& sig = rs.sig();
  std::vector<std::pair<std::string, std::string>> pairs = {
      {"Sqr-fwd", "Sqr-rev"},
      {"Add-C-fwd", "Add-C-rev"},
      {"Times-C-fwd", "Times-C-rev"},
      {"Add-A-fwd", "Add-A-rev"},
  };
  Rng rng(0x99);
  for (int i = 0; i < 300; ++i) {
    TermPtr term = lguess::test::random_term(sig, rng, 5);
    for (auto& [f, r] : pairs) {
      const Rule& fwd = *rs.find(f);
      const Rule& rev = *rs.find(r);
      if (!match_pattern(*fwd.lhs, term, fwd.var_count())) continue;
      TermPtr once = apply_rule_at(term, fwd, {});
      TermPtr back = apply_rule_at(once, rev, {});
      REQUIRE(back->equals(*term));
    }
  }
}

TEST_CASE("certificate text format round trip") {
  RuleSet rs = ring_char2_rules();
  const Signature& sig = rs.sig();
  Certificate cert;
  cert.initial = t(sig, "(sqr (+ x y))");
  cert.steps.push_back({"Sqr-fwd", {}, t(sig, "(* (+ x y) (+ x y))")});
  cert.steps.push_back({"Add-C-fwd", {0}, t(sig, "(* (+ y x) (+ x y))")});

  std::string text = certificate_to_string(cert);
  Certificate back = certificate_from_string(text, sig);
  CHECK(back.initial->equals(*cert.initial));
  REQUIRE(back.steps.size() == cert.steps.size());
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    CHECK(back.steps[i].rule_name == cert.steps[i].rule_name);
    CHECK(back.steps[i].position == cert.steps[i].position);
    CHECK(back.steps[i].result->equals(*cert.steps[i].result));
  }
  CHECK(verify_chain(back, rs).ok);
}
