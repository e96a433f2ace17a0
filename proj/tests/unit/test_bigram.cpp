#include <cmath>

#include "doctest.h"
#include "lguess/bigram.hpp"
#include "lguess/errors.hpp"
#include "test_support.hpp"

using namespace lguess;
using lguess::test::t;

namespace {

// The 5-symbol signature of the running example's model table: the constant
// 0 never appears in that table, so the model instance omits it.
Signature model_sig() {
  Signature sig;
  sig.add_operator("sqr", 1);
  sig.add_operator("*", 2);
  sig.add_operator("+", 2);
  sig.add_variable("x");
  sig.add_variable("y");
  return sig;
}

double rounded2(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

TEST_CASE("default model is uniform") {
  Signature sig = model_sig();
  BigramModel m = default_model(sig);
  for (ContextId c = 0; c < m.contexts().count(); ++c) {
    double sum = 0.0;
    for (Symbol s = 0; s < sig.size(); ++s) {
      CHECK(m.prob(c, s) == doctest::Approx(0.20).epsilon(1e-12));
      sum += m.prob(c, s);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }

  Signature single;
  single.add_variable("x");
  BigramModel one = default_model(single);
  CHECK(one.prob(kRootContext, 0) == doctest::Approx(1.0));
}

TEST_CASE("contributions") {
  Signature sig = model_sig();
  ContextTable ctxs(sig);
  Symbol sqr = *sig.find("sqr"), star = *sig.find("*"), plus = *sig.find("+");
  Symbol x = *sig.find("x"), y = *sig.find("y");

  auto c = contributions(*t(sig, "(sqr (+ y x))"));
  REQUIRE(c.size() == 4);
  CHECK(c[0] == Contribution{kRootContext, sqr});
  CHECK(c[1] == Contribution{ctxs.child_context(sqr, 0), plus});
  CHECK(c[2] == Contribution{ctxs.child_context(plus, 0), y});
  CHECK(c[3] == Contribution{ctxs.child_context(plus, 1), x});

  CHECK(contributions(*t(sig, "x")) ==
        std::vector<Contribution>{{kRootContext, x}});

  // (+ x y) appears twice under *, so (+_1, x) and (+_2, y) occur twice each
  auto cc = contributions(*t(sig, "(* (+ x y) (+ x y))"));
  auto count = [&](ContextId ctx, Symbol op) {
    int n = 0;
    for (const auto& e : cc)
      if (e.context == ctx && e.op == op) ++n;
    return n;
  };
  CHECK(count(ctxs.child_context(plus, 0), x) == 2);
  CHECK(count(ctxs.child_context(plus, 1), y) == 2);
  CHECK(count(ctxs.child_context(star, 0), plus) == 1);
  CHECK(count(ctxs.child_context(star, 1), plus) == 1);
}

TEST_CASE("prob_term under the default model") {
  Signature sig = model_sig();
  BigramModel m = default_model(sig);
  CHECK(prob_term(m, *t(sig, "(+ x y)")) == doctest::Approx(0.008).epsilon(1e-12));
  CHECK(prob_term(m, *t(sig, "x")) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("comparison update reproduces the frozen 30-cell table") {
  Signature sig = model_sig();
  BigramModel m0 = default_model(sig);
  TermPtr better = t(sig, "(* (+ x y) (+ x y))");
  TermPtr worse = t(sig, "(sqr (+ y x))");
  BigramModel m1 = update(m0, *better, *worse, UpdateConfig(2.0));

  // rows: contexts _|_, sqr_1, *_1, *_2, +_1, +_2
  // cols: symbols sqr, *, +, x, y
  const double kExpected[6][5] = {
      {0.09, 0.36, 0.18, 0.18, 0.18},  // _|_
      {0.22, 0.22, 0.11, 0.22, 0.22},  // sqr_1
      {0.17, 0.17, 0.33, 0.17, 0.17},  // *_1
      {0.17, 0.17, 0.33, 0.17, 0.17},  // *_2
      {0.13, 0.13, 0.13, 0.53, 0.07},  // +_1
      {0.13, 0.13, 0.13, 0.07, 0.53},  // +_2
  };
  for (ContextId c = 0; c < 6; ++c)
    for (Symbol s = 0; s < 5; ++s)
      CHECK(rounded2(m1.prob(c, s)) == doctest::Approx(kExpected[c][s]).epsilon(1e-12));

  // spot-check the exact (unrounded) arithmetic: gamma(x | +_1) = 0.8 / 1.5
  ContextTable ctxs(sig);
  CHECK(m1.prob(ctxs.child_context(*sig.find("+"), 0), *sig.find("x")) ==
        doctest::Approx(0.8 / 1.5).epsilon(1e-12));
}

TEST_CASE("update invariants") {
  Signature sig = model_sig();
  BigramModel m0 = default_model(sig);
  TermPtr xy = t(sig, "(+ x y)");
  TermPtr yx = t(sig, "(+ y x)");

  SUBCASE("alpha must exceed 1") {
    CHECK_THROWS_AS(UpdateConfig(1.0), ConfigError);
    CHECK_THROWS_AS(UpdateConfig(0.5), ConfigError);
  }

  SUBCASE("better == worse cancels") {
    BigramModel m1 = update(m0, *xy, *xy, UpdateConfig(2.0));
    for (ContextId c = 0; c < m1.contexts().count(); ++c)
      for (Symbol s = 0; s < sig.size(); ++s)
        CHECK(m1.prob(c, s) == doctest::Approx(m0.prob(c, s)).epsilon(1e-12));
  }

  SUBCASE("rows stay stochastic and positive after chained updates") {
    BigramModel m = m0;
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
      TermPtr a = lguess::test::random_term(sig, rng, 4);
      TermPtr b = lguess::test::random_term(sig, rng, 4);
      m = update(m, *a, *b, UpdateConfig(1.5));
    }
    for (ContextId c = 0; c < m.contexts().count(); ++c) {
      double sum = 0.0;
      for (Symbol s = 0; s < sig.size(); ++s) {
        CHECK(m.prob(c, s) > 0.0);
        sum += m.prob(c, s);
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }

  SUBCASE("symmetry breaking and untouched rows") {
    BigramModel m1 = update(m0, *xy, *yx, UpdateConfig(2.0));
    CHECK(prob_term(m1, *xy) > prob_term(m1, *yx));
    // contexts that occur in neither term keep their default row
    ContextTable ctxs(sig);
    ContextId sqr1 = ctxs.child_context(*sig.find("sqr"), 0);
    for (Symbol s = 0; s < sig.size(); ++s)
      CHECK(m1.prob(sqr1, s) == doctest::Approx(0.2).epsilon(1e-12));
  }
}

TEST_CASE("probability ratio from the printed 2-decimal table") {
  Signature sig = model_sig();
  // the updated table, copied by value (not produced by update())
  BigramModel table = BigramModel::from_weights(
      sig, {
               {0.09, 0.36, 0.18, 0.18, 0.18},
               {0.22, 0.22, 0.11, 0.22, 0.22},
               {0.17, 0.17, 0.33, 0.17, 0.17},
               {0.17, 0.17, 0.33, 0.17, 0.17},
               {0.13, 0.13, 0.13, 0.53, 0.07},
               {0.13, 0.13, 0.13, 0.07, 0.53},
           });
  double ratio = prob_term(table, *t(sig, "(+ x y)")) /
                 prob_term(table, *t(sig, "(+ y x)"));
  CHECK(ratio == doctest::Approx(57.33).epsilon(0.01));

  // the exact updated model gives (8/15)^2 / (1/15)^2 = 64
  BigramModel exact = update(default_model(sig), *t(sig, "(* (+ x y) (+ x y))"),
                             *t(sig, "(sqr (+ y x))"), UpdateConfig(2.0));
  double exact_ratio =
      prob_term(exact, *t(sig, "(+ x y)")) / prob_term(exact, *t(sig, "(+ y x)"));
  CHECK(exact_ratio == doctest::Approx(64.0).epsilon(1e-9));
}

TEST_CASE("model dump shape") {
  Signature sig = model_sig();
  std::string tsv = default_model(sig).to_tsv();
  int lines = 0;
  for (char c : tsv) lines += c == '\n';
  CHECK(lines == 6);
  CHECK(tsv.find("_|_") == 0);
}
