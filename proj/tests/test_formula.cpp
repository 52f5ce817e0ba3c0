#include <doctest.h>

#include "lawfuzz/formula.hpp"
#include "support/bool_oracle.hpp"
#include "support/gen.hpp"

using namespace lawfuzz;
using namespace lawfuzz::testing;

namespace {

Formula var(const char* name) {
  return make_atom(SignalRef{name, std::nullopt, std::nullopt});
}

}  // namespace

TEST_CASE("implication elimination rewrites a->b as ~a|b") {
  Formula a = var("a"), b = var("b"), c = var("c");

  // G((a|b) -> c)  ==>  G(~(a|b) | c)
  Formula g = make_always(Interval{}, make_implies(make_or(a, b), c));
  Formula expected = make_always(Interval{}, make_or(make_not(make_or(a, b)), c));
  CHECK(same_tree(eliminate_implications(g), expected));

  // No implication: unchanged.
  Formula conj = make_and(a, b);
  CHECK(same_tree(eliminate_implications(conj), conj));

  // (a->b)->c  ==>  ~(~a|b) | c
  Formula nested = make_implies(make_implies(a, b), c);
  Formula nested_expected = make_or(make_not(make_or(make_not(a), b)), c);
  CHECK(same_tree(eliminate_implications(nested), nested_expected));
}

TEST_CASE("implication elimination preserves Boolean semantics") {
  Rng rng(2024);
  FormulaGenOptions opts;
  opts.allow_implies = true;
  opts.allow_temporal = true;
  for (int iter = 0; iter < 300; ++iter) {
    Formula f = random_bool_formula(rng, opts);
    Formula g = eliminate_implications(f);
    CHECK(is_core_form(g));
    for (int len = 1; len <= 6; ++len) {
      Trace pi = random_bool_trace(rng, len);
      CHECK(bool_sat(f, pi) == bool_sat(g, pi));
    }
  }
  // Exhaustive over every short trace for a few formulas.
  auto traces1 = all_bool_traces(1);
  auto traces2 = all_bool_traces(2);
  for (int iter = 0; iter < 40; ++iter) {
    Formula f = random_bool_formula(rng, opts);
    Formula g = eliminate_implications(f);
    for (const auto& pi : traces1) CHECK(bool_sat(f, pi) == bool_sat(g, pi));
    for (const auto& pi : traces2) CHECK(bool_sat(f, pi) == bool_sat(g, pi));
  }
}

TEST_CASE("implication elimination is idempotent") {
  Rng rng(7);
  FormulaGenOptions opts;
  opts.allow_implies = true;
  for (int iter = 0; iter < 200; ++iter) {
    Formula f = random_bool_formula(rng, opts);
    Formula once = eliminate_implications(f);
    Formula twice = eliminate_implications(once);
    CHECK(same_tree(once, twice));
  }
}

TEST_CASE("normalization removes stacked negations, preserving semantics") {
  Rng rng(99);
  FormulaGenOptions opts;
  opts.allow_implies = true;
  for (int iter = 0; iter < 200; ++iter) {
    Formula f = random_bool_formula(rng, opts);
    Formula g = normalize(f);
    CHECK(is_core_form(g));
    Trace pi = random_bool_trace(rng, 4);
    CHECK(bool_sat(f, pi) == bool_sat(g, pi));
  }
}

TEST_CASE("structural equality is modulo normalization only") {
  Formula a = var("a"), b = var("b");
  CHECK(structural_equal(make_not(make_not(a)), a));
  CHECK(structural_equal(make_implies(a, b), make_or(make_not(a), b)));
  // No commutativity.
  CHECK_FALSE(structural_equal(make_and(a, b), make_and(b, a)));
  // Intervals matter.
  CHECK_FALSE(structural_equal(make_always(Interval{0, 5}, a), make_always(Interval{}, a)));
  CHECK(structural_equal(make_always(Interval{0, 5}, a), make_always(Interval{0, 5}, a)));
}

TEST_CASE("negated collapses a leading Not") {
  Formula a = var("a");
  CHECK(same_tree(negated(make_not(a)), a));
  CHECK(same_tree(negated(a), make_not(a)));
}

TEST_CASE("signal keys are collected from atoms") {
  Formula f = make_and(
      make_atom(Comparison{SignalRef{"speed", std::nullopt, std::nullopt}, CmpOp::Gt, 80.0}),
      make_atom(SignalRef{"stoplineAhead", 2.0, std::nullopt}));
  auto keys = signal_keys(f);
  REQUIRE(keys.size() == 2);
  CHECK(keys[0] == "speed");
  CHECK(keys[1] == "stoplineAhead(2)");
}

TEST_CASE("rendering uses the fixed parenthesized scheme") {
  Formula speed_gt = make_atom(
      Comparison{SignalRef{"speed", std::nullopt, std::nullopt}, CmpOp::Gt, 80.0});
  CHECK(render_formula(speed_gt) == "(speed > 80)");

  Formula a = var("a"), c = var("c");
  Formula f = make_eventually(Interval{}, make_and(a, make_not(c)));
  CHECK(render_formula(f) == "F ((a) & (~(c)))");
}
