#include <doctest.h>

#include "ltlmcts/ltl/oracle.hpp"
#include "ltlmcts/ltl/parser.hpp"

using namespace ltlmcts::ltl;

namespace {
const Alphabet kP{"p"};
const Alphabet kPQ{"p", "q"};
}  // namespace

TEST_CASE("oracle examples") {
  const std::vector<Label> just_p{kP.label({"p"})};
  CHECK(brute_force_verdict(parse("G p", kP), kP, just_p, 2) == MonitorVerdict::undetermined());
  CHECK(brute_force_verdict(parse("F p", kP), kP, just_p, 0) == MonitorVerdict::satisfied(0));
  const std::vector<Label> p_then_none{kPQ.label({"p"}), kPQ.label({})};
  CHECK(brute_force_verdict(parse("p U q", kPQ), kPQ, p_then_none, 1) ==
        MonitorVerdict::violated(1));
}

TEST_CASE("oracle size limits") {
  const Alphabet five{"a", "b", "c", "d", "e"};
  CHECK_THROWS_AS(brute_force_verdict(parse("a", five), five, {}, 1), OracleSizeError);
  const std::vector<Label> eight(8);
  CHECK_THROWS_AS(brute_force_verdict(parse("p", kP), kP, eight, 3), OracleSizeError);
}

TEST_CASE("lasso evaluation") {
  const std::vector<Label> none;
  const std::vector<Label> alt{kP.label({"p"}), kP.label({})};
  CHECK(evaluate_lasso(parse("G F p & G F !p", kP), kP, none, alt));
  CHECK(!evaluate_lasso(parse("F G p", kP), kP, none, alt));
  const std::vector<Label> stem{kP.label({})};
  const std::vector<Label> on{kP.label({"p"})};
  CHECK(evaluate_lasso(parse("X G p", kP), kP, stem, on));
  CHECK(!evaluate_lasso(parse("G p", kP), kP, stem, on));
  CHECK(evaluate_lasso(parse("!p U p", kP), kP, stem, on));
}
