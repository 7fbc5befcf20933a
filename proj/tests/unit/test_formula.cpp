#include <doctest.h>

#include <random>

#include "ltl_random.hpp"
#include "ltlmcts/ltl/oracle.hpp"
#include "ltlmcts/ltl/parser.hpp"
#include "ltlmcts/ltl/progress.hpp"

using namespace ltlmcts::ltl;

namespace {
const Alphabet kPQ{"p", "q"};
const Alphabet kStop{"in_stop_region", "has_stopped_in_stop_region"};

Formula A(const char* n) { return Formula::atom(n); }
}  // namespace

TEST_CASE("parse normalizes stop clause into always-or-until") {
  const Formula f = parse("G (in_stop_region -> (in_stop_region U has_stopped_in_stop_region))", kStop);
  const Formula expected = Formula::always(Formula::disjunction(
      {Formula::negation(A("in_stop_region")),
       Formula::until(A("in_stop_region"), A("has_stopped_in_stop_region"))}));
  CHECK(f == normalize(expected));
  CHECK(f.op() == Op::Always);
  CHECK(f.child(0).op() == Op::Or);
  REQUIRE(f.child(0).children().size() == 2);
  CHECK(f.child(0).child(0) == Formula::negation(A("in_stop_region")));
  CHECK(f.child(0).child(1) == Formula::until(A("in_stop_region"), A("has_stopped_in_stop_region")));
}

TEST_CASE("single atom and eventually") {
  const Alphabet ap{"p", "q"};
  CHECK(parse("p", ap) == A("p"));
  const Formula fq = parse("F q", ap);
  CHECK(fq.op() == Op::Until);
  CHECK(fq.child(0).is_true());
  CHECK(fq.child(1) == A("q"));
}

TEST_CASE("precedence and associativity") {
  CHECK(parse_raw("p | q & p", kPQ) == Formula::disjunction({A("p"), Formula::conjunction({A("q"), A("p")})}));
  CHECK(parse_raw("p U q U p", kPQ) == Formula::until(A("p"), Formula::until(A("q"), A("p"))));
  CHECK(parse_raw("p -> q -> p", kPQ) == Formula::implies(A("p"), Formula::implies(A("q"), A("p"))));
  CHECK(parse_raw("!p U q", kPQ) == Formula::until(Formula::negation(A("p")), A("q")));
  CHECK(parse_raw("X p & q", kPQ) == Formula::conjunction({Formula::next(A("p")), A("q")}));
  CHECK(parse_raw("G F p", kPQ) == Formula::always(Formula::eventually(A("p"))));
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse("p & & q", kPQ);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS(parse("(p", kPQ), ParseError);
  CHECK_THROWS_AS(parse("p q", kPQ), ParseError);
  CHECK_THROWS_AS(parse("", kPQ), ParseError);
  CHECK_THROWS_AS(parse("p $ q", kPQ), ParseError);
}

TEST_CASE("unknown atom is named") {
  try {
    parse("p U zed", kPQ);
    FAIL("expected UnknownAtomError");
  } catch (const UnknownAtomError& e) {
    CHECK(e.atom() == "zed");
  }
}

TEST_CASE("derived operators normalize as defined") {
  const Formula p = A("p");
  CHECK(normalize(Formula::eventually(p)) == Formula::until(Formula::truth(), p));
  CHECK(normalize(Formula::always(p)) ==
        normalize(Formula::negation(Formula::eventually(Formula::negation(p)))));
  CHECK(normalize(Formula::implies(p, A("q"))) ==
        normalize(Formula::disjunction({Formula::negation(p), A("q")})));
}

TEST_CASE("normalization is idempotent and print-parse is identity") {
  std::mt19937_64 rng(7);
  const std::vector<std::string> atoms{"p", "q", "r"};
  const Alphabet ap{"p", "q", "r"};
  for (int i = 0; i < 2000; ++i) {
    const Formula raw = testing_support::random_formula(rng, atoms, 4);
    const Formula n = normalize(raw);
    CHECK(normalize(n) == n);
    CHECK(parse(to_string(n), ap) == n);
  }
}

TEST_CASE("normalization preserves semantics on lassos") {
  std::mt19937_64 rng(11);
  const std::vector<std::string> atoms{"p", "q"};
  for (int i = 0; i < 500; ++i) {
    const Formula raw = testing_support::random_formula(rng, atoms, 3);
    const Formula n = normalize(raw);
    for (int k = 0; k < 8; ++k) {
      auto stem = testing_support::random_trace(rng, 2, 3);
      auto loop = testing_support::random_trace(rng, 2, 1 + k % 3);
      CHECK(evaluate_lasso(raw, kPQ, stem, loop) == evaluate_lasso(n, kPQ, stem, loop));
    }
  }
}

TEST_CASE("specification file format") {
  const auto spec = parse_specification(
      "# comment\n\nstop: G (in_stop_region -> (in_stop_region U has_stopped_in_stop_region))\n"
      "reach:F in_stop_region  # trailing\n",
      kStop);
  REQUIRE(spec.size() == 2);
  CHECK(spec[0].name == "stop");
  CHECK(spec[1].name == "reach");
  CHECK(spec[1].formula == parse("F in_stop_region", kStop));
  CHECK_THROWS_AS(parse_specification("nocolon G p\n", kPQ), ParseError);
}

TEST_CASE("progress examples") {
  const Formula gp = parse("G p", kPQ);
  CHECK(progress(gp, kPQ.label({"p"}), kPQ) == gp);
  CHECK(progress(gp, kPQ.label({}), kPQ).is_false());
  CHECK(progress(Formula::truth(), kPQ.label({}), kPQ).is_true());
  CHECK(progress(Formula::falsity(), kPQ.label({"p"}), kPQ).is_false());
  const Formula puq = parse("p U q", kPQ);
  CHECK(progress(puq, kPQ.label({"p"}), kPQ) == puq);
}

TEST_CASE("progress agrees with lasso semantics") {
  // f holds on l.w iff progress(f, l) holds on w, for every short suffix w.
  std::mt19937_64 rng(3);
  const std::vector<std::string> atoms{"p", "q"};
  std::vector<Formula> fs{parse("p U q", kPQ), parse("G (p -> (p U q))", kPQ),
                          parse("X p | F q", kPQ), parse("G F p", kPQ)};
  for (int i = 0; i < 40; ++i) fs.push_back(normalize(testing_support::random_formula(rng, atoms, 3)));
  for (const auto& f : fs) {
    for (std::uint32_t l = 0; l < 4; ++l) {
      const Formula g = progress(f, Label{l}, kPQ);
      for (std::size_t len = 0; len <= 3; ++len) {
        for (std::uint32_t code = 0; code < (1u << (2 * len)); ++code) {
          std::vector<Label> stem;
          for (std::size_t k = 0; k < len; ++k) stem.push_back(Label{(code >> (2 * k)) & 3u});
          for (std::uint32_t c = 0; c < 4; ++c) {
            const std::vector<Label> loop{Label{c}};
            std::vector<Label> full{Label{l}};
            full.insert(full.end(), stem.begin(), stem.end());
            CHECK(evaluate_lasso(f, kPQ, full, loop) == evaluate_lasso(g, kPQ, stem, loop));
          }
        }
      }
    }
  }
}

TEST_CASE("alphabet validation") {
  CHECK_THROWS(Alphabet({"p", "p"}));
  CHECK_THROWS(Alphabet({"P"}));
  CHECK_THROWS(Alphabet({"true"}));
  CHECK(kPQ.label({"q"}).bits == 2u);
  CHECK(kPQ.names_of(Label{3}) == std::vector<std::string>{"p", "q"});
}
