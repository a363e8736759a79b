#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "whylog/syntax.hpp"

using namespace whylog;

TEST_CASE("parsing hits the grammar productions") {
  Agent i{"i"};
  CHECK(parse_formula("K[i] p") == Formula::know(i, Formula::prop("p")));
  CHECK(parse_formula("Ky[i](q, p)") ==
        Formula::know_why_cond(i, Formula::prop("q"), Formula::prop("p")));
  CHECK(parse_formula("(p -> q)") ==
        Formula::lnot(Formula::land(Formula::prop("p"), Formula::lnot(Formula::prop("q")))));
  CHECK(parse_formula("Ky[i] p") == Formula::know_why(i, Formula::prop("p")));
  CHECK(parse_formula("Ky[i](p)") == Formula::know_why(i, Formula::prop("p")));
  CHECK(parse_formula("top") == Formula::top());
  CHECK(parse_formula("bot") == Formula::bottom());
  CHECK(parse_formula("p | q") == Formula::lor(Formula::prop("p"), Formula::prop("q")));
}

TEST_CASE("precedence: unary over & over | over ->, -> right-associative") {
  CHECK(parse_formula("~p & q") ==
        Formula::land(Formula::lnot(Formula::prop("p")), Formula::prop("q")));
  CHECK(parse_formula("p & q | r") ==
        Formula::lor(Formula::land(Formula::prop("p"), Formula::prop("q")), Formula::prop("r")));
  CHECK(parse_formula("p -> q -> r") ==
        Formula::implies(Formula::prop("p"),
                         Formula::implies(Formula::prop("q"), Formula::prop("r"))));
  CHECK(parse_formula("K[i] p & q") ==
        Formula::land(Formula::know(Agent{"i"}, Formula::prop("p")), Formula::prop("q")));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_formula("Ky[i"), ParseError);
  CHECK_THROWS_AS(parse_formula("(p & q"), ParseError);
  CHECK_THROWS_AS(parse_formula("p q"), ParseError);
  CHECK_THROWS_AS(parse_formula(""), ParseError);
  CHECK_THROWS_AS(parse_formula("K[top] p"), ParseError);  // reserved agent name
  CHECK_THROWS_AS(parse_formula("e"), ParseError);         // reserved proposition name
  try {
    parse_formula("Ky[i");
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.line == 1);
    CHECK(err.col == 5);
  }
}

TEST_CASE("printer is canonical and re-sugars implications") {
  CHECK(print_formula(Formula::lnot(Formula::land(Formula::prop("p"),
                                                  Formula::lnot(Formula::prop("q"))))) ==
        "(p -> q)");
  CHECK(print_formula(Formula::know(Agent{"i"},
                                    Formula::know_why(Agent{"j"}, Formula::prop("p")))) ==
        "K[i] Ky[j] p");
  CHECK(print_formula(Formula::land(Formula::prop("p"), Formula::prop("q"))) == "(p & q)");
  CHECK(print_formula(Formula::top()) == "(p0 -> p0)");
  CHECK(print_formula(Formula::know_why_cond(Agent{"i"}, Formula::prop("q"),
                                             Formula::prop("p"))) == "Ky[i](q, p)");
}

TEST_CASE("subformulas are post-order, deduplicated, and include the formula") {
  Formula p = Formula::prop("p"), q = Formula::prop("q");
  CHECK(subformulas(p) == std::vector<Formula>{p});

  Formula conj = Formula::land(p, q);
  Formula f = Formula::know(Agent{"i"}, conj);
  CHECK(subformulas(f) == std::vector<Formula>{p, q, conj, f});

  Formula np = Formula::lnot(p);
  CHECK(subformulas(np) == std::vector<Formula>{p, np});

  // shared subtrees appear once
  Formula twice = Formula::land(conj, conj);
  CHECK(subformulas(twice) == std::vector<Formula>{p, q, conj, twice});
}

TEST_CASE("modal atomization") {
  Formula p = Formula::prop("p"), q = Formula::prop("q");
  Formula kp = Formula::know(Agent{"i"}, p);

  SECTION("maximal modal subformulas become whole atoms") {
    ModalAtomization at = modal_atomize(Formula::implies(kp, p));
    CHECK(at.atoms == std::vector<Formula>{kp, p});
    CHECK(at.reconstruct() == Formula::implies(kp, p));
  }
  SECTION("repeated atoms collapse") {
    ModalAtomization at = modal_atomize(Formula::implies(p, p));
    CHECK(at.atoms == std::vector<Formula>{p});
    CHECK(at.reconstruct() == Formula::implies(p, p));
  }
  SECTION("a modal top-level formula is one atom") {
    Formula f = Formula::know(Agent{"i"}, Formula::implies(p, q));
    ModalAtomization at = modal_atomize(f);
    CHECK(at.atoms == std::vector<Formula>{f});
    CHECK(at.reconstruct() == f);
  }
}

TEST_CASE("propositional tautology test over modal atoms") {
  Formula p = Formula::prop("p"), q = Formula::prop("q");
  Formula kp = Formula::know(Agent{"i"}, p);
  CHECK(is_propositional_tautology(Formula::implies(p, p)));
  CHECK_FALSE(is_propositional_tautology(Formula::implies(kp, p)));
  CHECK(is_propositional_tautology(
      Formula::implies(Formula::land(kp, Formula::implies(kp, q)), q)));
  CHECK(is_propositional_tautology(parse_formula("top")));
  CHECK_FALSE(is_propositional_tautology(parse_formula("bot")));
  CHECK_FALSE(is_propositional_tautology(parse_formula("p | q")));
  CHECK(is_propositional_tautology(parse_formula("p | ~p")));

  SECTION("atom cap raises a resource error") {
    Formula big = Formula::prop("x1");
    for (int k = 2; k <= 12; ++k) big = Formula::lor(big, Formula::prop("x" + std::to_string(k)));
    CHECK_THROWS_AS(is_propositional_tautology(big, 8), ResourceError);
  }
  SECTION("agrees on sugared and hand-desugared input") {
    Formula sugared = parse_formula("(p & q -> p)");
    Formula manual = Formula::lnot(Formula::land(Formula::land(p, q), Formula::lnot(p)));
    CHECK(sugared == manual);
    CHECK(is_propositional_tautology(sugared) == is_propositional_tautology(manual));
  }
}

namespace {

Formula arbitrary_formula(std::mt19937_64& rng, int depth) {
  std::vector<std::string> props = {"p", "q", "r"};
  std::vector<std::string> agents = {"i", "j"};
  auto pick = [&rng](size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng); };
  if (depth == 0) return Formula::prop(props[pick(props.size())]);
  switch (pick(8)) {
    case 0:
    case 1: return Formula::prop(props[pick(props.size())]);
    case 2: return Formula::lnot(arbitrary_formula(rng, depth - 1));
    case 3:
      return Formula::land(arbitrary_formula(rng, depth - 1), arbitrary_formula(rng, depth - 1));
    case 4: return Formula::know(Agent{agents[pick(agents.size())]}, arbitrary_formula(rng, depth - 1));
    case 5:
      return Formula::know_why(Agent{agents[pick(agents.size())]}, arbitrary_formula(rng, depth - 1));
    case 6:
      return Formula::know_why_cond(Agent{agents[pick(agents.size())]},
                                    arbitrary_formula(rng, depth - 1),
                                    arbitrary_formula(rng, depth - 1));
    default:
      return Formula::implies(arbitrary_formula(rng, depth - 1), arbitrary_formula(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("property: parse(print(f)) == f") {
  std::mt19937_64 rng(20240811);
  for (int trial = 0; trial < 500; ++trial) {
    Formula f = arbitrary_formula(rng, 4);
    std::string text = print_formula(f);
    INFO(text);
    CHECK(parse_formula(text) == f);
  }
}

TEST_CASE("property: atomization reconstruction is exact") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    Formula f = arbitrary_formula(rng, 4);
    CHECK(modal_atomize(f).reconstruct() == f);
  }
}
