#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "whylog/model.hpp"
#include "whylog/saturation_oracle.hpp"

using namespace whylog;

namespace {

WorldSet ws(int n, std::initializer_list<int> members) {
  WorldSet s(n);
  for (int w : members) s.add(w);
  return s;
}

std::set<WorldSet> family(const CoverageTable& t, const Formula& f) {
  std::set<WorldSet> fam;
  for (const CoverageEntry& en : t.entries(f)) fam.insert(en.worlds);
  return fam;
}

}  // namespace

TEST_CASE("term ordering and round-trip") {
  Term e = Term::self_evident();
  Term s = Term::base("s"), t = Term::base("t");
  Term st = Term::app(s, t);
  CHECK(term_compare(e, s) < 0);       // same size, e first
  CHECK(term_compare(s, t) < 0);       // lexicographic on names
  CHECK(term_compare(t, st) < 0);      // applications are larger
  CHECK(st.size() == 3);
  CHECK(print_term(Term::app(st, e)) == "((s . t) . e)");
  CHECK(parse_term("((s . t) . e)") == Term::app(st, e));
  CHECK(parse_term("e") == e);
  CHECK_THROWS_AS(parse_term("(s . t"), ParseError);
  CHECK_THROWS_AS(parse_term("s t"), ParseError);
}

TEST_CASE("saturate applies the application rule on the intersection") {
  Formula p = parse_formula("p"), q = parse_formula("q");
  Formula pq = parse_formula("p -> q");
  std::vector<Formula> universe = build_universe({pq});
  Term s = Term::base("s"), t = Term::base("t");
  std::vector<Seed> seeds = {{s, pq, ws(3, {0, 1})}, {t, p, ws(3, {1, 2})}};

  CoverageTable table = saturate(seeds, {}, 3, universe);
  CHECK(family(table, q) == std::set<WorldSet>{ws(3, {1})});
  CHECK(table.entries(q).front().witness == Term::app(s, t));
  CHECK(family(table, pq) == std::set<WorldSet>{ws(3, {0, 1})});
}

TEST_CASE("lambda members get (e, W); nothing else appears") {
  Formula p = parse_formula("p");
  Formula taut = parse_formula("p -> p");
  std::vector<Formula> universe = build_universe({taut});
  CoverageTable table = saturate({}, {taut}, 2, universe);
  CHECK(family(table, taut) == std::set<WorldSet>{WorldSet::all(2)});
  CHECK(table.entries(taut).front().witness == Term::self_evident());
  CHECK(table.entries(p).empty());
}

TEST_CASE("derived world-sets deduplicate against existing ones, keeping the shortest witness") {
  // (e . t) re-derives p on {w1}; the seed witness t is shorter and wins
  Formula p = parse_formula("p");
  Formula taut = parse_formula("p -> p");
  std::vector<Formula> universe = build_universe({taut});
  Term t = Term::base("t");
  CoverageTable table = saturate({{t, p, ws(1, {0})}}, {taut}, 1, universe);
  REQUIRE(table.entries(p).size() == 1);
  CHECK(table.entries(p).front().witness == t);
  CHECK(table.entries(p).front().worlds == ws(1, {0}));

  // cross-check with the brute-force oracle
  CoverageTable oracle =
      stabilized_oracle({{t, p, ws(1, {0})}}, {taut}, 1, universe);
  CHECK(worldset_families(oracle) == worldset_families(table));
}

TEST_CASE("covers_uniformly returns the smallest witness covering the cell") {
  Formula p = parse_formula("p");
  std::vector<Formula> universe = build_universe({p});
  Term tp = Term::base("tp"), t = Term::base("t"), s = Term::base("s");

  SECTION("a superset entry witnesses the cell") {
    CoverageTable table = saturate({{s, p, ws(3, {1, 2})}}, {}, 3, universe);
    CHECK(table.covers_uniformly(p, ws(3, {1, 2})) == s);
    CHECK(table.covers_uniformly(p, ws(3, {1})) == s);
  }
  SECTION("no entry covers a cell that spans entries") {
    CoverageTable table =
        saturate({{tp, p, ws(3, {0})}, {t, p, ws(3, {1})}, {s, p, ws(3, {1, 2})}}, {}, 3, universe);
    CHECK_FALSE(table.covers_uniformly(p, ws(3, {0, 1})).has_value());
  }
  SECTION("the empty cell is covered by any entry, smallest witness first") {
    CoverageTable table = saturate({{t, p, ws(3, {1})}, {s, p, ws(3, {0, 2})}}, {}, 3, universe);
    CHECK(table.covers_uniformly(p, WorldSet(3)) == s);  // s < t lexicographically
    CoverageTable empty = saturate({}, {}, 3, universe);
    CHECK_FALSE(empty.covers_uniformly(p, WorldSet(3)).has_value());
  }
  SECTION("formula outside the universe is an error") {
    CoverageTable table = saturate({}, {}, 3, universe);
    CHECK_THROWS_AS(table.covers_uniformly(parse_formula("q"), WorldSet(3)), UniverseError);
  }
}

TEST_CASE("saturate validates its inputs") {
  Formula p = parse_formula("p");
  std::vector<Formula> universe = build_universe({p});
  CHECK_THROWS_AS(saturate({{Term::base("t"), parse_formula("q"), ws(2, {0})}}, {}, 2, universe),
                  ValidationError);
  CHECK_THROWS_AS(saturate({{Term::base("t"), p, WorldSet(2)}}, {}, 2, universe), ValidationError);
  CHECK_THROWS_AS(saturate({}, {parse_formula("q -> q")}, 2, universe), ValidationError);
}

TEST_CASE("oracle base cases") {
  Formula p = parse_formula("p");
  Formula pq = parse_formula("p -> q");
  std::vector<Formula> universe = build_universe({pq});

  SECTION("no seeds, no lambda: empty at any depth") {
    CoverageTable t1 = brute_force_saturation_oracle({}, {}, 2, universe, 1);
    CoverageTable t5 = brute_force_saturation_oracle({}, {}, 2, universe, 5);
    CHECK(t1.entry_count() == 0);
    CHECK(t5.entry_count() == 0);
  }
  SECTION("depth 1 cannot apply the rule") {
    std::vector<Seed> seeds = {{Term::base("s"), pq, ws(2, {0, 1})}, {Term::base("t"), p, ws(2, {0})}};
    CoverageTable t1 = brute_force_saturation_oracle(seeds, {}, 2, universe, 1);
    CHECK(t1.entry_count() == 2);
    CoverageTable t3 = brute_force_saturation_oracle(seeds, {}, 2, universe, 3);
    CHECK(t3.entry_count() == 3);
  }
  SECTION("spec example at depth 3 matches saturate's families") {
    std::vector<Seed> seeds = {{Term::base("s"), pq, ws(3, {0, 1})}, {Term::base("t"), p, ws(3, {1, 2})}};
    CoverageTable oracle = brute_force_saturation_oracle(seeds, {}, 3, universe, 3);
    CoverageTable fast = saturate(seeds, {}, 3, universe);
    CHECK(worldset_families(oracle) == worldset_families(fast));
  }
  SECTION("triple cap raises a resource error") {
    std::vector<Formula> big = build_universe({parse_formula("p -> p")});
    std::vector<Seed> seeds = {{Term::base("t"), parse_formula("p"), ws(2, {0, 1})}};
    CHECK_THROWS_AS(brute_force_saturation_oracle(seeds, {parse_formula("p -> p")}, 2, big, 9,
                                                  /*triple_cap=*/3),
                    ResourceError);
  }
}

namespace {

struct RandomInstance {
  std::vector<Formula> universe;
  std::vector<Formula> lambda;
  std::vector<Seed> seeds;
  int world_count;
};

RandomInstance random_instance(std::mt19937_64& rng) {
  auto pick = [&rng](size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng); };
  std::vector<Formula> pool = {
      parse_formula("p"),           parse_formula("q"),        parse_formula("r"),
      parse_formula("p -> q"),      parse_formula("q -> r"),   parse_formula("p -> r"),
      parse_formula("p -> q -> r"), parse_formula("p & q"),
  };
  RandomInstance inst;
  inst.world_count = 1 + static_cast<int>(pick(4));
  std::vector<Formula> roots;
  size_t root_count = 2 + pick(5);
  for (size_t k = 0; k < root_count; ++k) roots.push_back(pool[pick(pool.size())]);
  if (rng() & 1) inst.lambda.push_back(parse_formula("p -> p"));
  for (const Formula& l : inst.lambda) roots.push_back(l);
  inst.universe = build_universe(roots);

  const char* names[] = {"s", "t", "u", "v", "x"};
  size_t seed_count = 1 + pick(5);
  for (size_t k = 0; k < seed_count; ++k) {
    WorldSet worlds(inst.world_count);
    do {
      worlds = WorldSet(inst.world_count);
      for (int w = 0; w < inst.world_count; ++w)
        if (rng() & 1) worlds.add(w);
    } while (worlds.empty());
    // only universe formulas may be seeded
    Formula f = inst.universe[pick(inst.universe.size())];
    inst.seeds.push_back(Seed{Term::base(names[pick(5)]), f, worlds});
  }
  return inst;
}

int max_witness_size(const CoverageTable& t) {
  int best = 1;
  for (const Formula& f : t.universe())
    for (const CoverageEntry& en : t.entries(f)) best = std::max(best, en.witness.size());
  return best;
}

}  // namespace

TEST_CASE("property: saturate equals the stabilized oracle on random instances") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 150; ++trial) {
    RandomInstance inst = random_instance(rng);
    CoverageTable fast = saturate(inst.seeds, inst.lambda, inst.world_count, inst.universe);
    CoverageTable oracle = stabilized_oracle(inst.seeds, inst.lambda, inst.world_count,
                                             inst.universe, max_witness_size(fast));
    INFO("trial " << trial);
    CHECK(worldset_families(fast) == worldset_families(oracle));
    CHECK(fast.entry_count() <=
          inst.universe.size() * (size_t{1} << inst.world_count));
  }
}

TEST_CASE("property: saturating a saturated table's entries is the identity") {
  std::mt19937_64 rng(515151);
  for (int trial = 0; trial < 100; ++trial) {
    RandomInstance inst = random_instance(rng);
    CoverageTable once = saturate(inst.seeds, inst.lambda, inst.world_count, inst.universe);
    std::vector<Seed> as_seeds;
    for (const Formula& f : once.universe())
      for (const CoverageEntry& en : once.entries(f)) as_seeds.push_back(Seed{en.witness, f, en.worlds});
    CoverageTable twice = saturate(as_seeds, inst.lambda, inst.world_count, inst.universe);
    CHECK(once == twice);
  }
}

TEST_CASE("property: adding a seed only grows the world-set families") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    RandomInstance inst = random_instance(rng);
    CoverageTable before = saturate(inst.seeds, inst.lambda, inst.world_count, inst.universe);
    std::vector<Seed> more = inst.seeds;
    WorldSet extra(inst.world_count);
    extra.add(static_cast<int>(rng() % inst.world_count));
    more.push_back(Seed{Term::base("z"), inst.universe[rng() % inst.universe.size()], extra});
    CoverageTable after = saturate(more, inst.lambda, inst.world_count, inst.universe);
    auto fb = worldset_families(before), fa = worldset_families(after);
    REQUIRE(fb.size() == fa.size());
    for (size_t k = 0; k < fb.size(); ++k)
      for (const WorldSet& set : fb[k]) CHECK(fa[k].count(set) == 1);
  }
}

TEST_CASE("saturated tables satisfy the closure and lambda invariants") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 50; ++trial) {
    RandomInstance inst = random_instance(rng);
    CoverageTable table = saturate(inst.seeds, inst.lambda, inst.world_count, inst.universe);
    CHECK(validate_table(table, inst.lambda, inst.world_count).empty());
  }
}
