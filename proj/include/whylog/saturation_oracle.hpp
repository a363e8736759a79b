#pragma once

#include <set>
#include <tuple>
#include <vector>

#include "whylog/coverage.hpp"

namespace whylog {

// Reference implementation used to cross-check `saturate`. Works on explicit
// (witness, formula, worlds) triples and applies the application rule by
// exhaustive rescanning until nothing changes, keeping only witnesses of size
// <= depth. At a depth past the stabilization point the per-formula world-set
// families coincide with `saturate`'s (witness choice may differ).
//
// Deliberately naive and independent of the worklist machinery in
// coverage.hpp; do not "optimize" it into the implementation it checks.
inline CoverageTable brute_force_saturation_oracle(const std::vector<Seed>& seeds,
                                                   const std::vector<Formula>& lambda,
                                                   int world_count,
                                                   const std::vector<Formula>& universe,
                                                   int depth, size_t triple_cap = 50000) {
  if (depth < 1) throw ValidationError("oracle depth must be positive");
  CoverageTable shape(universe);  // for index lookups and implication structure only
  struct Triple {
    Term witness;
    int formula;
    WorldSet worlds;
  };
  struct TripleLess {
    bool operator()(const Triple& a, const Triple& b) const {
      if (int c = term_compare(a.witness, b.witness); c != 0) return c < 0;
      if (a.formula != b.formula) return a.formula < b.formula;
      return a.worlds < b.worlds;
    }
  };

  std::set<Triple, TripleLess> triples;
  for (const Seed& sd : seeds) {
    if (!shape.in_universe(sd.formula))
      throw ValidationError("seed formula outside universe: " + print_formula(sd.formula));
    if (sd.witness.size() <= depth)
      triples.insert(Triple{sd.witness, shape.index_of(sd.formula), sd.worlds});
  }
  for (const Formula& l : lambda)
    triples.insert(Triple{Term::self_evident(), shape.index_of(l), WorldSet::all(world_count)});

  // implication structure of the universe, by index
  std::vector<std::pair<int, int>> members(universe.size(), {-1, -1});
  for (size_t g = 0; g < universe.size(); ++g) {
    Formula lhs = universe[g], rhs = universe[g];
    if (is_implication(universe[g], &lhs, &rhs))
      members[g] = {shape.index_of(lhs), shape.index_of(rhs)};
  }

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Triple> snapshot(triples.begin(), triples.end());
    for (const Triple& imp : snapshot) {
      auto [lhs, rhs] = members[static_cast<size_t>(imp.formula)];
      if (lhs < 0) continue;
      for (const Triple& ant : snapshot) {
        if (ant.formula != lhs) continue;
        if (imp.witness.size() + ant.witness.size() + 1 > depth) continue;
        WorldSet meet = imp.worlds.intersect(ant.worlds);
        if (meet.empty()) continue;
        if (triples.insert(Triple{Term::app(imp.witness, ant.witness), rhs, meet}).second)
          changed = true;
        if (triples.size() > triple_cap)
          throw ResourceError("oracle triple cap exceeded at depth " + std::to_string(depth));
      }
    }
  }

  CoverageTable table(universe);
  for (const Triple& t : triples) table.insert(t.formula, t.witness, t.worlds);
  return table;
}

// Per-formula world-set families, the shape compared between the oracle and
// `saturate`.
inline std::vector<std::set<WorldSet>> worldset_families(const CoverageTable& table) {
  std::vector<std::set<WorldSet>> fams(table.universe().size());
  for (size_t k = 0; k < table.universe().size(); ++k)
    for (const CoverageEntry& en : table.entries(static_cast<int>(k)))
      fams[k].insert(en.worlds);
  return fams;
}

// Runs the oracle at increasing depth until the families stop changing, then
// returns that stabilized table. `floor` lets callers force a minimum depth.
inline CoverageTable stabilized_oracle(const std::vector<Seed>& seeds,
                                       const std::vector<Formula>& lambda, int world_count,
                                       const std::vector<Formula>& universe, int floor = 1,
                                       int max_depth = 12) {
  CoverageTable prev =
      brute_force_saturation_oracle(seeds, lambda, world_count, universe, std::max(floor, 1));
  for (int d = std::max(floor, 1) + 1; d <= max_depth; ++d) {
    CoverageTable next = brute_force_saturation_oracle(seeds, lambda, world_count, universe, d);
    if (worldset_families(next) == worldset_families(prev)) return next;
    prev = std::move(next);
  }
  return prev;
}

}  // namespace whylog
