#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "whylog/error.hpp"
#include "whylog/syntax.hpp"
#include "whylog/term.hpp"
#include "whylog/worldset.hpp"

namespace whylog {

// A witness term together with the worlds where it explains its formula.
// Entries never have an empty world-set.
struct CoverageEntry {
  Term witness;
  WorldSet worlds;
};

// An explanation seed: the caller asserts that `witness` explains `formula`
// on exactly the given worlds.
struct Seed {
  Term witness;
  Formula formula;
  WorldSet worlds;
};

// Finite representation of the admissible explanation function over a fixed
// formula universe. Per formula, at most one entry per world-set, carrying the
// smallest witness that derives it.
class CoverageTable {
 public:
  CoverageTable() = default;

  explicit CoverageTable(std::vector<Formula> universe) : universe_(std::move(universe)) {
    rows_.resize(universe_.size());
    for (size_t k = 0; k < universe_.size(); ++k)
      index_.emplace(universe_[k], static_cast<int>(k));
  }

  const std::vector<Formula>& universe() const { return universe_; }

  bool in_universe(const Formula& f) const { return index_.count(f) > 0; }

  int index_of(const Formula& f) const {
    auto it = index_.find(f);
    if (it == index_.end())
      throw UniverseError("formula outside universe: " + print_formula(f));
    return it->second;
  }

  const std::vector<CoverageEntry>& entries(const Formula& f) const {
    return rows_[static_cast<size_t>(index_of(f))];
  }

  const std::vector<CoverageEntry>& entries(int idx) const {
    return rows_[static_cast<size_t>(idx)];
  }

  size_t entry_count() const {
    size_t n = 0;
    for (const auto& row : rows_) n += row.size();
    return n;
  }

  // Inserts keeping at most one entry per world-set; on a tie the smaller
  // witness wins. Returns true if the row changed.
  bool insert(int idx, const Term& witness, const WorldSet& worlds) {
    if (worlds.empty()) return false;
    auto& row = rows_[static_cast<size_t>(idx)];
    auto it = std::lower_bound(row.begin(), row.end(), worlds,
                               [](const CoverageEntry& a, const WorldSet& b) { return a.worlds < b; });
    if (it != row.end() && it->worlds == worlds) {
      if (term_compare(witness, it->witness) < 0) {
        it->witness = witness;
        return true;
      }
      return false;
    }
    row.insert(it, CoverageEntry{witness, worlds});
    return true;
  }

  // Smallest witness whose world-set covers `cell`, or absent. An empty cell
  // is covered by any entry.
  std::optional<Term> covers_uniformly(const Formula& f, const WorldSet& cell) const {
    const auto& row = entries(f);
    std::optional<Term> best;
    for (const CoverageEntry& en : row) {
      if (!cell.subset_of(en.worlds)) continue;
      if (!best || term_compare(en.witness, *best) < 0) best = en.witness;
    }
    return best;
  }

  friend bool operator==(const CoverageTable& a, const CoverageTable& b) {
    if (a.universe_ != b.universe_) return false;
    if (a.rows_.size() != b.rows_.size()) return false;
    for (size_t k = 0; k < a.rows_.size(); ++k) {
      if (a.rows_[k].size() != b.rows_[k].size()) return false;
      for (size_t j = 0; j < a.rows_[k].size(); ++j)
        if (!(a.rows_[k][j].worlds == b.rows_[k][j].worlds) ||
            !(a.rows_[k][j].witness == b.rows_[k][j].witness))
          return false;
    }
    return true;
  }

 private:
  std::vector<Formula> universe_;
  std::map<Formula, int, FormulaLess> index_;
  std::vector<std::vector<CoverageEntry>> rows_;  // sorted by world-set
};

inline std::optional<Term> covers_uniformly(const CoverageTable& table, const Formula& f,
                                            const WorldSet& cell) {
  return table.covers_uniformly(f, cell);
}

namespace detail {

// Implication members of the universe, pre-resolved to indices.
struct ImplicationIndex {
  std::vector<std::vector<std::pair<int, int>>> as_implication;  // impl idx -> (lhs idx, rhs idx)
  std::vector<std::vector<int>> implications_of_lhs;             // lhs idx -> impl indices
};

inline ImplicationIndex index_implications(const CoverageTable& table) {
  const auto& universe = table.universe();
  ImplicationIndex ix;
  ix.as_implication.resize(universe.size());
  ix.implications_of_lhs.resize(universe.size());
  for (size_t g = 0; g < universe.size(); ++g) {
    Formula lhs = universe[g], rhs = universe[g];
    if (!is_implication(universe[g], &lhs, &rhs)) continue;
    if (!table.in_universe(lhs) || !table.in_universe(rhs))
      throw ValidationError("universe not closed under implication members: " +
                            print_formula(universe[g]));
    int li = table.index_of(lhs), ri = table.index_of(rhs);
    ix.as_implication[g].emplace_back(li, ri);
    ix.implications_of_lhs[static_cast<size_t>(li)].push_back(static_cast<int>(g));
  }
  return ix;
}

}  // namespace detail

// Least coverage table containing the seeds, (e, W) for every lambda member,
// and closed under the application rule: an entry (s, S) on an implication
// lhs -> rhs combined with an entry (t, T) on lhs yields ((s . t), S n T) on
// rhs. Witnesses are minimal by (size, tie order): candidates are settled in
// increasing witness order, so the first derivation of a world-set is also its
// cheapest, Dijkstra-style. A derived witness is strictly larger than either
// premise, which is what makes the greedy order sound.
inline CoverageTable saturate(const std::vector<Seed>& seeds, const std::vector<Formula>& lambda,
                              int world_count, const std::vector<Formula>& universe) {
  CoverageTable table(universe);
  detail::ImplicationIndex ix = detail::index_implications(table);

  struct Candidate {
    Term witness;
    int formula;
    WorldSet worlds;
  };
  struct CandidateOrder {
    bool operator()(const Candidate& a, const Candidate& b) const {
      // priority_queue pops the largest; invert to pop the smallest
      if (int c = term_compare(a.witness, b.witness); c != 0) return c > 0;
      if (a.formula != b.formula) return a.formula > b.formula;
      return a.worlds > b.worlds;
    }
  };
  std::priority_queue<Candidate, std::vector<Candidate>, CandidateOrder> heap;

  for (const Seed& sd : seeds) {
    if (!table.in_universe(sd.formula))
      throw ValidationError("seed formula outside universe: " + print_formula(sd.formula));
    if (sd.worlds.universe_size() != world_count || sd.worlds.empty())
      throw ValidationError("seed world-set empty or sized to the wrong model: " +
                            print_term(sd.witness) + " : " + print_formula(sd.formula));
    heap.push(Candidate{sd.witness, table.index_of(sd.formula), sd.worlds});
  }
  for (const Formula& l : lambda) {
    if (!table.in_universe(l))
      throw ValidationError("lambda formula outside universe: " + print_formula(l));
    heap.push(Candidate{Term::self_evident(), table.index_of(l), WorldSet::all(world_count)});
  }

  [[maybe_unused]] const size_t entry_bound = universe.size() << std::min(world_count, 40);
  while (!heap.empty()) {
    Candidate c = heap.top();
    heap.pop();
    if (!table.insert(c.formula, c.witness, c.worlds)) continue;
    assert(table.entry_count() <= entry_bound);
    // as implication premise: combine with already-settled antecedent entries
    for (auto [li, ri] : ix.as_implication[static_cast<size_t>(c.formula)]) {
      for (const CoverageEntry& ant : table.entries(li)) {
        WorldSet meet = c.worlds.intersect(ant.worlds);
        if (!meet.empty()) heap.push(Candidate{Term::app(c.witness, ant.witness), ri, meet});
      }
    }
    // as antecedent: combine with already-settled implication entries
    for (int g : ix.implications_of_lhs[static_cast<size_t>(c.formula)]) {
      for (auto [li, ri] : ix.as_implication[static_cast<size_t>(g)]) {
        (void)li;
        for (const CoverageEntry& imp : table.entries(g)) {
          WorldSet meet = imp.worlds.intersect(c.worlds);
          if (!meet.empty()) heap.push(Candidate{Term::app(imp.witness, c.witness), ri, meet});
        }
      }
    }
  }
  return table;
}

// Structural checks on a table: the application rule closure (in the
// subset-of-an-entry sense) and the lambda entries required by condition (II).
// Returns human-readable violation descriptions; empty means well-formed.
inline std::vector<std::string> validate_table(const CoverageTable& table,
                                               const std::vector<Formula>& lambda,
                                               int world_count) {
  std::vector<std::string> issues;
  const auto& universe = table.universe();
  for (size_t g = 0; g < universe.size(); ++g) {
    Formula lhs = universe[g], rhs = universe[g];
    if (!is_implication(universe[g], &lhs, &rhs)) continue;
    if (!table.in_universe(lhs) || !table.in_universe(rhs)) {
      issues.push_back("universe not closed under implication members: " +
                       print_formula(universe[g]));
      continue;
    }
    for (const CoverageEntry& imp : table.entries(static_cast<int>(g))) {
      for (const CoverageEntry& ant : table.entries(lhs)) {
        WorldSet meet = imp.worlds.intersect(ant.worlds);
        if (meet.empty()) continue;
        bool covered = false;
        for (const CoverageEntry& con : table.entries(rhs))
          if (meet.subset_of(con.worlds)) {
            covered = true;
            break;
          }
        if (!covered)
          issues.push_back("application rule not closed at " + print_formula(universe[g]) +
                           " with " + print_term(imp.witness) + ", " + print_term(ant.witness));
      }
    }
  }
  WorldSet full = WorldSet::all(world_count);
  for (const Formula& l : lambda) {
    bool found = false;
    if (table.in_universe(l))
      for (const CoverageEntry& en : table.entries(l))
        if (en.worlds == full) {
          found = true;
          break;
        }
    if (!found) issues.push_back("missing (e, W) entry for lambda member " + print_formula(l));
  }
  return issues;
}

}  // namespace whylog
