#pragma once

#include <string>
#include <vector>

#include "whylog/semantics.hpp"

namespace whylog {

// ---------------------------------------------------------------------------
// Factivity transform M^F

// Intersects every coverage entry's world-set with the truth set of its
// formula, drops empties, and re-closes under the application rule. The
// re-closure only adds subsets of surviving entries, so satisfaction is
// unchanged; keeping the table saturated makes the transform a fixpoint on
// its own output. The result passes check_factivity and satisfies the same
// formulas as the input at every world.
inline Model factive_transform(const Model& m) {
  std::vector<WorldSet> truth = truth_table(m);
  std::vector<Seed> trimmed;
  for (size_t k = 0; k < m.universe.size(); ++k)
    for (const CoverageEntry& en : m.coverage.entries(static_cast<int>(k))) {
      WorldSet set = en.worlds.intersect(truth[k]);
      if (!set.empty()) trimmed.push_back(Seed{en.witness, m.universe[k], set});
    }
  Model out = m;
  out.coverage = saturate(trimmed, m.lambda, m.frame.world_count(), m.universe);
  // seeds mirror the final table so the printed form reloads to the same
  // coverage and transforming again is the identity
  out.seeds.clear();
  for (size_t k = 0; k < m.universe.size(); ++k)
    for (const CoverageEntry& en : out.coverage.entries(static_cast<int>(k)))
      out.seeds.push_back(Seed{en.witness, m.universe[k], en.worlds});
  return out;
}

// ---------------------------------------------------------------------------
// JL models

// Per-agent evidence variant of the model: Ky holds at w via an entry that
// contains w itself. Entries of a well-formed JL model are unions of the
// agent's blocks (monotonicity).
struct JlModel {
  Frame frame;
  std::vector<Formula> lambda;
  std::vector<Formula> universe;
  std::vector<CoverageTable> evidence;                       // per agent
  std::vector<std::vector<std::pair<int, Seed>>> seed_lines; // as loaded/printed, per agent
};

// Corresponding JL model: an entry (t, S) contributes, per agent, the union
// of that agent's blocks fully contained in S.
inline JlModel jl_transform(const Model& m) {
  JlModel out;
  out.frame = m.frame;
  out.lambda = m.lambda;
  out.universe = m.universe;
  out.evidence.assign(static_cast<size_t>(m.frame.agent_count()), CoverageTable(m.universe));
  out.seed_lines.resize(static_cast<size_t>(m.frame.agent_count()));
  for (int a = 0; a < m.frame.agent_count(); ++a) {
    CoverageTable& table = out.evidence[static_cast<size_t>(a)];
    for (size_t k = 0; k < m.universe.size(); ++k)
      for (const CoverageEntry& en : m.coverage.entries(static_cast<int>(k))) {
        WorldSet monotone(m.frame.world_count());
        for (const WorldSet& b : m.frame.blocks[static_cast<size_t>(a)])
          if (b.subset_of(en.worlds)) monotone = monotone.unite(b);
        if (!monotone.empty()) table.insert(static_cast<int>(k), en.witness, monotone);
      }
    for (size_t k = 0; k < m.universe.size(); ++k)
      for (const CoverageEntry& en : table.entries(static_cast<int>(k)))
        out.seed_lines[static_cast<size_t>(a)].push_back(
            {static_cast<int>(k), Seed{en.witness, m.universe[k], en.worlds}});
  }
  return out;
}

namespace detail {

inline bool eval_jl_core(const JlModel& j, int w, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::prop:
      return j.frame.prop_set(f.prop_name()).contains(w);
    case Formula::Kind::lnot:
      return !eval_jl_core(j, w, f.inner());
    case Formula::Kind::land:
      return eval_jl_core(j, w, f.left()) && eval_jl_core(j, w, f.right());
    case Formula::Kind::know: {
      const WorldSet& cls = j.frame.block(j.frame.agent_id(f.agent().name), w);
      for (int v : cls.members())
        if (!eval_jl_core(j, v, f.body())) return false;
      return true;
    }
    case Formula::Kind::know_why: {
      int a = j.frame.agent_id(f.agent().name);
      const WorldSet& cls = j.frame.block(a, w);
      for (int v : cls.members())
        if (!eval_jl_core(j, v, f.body())) return false;
      WorldSet here(j.frame.world_count());
      here.add(w);
      return j.evidence[static_cast<size_t>(a)].covers_uniformly(f.body(), here).has_value();
    }
    case Formula::Kind::know_why_cond:
      throw UnsupportedError("JL semantics does not support conditional Ky: " + print_formula(f));
  }
  return false;
}

}  // namespace detail

// Truth under the JL reading: Ky_i needs an evidence entry containing the
// current world plus truth of the body across the class. Rejects conditional
// Ky (undefined under this semantics).
inline Verdict eval_jl(const JlModel& j, int world, const Formula& f) {
  if (world < 0 || world >= j.frame.world_count()) throw ValidationError("world index out of range");
  for (const Formula& sub : subformulas(f))
    if (sub.kind() == Formula::Kind::know_why_cond)
      throw UnsupportedError("JL semantics does not support conditional Ky: " +
                             print_formula(sub));
  for (const Formula& sub : subformulas(f))
    if (!j.evidence.front().in_universe(sub))
      throw UniverseError("formula outside universe: " + print_formula(sub));
  bool value = detail::eval_jl_core(j, world, f);
  Verdict out{value, std::nullopt};
  if (value && f.kind() == Formula::Kind::know_why) {
    int a = j.frame.agent_id(f.agent().name);
    WorldSet here(j.frame.world_count());
    here.add(world);
    out.trace = EvalTrace{EvalTrace::Kind::ky_witness,
                          j.evidence[static_cast<size_t>(a)].covers_uniformly(f.body(), here), {},
                          j.frame.block(a, world)};
  }
  return out;
}

inline Verdict eval_jl(const JlModel& j, const std::string& world, const Formula& f) {
  return eval_jl(j, j.frame.world_id(world), f);
}

struct JlViolation {
  std::string condition;  // "I", "II", or "III"
  std::string detail;
};

// Checks the three admissible-evidence conditions on every agent table:
// closure under application, (e, W) for each lambda member, and
// block-monotonicity of every entry.
inline std::vector<JlViolation> validate_jl(const JlModel& j) {
  std::vector<JlViolation> out;
  for (int a = 0; a < j.frame.agent_count(); ++a) {
    const CoverageTable& table = j.evidence[static_cast<size_t>(a)];
    const std::string who = "agent " + j.frame.agents[static_cast<size_t>(a)];
    for (size_t g = 0; g < j.universe.size(); ++g) {
      Formula lhs = j.universe[g], rhs = j.universe[g];
      if (!is_implication(j.universe[g], &lhs, &rhs)) continue;
      for (const CoverageEntry& imp : table.entries(static_cast<int>(g)))
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
            out.push_back(JlViolation{
                "I", who + ": application rule fails at " + print_formula(j.universe[g]) +
                         " with " + print_term(imp.witness) + ", " + print_term(ant.witness)});
        }
    }
    WorldSet full = WorldSet::all(j.frame.world_count());
    for (const Formula& l : j.lambda) {
      bool found = false;
      if (table.in_universe(l))
        for (const CoverageEntry& en : table.entries(l))
          if (en.worlds == full && en.witness == Term::self_evident()) {
            found = true;
            break;
          }
      if (!found)
        out.push_back(JlViolation{"II", who + ": missing (e, W) entry for " + print_formula(l)});
    }
    for (size_t k = 0; k < j.universe.size(); ++k)
      for (const CoverageEntry& en : table.entries(static_cast<int>(k)))
        for (const WorldSet& b : j.frame.blocks[static_cast<size_t>(a)]) {
          WorldSet meet = b.intersect(en.worlds);
          if (!meet.empty() && !(meet == b)) {
            out.push_back(JlViolation{
                "III", who + ": entry " + print_term(en.witness) + " : " +
                           print_formula(j.universe[k]) + " splits a block"});
            break;
          }
        }
  }
  return out;
}

// JL model file: the plain format with per-agent `seed[i]` lines. Loaded
// evidence is literal (no saturation, no lambda injection) so that
// validate_jl can report exactly what the file says.
inline std::string print_jl_model(const JlModel& j) {
  std::ostringstream out;
  detail::print_frame(out, j.frame);
  for (const Formula& l : j.lambda) out << "  lambda: " << print_formula(l) << "\n";
  for (int a = 0; a < j.frame.agent_count(); ++a)
    for (const auto& [idx, sd] : j.seed_lines[static_cast<size_t>(a)])
      out << "  seed[" << j.frame.agents[static_cast<size_t>(a)] << "] " << print_term(sd.witness)
          << " : " << print_formula(sd.formula) << " @ " << detail::world_list(j.frame, sd.worlds)
          << "\n";
  out << "end\n";
  return out.str();
}

inline JlModel load_jl_model(const std::string& text, std::vector<std::string>* warnings = nullptr) {
  detail::ModelFileParts parts = detail::read_model_file(text, warnings);
  if (parts.saw_plain_seeds)
    throw ValidationError("plain seed lines belong to the basic model format; use seed[agent]");
  JlModel j;
  j.frame = std::move(parts.frame);
  j.lambda = std::move(parts.lambda);
  std::sort(j.lambda.begin(), j.lambda.end(), FormulaLess{});
  j.lambda.erase(std::unique(j.lambda.begin(), j.lambda.end()), j.lambda.end());
  for (const Formula& l : j.lambda)
    if (!is_propositional_tautology(l))
      throw ValidationError("lambda member is not a propositional tautology: " + print_formula(l));
  std::vector<Formula> roots;
  for (const auto& [agent, sd] : parts.agent_seeds) roots.push_back(sd.formula);
  for (const Formula& l : j.lambda) roots.push_back(l);
  j.universe = build_universe(roots);
  j.evidence.assign(static_cast<size_t>(j.frame.agent_count()), CoverageTable(j.universe));
  j.seed_lines.resize(static_cast<size_t>(j.frame.agent_count()));
  for (const auto& [agent, sd] : parts.agent_seeds) {
    int a = j.frame.agent_id(agent);
    j.evidence[static_cast<size_t>(a)].insert(j.evidence[static_cast<size_t>(a)].index_of(sd.formula),
                                              sd.witness, sd.worlds);
  }
  for (int a = 0; a < j.frame.agent_count(); ++a)
    for (size_t k = 0; k < j.universe.size(); ++k)
      for (const CoverageEntry& en : j.evidence[static_cast<size_t>(a)].entries(static_cast<int>(k)))
        j.seed_lines[static_cast<size_t>(a)].push_back(
            {static_cast<int>(k), Seed{en.witness, j.universe[k], en.worlds}});
  return j;
}

// ---------------------------------------------------------------------------
// Introspective completion

// Seeds a uniform witness for every true shaped formula on each class where
// it lacks one, iterating until check_introspection over `shapes` is clean.
// True shaped formulas are class-constant on their agent's blocks, so a block
// either needs a witness everywhere or nowhere. Fresh base terms c1, c2, ...
// are used, skipping names already present among the seeds.
inline Model introspective_complete(const Model& m, const std::vector<Formula>& shapes) {
  for (const Formula& f : shapes)
    if (!introspective_shape_agent(f))
      throw ValidationError("not an introspective shape (K/~K/Ky/~Ky): " + print_formula(f));
  std::set<std::string> taken;
  for (const Seed& sd : m.seeds)
    if (sd.witness.kind() == Term::Kind::base) taken.insert(sd.witness.name());
  int counter = 0;
  auto fresh = [&]() {
    std::string name;
    do {
      name = "c" + std::to_string(++counter);
    } while (taken.count(name));
    taken.insert(name);
    return Term::base(name);
  };

  Model cur = extend_universe(m, shapes);
  for (int rounds = 0;; ++rounds) {
    std::map<Formula, WorldSet, FormulaLess> missing;
    for (const Formula& f : shapes) {
      int a = cur.frame.agent_id(introspective_shape_agent(f)->name);
      for (const WorldSet& b : cur.frame.blocks[static_cast<size_t>(a)]) {
        int w = b.members().front();
        if (!detail::eval_core(cur, w, f, nullptr)) continue;
        if (cur.coverage.covers_uniformly(f, b)) continue;
        auto [it, fresh_row] = missing.emplace(f, WorldSet(cur.frame.world_count()));
        (void)fresh_row;
        it->second = it->second.unite(b);
      }
    }
    if (missing.empty()) return cur;
    std::vector<Seed> seeds = cur.seeds;
    for (const auto& [f, worlds] : missing) seeds.push_back(Seed{fresh(), f, worlds});
    cur = make_model(cur.frame, cur.lambda, std::move(seeds), cur.universe);
    if (rounds > static_cast<int>(shapes.size()) * cur.frame.world_count() + 4)
      throw Error("introspective completion failed to converge");
  }
}

}  // namespace whylog
