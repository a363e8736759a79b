#pragma once

#include <optional>
#include <string>
#include <vector>

#include "whylog/model.hpp"

namespace whylog {

// Structured explanation of a top-level modal verdict. Traces never affect
// truth values; replay_trace checks them against the model.
struct EvalTrace {
  enum class Kind {
    k_counterexample,        // K false: a class member where the body fails
    ky_witness,              // Ky true: the uniform witness
    ky_no_uniform_witness,   // Ky false: body holds on the class, no witness covers it
    ky_body_counterexample,  // Ky false: a class member where the body fails
    cond_empty_cell,         // conditional Ky true vacuously: no condition worlds
    cond_witness,            // conditional Ky true: witness for the condition cell
    cond_no_uniform_witness,
    cond_body_counterexample,
  };

  Kind kind;
  std::optional<Term> witness;
  std::optional<int> world;
  std::optional<WorldSet> cell;
};

struct Verdict {
  bool value;
  std::optional<EvalTrace> trace;
};

namespace detail {

inline bool eval_core(const Model& m, int w, const Formula& f, std::optional<EvalTrace>* trace);

inline bool class_truth(const Model& m, const WorldSet& cell, const Formula& body, int* failing) {
  for (int v : cell.members())
    if (!eval_core(m, v, body, nullptr)) {
      if (failing) *failing = v;
      return false;
    }
  return true;
}

inline bool eval_core(const Model& m, int w, const Formula& f, std::optional<EvalTrace>* trace) {
  switch (f.kind()) {
    case Formula::Kind::prop:
      return m.frame.prop_set(f.prop_name()).contains(w);
    case Formula::Kind::lnot:
      return !eval_core(m, w, f.inner(), nullptr);
    case Formula::Kind::land:
      return eval_core(m, w, f.left(), nullptr) && eval_core(m, w, f.right(), nullptr);
    case Formula::Kind::know: {
      const WorldSet& cls = m.frame.block(m.frame.agent_id(f.agent().name), w);
      int failing = -1;
      if (class_truth(m, cls, f.body(), &failing)) return true;
      if (trace) *trace = EvalTrace{EvalTrace::Kind::k_counterexample, {}, failing, cls};
      return false;
    }
    case Formula::Kind::know_why: {
      const WorldSet& cls = m.frame.block(m.frame.agent_id(f.agent().name), w);
      int failing = -1;
      if (!class_truth(m, cls, f.body(), &failing)) {
        if (trace)
          *trace = EvalTrace{EvalTrace::Kind::ky_body_counterexample, {}, failing, cls};
        return false;
      }
      std::optional<Term> witness = m.coverage.covers_uniformly(f.body(), cls);
      if (!witness) {
        if (trace) *trace = EvalTrace{EvalTrace::Kind::ky_no_uniform_witness, {}, {}, cls};
        return false;
      }
      if (trace) *trace = EvalTrace{EvalTrace::Kind::ky_witness, witness, {}, cls};
      return true;
    }
    case Formula::Kind::know_why_cond: {
      const WorldSet& cls = m.frame.block(m.frame.agent_id(f.agent().name), w);
      WorldSet cell(m.frame.world_count());
      for (int v : cls.members())
        if (eval_core(m, v, f.condition(), nullptr)) cell.add(v);
      if (cell.empty()) {
        // no condition worlds in the class: vacuously true
        if (trace) *trace = EvalTrace{EvalTrace::Kind::cond_empty_cell, {}, {}, cell};
        return true;
      }
      int failing = -1;
      if (!class_truth(m, cell, f.cond_body(), &failing)) {
        if (trace)
          *trace = EvalTrace{EvalTrace::Kind::cond_body_counterexample, {}, failing, cell};
        return false;
      }
      std::optional<Term> witness = m.coverage.covers_uniformly(f.cond_body(), cell);
      if (!witness) {
        if (trace) *trace = EvalTrace{EvalTrace::Kind::cond_no_uniform_witness, {}, {}, cell};
        return false;
      }
      if (trace) *trace = EvalTrace{EvalTrace::Kind::cond_witness, witness, {}, cell};
      return true;
    }
  }
  return false;
}

inline void require_in_universe(const Model& m, const Formula& f) {
  for (const Formula& sub : subformulas(f))
    if (!m.coverage.in_universe(sub))
      throw UniverseError("formula outside universe: " + print_formula(sub) +
                          " (extend the universe and re-saturate)");
}

}  // namespace detail

// Truth at a pointed model. Requires every subformula of f to be in the model
// universe; extend_universe otherwise.
inline Verdict eval(const Model& m, int world, const Formula& f) {
  if (world < 0 || world >= m.frame.world_count()) throw ValidationError("world index out of range");
  detail::require_in_universe(m, f);
  std::optional<EvalTrace> trace;
  bool has_modal_top = f.kind() == Formula::Kind::know || f.kind() == Formula::Kind::know_why ||
                       f.kind() == Formula::Kind::know_why_cond;
  bool value = detail::eval_core(m, world, f, has_modal_top ? &trace : nullptr);
  return Verdict{value, trace};
}

inline Verdict eval(const Model& m, const std::string& world, const Formula& f) {
  return eval(m, m.frame.world_id(world), f);
}

// Truth at every world, indexed by world id.
inline std::vector<bool> eval_all(const Model& m, const Formula& f) {
  detail::require_in_universe(m, f);
  std::vector<bool> out(static_cast<size_t>(m.frame.world_count()));
  for (int w = 0; w < m.frame.world_count(); ++w)
    out[static_cast<size_t>(w)] = detail::eval_core(m, w, f, nullptr);
  return out;
}

// Truth sets for every universe formula, computed bottom-up (the universe
// order places children first).
inline std::vector<WorldSet> truth_table(const Model& m) {
  const auto& universe = m.universe;
  std::vector<WorldSet> truth(universe.size(), WorldSet(m.frame.world_count()));
  std::map<Formula, int, FormulaLess> index;
  for (size_t k = 0; k < universe.size(); ++k) index.emplace(universe[k], static_cast<int>(k));
  auto truth_of = [&](const Formula& g) -> const WorldSet& {
    return truth[static_cast<size_t>(index.at(g))];
  };
  for (size_t k = 0; k < universe.size(); ++k) {
    const Formula& f = universe[k];
    WorldSet set(m.frame.world_count());
    switch (f.kind()) {
      case Formula::Kind::prop:
        set = m.frame.prop_set(f.prop_name());
        break;
      case Formula::Kind::lnot: {
        const WorldSet& inner = truth_of(f.inner());
        for (int w = 0; w < m.frame.world_count(); ++w)
          if (!inner.contains(w)) set.add(w);
        break;
      }
      case Formula::Kind::land:
        set = truth_of(f.left()).intersect(truth_of(f.right()));
        break;
      case Formula::Kind::know: {
        int a = m.frame.agent_id(f.agent().name);
        const WorldSet& body = truth_of(f.body());
        for (const WorldSet& b : m.frame.blocks[static_cast<size_t>(a)])
          if (b.subset_of(body)) set = set.unite(b);
        break;
      }
      case Formula::Kind::know_why: {
        int a = m.frame.agent_id(f.agent().name);
        const WorldSet& body = truth_of(f.body());
        for (const WorldSet& b : m.frame.blocks[static_cast<size_t>(a)])
          if (b.subset_of(body) && m.coverage.covers_uniformly(f.body(), b)) set = set.unite(b);
        break;
      }
      case Formula::Kind::know_why_cond: {
        int a = m.frame.agent_id(f.agent().name);
        const WorldSet& cond = truth_of(f.condition());
        const WorldSet& body = truth_of(f.cond_body());
        for (const WorldSet& b : m.frame.blocks[static_cast<size_t>(a)]) {
          WorldSet cell = b.intersect(cond);
          if (cell.empty() ||
              (cell.subset_of(body) && m.coverage.covers_uniformly(f.cond_body(), cell)))
            set = set.unite(b);
        }
        break;
      }
    }
    truth[k] = set;
  }
  return truth;
}

// ---------------------------------------------------------------------------
// Property checkers

struct FactivityViolation {
  Term witness;
  Formula formula;
  int world;
};

// Empty iff every coverage entry's world-set contains only worlds satisfying
// its formula.
inline std::vector<FactivityViolation> check_factivity(const Model& m) {
  std::vector<FactivityViolation> out;
  std::vector<WorldSet> truth = truth_table(m);
  for (size_t k = 0; k < m.universe.size(); ++k)
    for (const CoverageEntry& en : m.coverage.entries(static_cast<int>(k)))
      for (int w : en.worlds.members())
        if (!truth[k].contains(w))
          out.push_back(FactivityViolation{en.witness, m.universe[k], w});
  return out;
}

struct IntrospectionViolation {
  int world;
  Formula formula;
};

// One of the four introspective shapes: K_i b, ~K_i b, Ky_i b, ~Ky_i b.
// Returns the agent, or nullopt if the formula has a different shape.
inline std::optional<Agent> introspective_shape_agent(const Formula& f) {
  Formula g = f;
  if (g.kind() == Formula::Kind::lnot) g = g.inner();
  if (g.kind() == Formula::Kind::know || g.kind() == Formula::Kind::know_why) return g.agent();
  return std::nullopt;
}

// Checks the introspection property relative to a finite universe of shaped
// formulas: wherever a member is true, some term must cover it uniformly on
// the member's agent class.
inline std::vector<IntrospectionViolation> check_introspection(const Model& m,
                                                               const std::vector<Formula>& shapes) {
  for (const Formula& f : shapes)
    if (!introspective_shape_agent(f))
      throw ValidationError("not an introspective shape (K/~K/Ky/~Ky): " + print_formula(f));
  Model ext = extend_universe(m, shapes);
  std::vector<IntrospectionViolation> out;
  for (int w = 0; w < ext.frame.world_count(); ++w)
    for (const Formula& f : shapes) {
      if (!detail::eval_core(ext, w, f, nullptr)) continue;
      int a = ext.frame.agent_id(introspective_shape_agent(f)->name);
      if (!ext.coverage.covers_uniformly(f, ext.frame.block(a, w)))
        out.push_back(IntrospectionViolation{w, f});
    }
  return out;
}

// ---------------------------------------------------------------------------
// Trace replay

// Re-derives the verdict from its trace; true iff the trace is consistent
// with the model and justifies the recorded value.
inline bool replay_trace(const Model& m, int world, const Formula& f, const Verdict& v) {
  if (!v.trace) return true;
  const EvalTrace& t = *v.trace;
  auto body_true_on = [&](const Formula& body, const WorldSet& cell) {
    return detail::class_truth(m, cell, body, nullptr);
  };
  switch (t.kind) {
    case EvalTrace::Kind::k_counterexample: {
      if (f.kind() != Formula::Kind::know || v.value || !t.world) return false;
      const WorldSet& cls = m.frame.block(m.frame.agent_id(f.agent().name), world);
      return cls.contains(*t.world) && !detail::eval_core(m, *t.world, f.body(), nullptr);
    }
    case EvalTrace::Kind::ky_witness: {
      if (f.kind() != Formula::Kind::know_why || !v.value || !t.witness) return false;
      const WorldSet& cls = m.frame.block(m.frame.agent_id(f.agent().name), world);
      std::optional<Term> found = m.coverage.covers_uniformly(f.body(), cls);
      return found && body_true_on(f.body(), cls);
    }
    case EvalTrace::Kind::ky_no_uniform_witness: {
      if (f.kind() != Formula::Kind::know_why || v.value) return false;
      const WorldSet& cls = m.frame.block(m.frame.agent_id(f.agent().name), world);
      return !m.coverage.covers_uniformly(f.body(), cls).has_value();
    }
    case EvalTrace::Kind::ky_body_counterexample: {
      if (f.kind() != Formula::Kind::know_why || v.value || !t.world) return false;
      const WorldSet& cls = m.frame.block(m.frame.agent_id(f.agent().name), world);
      return cls.contains(*t.world) && !detail::eval_core(m, *t.world, f.body(), nullptr);
    }
    case EvalTrace::Kind::cond_empty_cell:
      return f.kind() == Formula::Kind::know_why_cond && v.value && t.cell && t.cell->empty();
    case EvalTrace::Kind::cond_witness: {
      if (f.kind() != Formula::Kind::know_why_cond || !v.value || !t.witness || !t.cell)
        return false;
      return m.coverage.covers_uniformly(f.cond_body(), *t.cell).has_value() &&
             body_true_on(f.cond_body(), *t.cell);
    }
    case EvalTrace::Kind::cond_no_uniform_witness:
      return f.kind() == Formula::Kind::know_why_cond && !v.value && t.cell &&
             !m.coverage.covers_uniformly(f.cond_body(), *t.cell).has_value();
    case EvalTrace::Kind::cond_body_counterexample: {
      if (f.kind() != Formula::Kind::know_why_cond || v.value || !t.world || !t.cell) return false;
      return t.cell->contains(*t.world) &&
             !detail::eval_core(m, *t.world, f.cond_body(), nullptr);
    }
  }
  return false;
}

}  // namespace whylog
