#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "whylog/error.hpp"
#include "whylog/syntax.hpp"

namespace whylog {

enum class SystemKind { sky, skyi };

inline const char* system_name(SystemKind k) { return k == SystemKind::sky ? "SKY" : "SKYI"; }

// A Hilbert system instance: which axiom schemas are available plus the
// tautology-ground parameter used by NECKY.
struct SystemId {
  SystemKind kind;
  std::vector<Formula> lambda;
};

inline const std::vector<std::string>& axiom_names(SystemKind kind) {
  static const std::vector<std::string> sky = {"TAUT", "DISTK", "DISTY", "T",
                                               "4",    "5",     "PRES",  "4YK"};
  static const std::vector<std::string> skyi = {"TAUT", "DISTK", "DISTY", "T",  "PRES",
                                                "4KY",  "5KY",   "4Y",    "5Y"};
  return kind == SystemKind::sky ? sky : skyi;
}

// Schema formulas use metavariable props phi/psi and the metavariable agent i.
inline const Formula& axiom_schema(const std::string& name) {
  static const std::map<std::string, Formula> schemas = [] {
    Agent i{"i"};
    Formula phi = Formula::prop("phi");
    Formula psi = Formula::prop("psi");
    std::map<std::string, Formula> m;
    m.emplace("DISTK", Formula::implies(Formula::know(i, Formula::implies(phi, psi)),
                                        Formula::implies(Formula::know(i, phi),
                                                         Formula::know(i, psi))));
    m.emplace("DISTY", Formula::implies(Formula::know_why(i, Formula::implies(phi, psi)),
                                        Formula::implies(Formula::know_why(i, phi),
                                                         Formula::know_why(i, psi))));
    m.emplace("T", Formula::implies(Formula::know(i, phi), phi));
    m.emplace("4", Formula::implies(Formula::know(i, phi),
                                    Formula::know(i, Formula::know(i, phi))));
    m.emplace("5", Formula::implies(Formula::lnot(Formula::know(i, phi)),
                                    Formula::know(i, Formula::lnot(Formula::know(i, phi)))));
    m.emplace("PRES", Formula::implies(Formula::know_why(i, phi), Formula::know(i, phi)));
    m.emplace("4YK", Formula::implies(Formula::know_why(i, phi),
                                      Formula::know(i, Formula::know_why(i, phi))));
    m.emplace("4KY", Formula::implies(Formula::know(i, phi),
                                      Formula::know_why(i, Formula::know(i, phi))));
    m.emplace("5KY", Formula::implies(Formula::lnot(Formula::know(i, phi)),
                                      Formula::know_why(i, Formula::lnot(Formula::know(i, phi)))));
    m.emplace("4Y", Formula::implies(Formula::know_why(i, phi),
                                     Formula::know_why(i, Formula::know_why(i, phi))));
    m.emplace("5Y", Formula::implies(Formula::lnot(Formula::know_why(i, phi)),
                                     Formula::know_why(i, Formula::lnot(Formula::know_why(i, phi)))));
    return m;
  }();
  auto it = schemas.find(name);
  if (it == schemas.end()) throw ValidationError("unknown axiom schema '" + name + "'");
  return it->second;
}

// A consistent assignment of schema metavariables.
struct AxiomMatch {
  std::map<std::string, Formula> formulas;  // phi/psi -> formula
  std::map<std::string, std::string> agents;
};

namespace detail {

inline bool schema_match(const Formula& schema, const Formula& f, AxiomMatch& subst) {
  switch (schema.kind()) {
    case Formula::Kind::prop: {
      auto [it, fresh] = subst.formulas.emplace(schema.prop_name(), f);
      return fresh || it->second == f;
    }
    case Formula::Kind::lnot:
      return f.kind() == Formula::Kind::lnot && schema_match(schema.inner(), f.inner(), subst);
    case Formula::Kind::land:
      return f.kind() == Formula::Kind::land && schema_match(schema.left(), f.left(), subst) &&
             schema_match(schema.right(), f.right(), subst);
    case Formula::Kind::know:
    case Formula::Kind::know_why: {
      if (f.kind() != schema.kind()) return false;
      auto [it, fresh] = subst.agents.emplace(schema.agent().name, f.agent().name);
      if (!fresh && it->second != f.agent().name) return false;
      return schema_match(schema.body(), f.body(), subst);
    }
    case Formula::Kind::know_why_cond: {
      if (f.kind() != schema.kind()) return false;
      auto [it, fresh] = subst.agents.emplace(schema.agent().name, f.agent().name);
      if (!fresh && it->second != f.agent().name) return false;
      return schema_match(schema.condition(), f.condition(), subst) &&
             schema_match(schema.cond_body(), f.cond_body(), subst);
    }
  }
  return false;
}

}  // namespace detail

// Applies a substitution to a schema; used to cross-check matches and to
// instantiate axioms for fuzzing.
inline Formula instantiate_schema(const Formula& schema, const AxiomMatch& subst) {
  switch (schema.kind()) {
    case Formula::Kind::prop: {
      auto it = subst.formulas.find(schema.prop_name());
      return it != subst.formulas.end() ? it->second : schema;
    }
    case Formula::Kind::lnot:
      return Formula::lnot(instantiate_schema(schema.inner(), subst));
    case Formula::Kind::land:
      return Formula::land(instantiate_schema(schema.left(), subst),
                           instantiate_schema(schema.right(), subst));
    case Formula::Kind::know:
    case Formula::Kind::know_why: {
      auto it = subst.agents.find(schema.agent().name);
      Agent a{it != subst.agents.end() ? it->second : schema.agent().name};
      Formula body = instantiate_schema(schema.body(), subst);
      return schema.kind() == Formula::Kind::know ? Formula::know(a, body)
                                                  : Formula::know_why(a, body);
    }
    case Formula::Kind::know_why_cond: {
      auto it = subst.agents.find(schema.agent().name);
      Agent a{it != subst.agents.end() ? it->second : schema.agent().name};
      return Formula::know_why_cond(a, instantiate_schema(schema.condition(), subst),
                                    instantiate_schema(schema.cond_body(), subst));
    }
  }
  return schema;
}

// Matches `f` against a named schema of the system. TAUT matches any
// propositional (modal-atom) tautology with the empty substitution.
inline std::optional<AxiomMatch> match_axiom(const SystemId& system, const std::string& name,
                                             const Formula& f) {
  const auto& names = axiom_names(system.kind);
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw ValidationError(std::string("axiom '") + name + "' is not part of " +
                          system_name(system.kind));
  if (name == "TAUT") {
    if (is_propositional_tautology(f)) return AxiomMatch{};
    return std::nullopt;
  }
  AxiomMatch subst;
  if (detail::schema_match(axiom_schema(name), f, subst)) return subst;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Proof objects

struct Justification {
  enum class Kind { axiom, mp, neck, necky, pl };

  Kind kind;
  std::string axiom;       // axiom name
  std::vector<int> cites;  // cited line indices
};

struct ProofLine {
  int index;
  Formula formula;
  Justification just;
};

struct Proof {
  SystemId system;
  std::vector<ProofLine> lines;
};

struct LineDiagnostic {
  int index;
  bool ok;
  std::string message;
};

struct ProofVerdict {
  bool accepted;
  std::vector<LineDiagnostic> lines;
};

// Line-by-line verification. MP accepts either citation order; PL admits any
// propositional consequence of the cited lines (checked on the modal-atom
// skeleton), which is no stronger than TAUT plus MP.
inline ProofVerdict check_proof(const Proof& p) {
  ProofVerdict verdict{true, {}};
  std::map<int, Formula> by_index;
  int expected = 1;
  for (const ProofLine& line : p.lines) {
    std::string problem;
    if (line.index != expected)
      problem = "expected line index " + std::to_string(expected) + ", got " +
                std::to_string(line.index);
    ++expected;

    auto cited_ok = [&](int idx) {
      if (by_index.count(idx)) return true;
      problem = idx >= line.index ? "forward citation of line " + std::to_string(idx)
                                  : "citation of missing line " + std::to_string(idx);
      return false;
    };

    if (problem.empty()) {
      switch (line.just.kind) {
        case Justification::Kind::axiom: {
          try {
            if (!match_axiom(p.system, line.just.axiom, line.formula))
              problem = "axiom " + line.just.axiom + " does not match the formula";
          } catch (const Error& err) {
            problem = err.what();
          }
          break;
        }
        case Justification::Kind::mp: {
          if (line.just.cites.size() != 2) {
            problem = "MP needs two citations";
            break;
          }
          int ci = line.just.cites[0], cj = line.just.cites[1];
          if (!cited_ok(ci) || !cited_ok(cj)) break;
          const Formula& fi = by_index.at(ci);
          const Formula& fj = by_index.at(cj);
          if (!(fj == Formula::implies(fi, line.formula)) &&
              !(fi == Formula::implies(fj, line.formula)))
            problem = "MP premises do not yield this formula";
          break;
        }
        case Justification::Kind::neck: {
          if (line.just.cites.size() != 1) {
            problem = "NECK needs one citation";
            break;
          }
          if (!cited_ok(line.just.cites[0])) break;
          const Formula& fi = by_index.at(line.just.cites[0]);
          if (line.formula.kind() != Formula::Kind::know || !(line.formula.body() == fi))
            problem = "NECK: formula is not K[..] of the cited line";
          break;
        }
        case Justification::Kind::necky: {
          if (line.formula.kind() != Formula::Kind::know_why) {
            problem = "NECKY: formula is not Ky[..] of a lambda member";
            break;
          }
          Formula body = line.formula.body();
          bool in_lambda = false;
          for (const Formula& l : p.system.lambda)
            if (l == body) {
              in_lambda = true;
              break;
            }
          if (!in_lambda) problem = "NECKY: " + print_formula(body) + " is not in lambda";
          break;
        }
        case Justification::Kind::pl: {
          if (line.just.cites.empty()) {
            problem = "PL needs at least one citation";
            break;
          }
          bool bad = false;
          for (int idx : line.just.cites)
            if (!cited_ok(idx)) {
              bad = true;
              break;
            }
          if (bad) break;
          Formula conj = by_index.at(line.just.cites[0]);
          for (size_t k = 1; k < line.just.cites.size(); ++k)
            conj = Formula::land(conj, by_index.at(line.just.cites[k]));
          try {
            if (!is_propositional_tautology(Formula::implies(conj, line.formula)))
              problem = "PL: not a propositional consequence of the cited lines";
          } catch (const Error& err) {
            problem = err.what();
          }
          break;
        }
      }
    }

    verdict.lines.push_back(LineDiagnostic{line.index, problem.empty(), problem});
    if (!problem.empty()) verdict.accepted = false;
    by_index.emplace(line.index, line.formula);
  }
  if (p.lines.empty()) {
    verdict.accepted = false;
    verdict.lines.push_back(LineDiagnostic{0, false, "empty proof"});
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Proof files

inline Proof parse_proof(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      size_t hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      lines.push_back(line);
    }
  }
  Proof proof;
  bool in_proof = false, done = false;
  for (size_t ln = 0; ln < lines.size(); ++ln) {
    int line_no = static_cast<int>(ln) + 1;
    std::string line = detail::trim(lines[ln]);
    if (line.empty()) continue;
    if (!in_proof) {
      std::vector<std::string> words = detail::split_ws(line);
      if (words.size() != 2 || words[0] != "proof")
        throw ParseError(line_no, 1, "expected 'proof SKY' or 'proof SKYI'");
      if (words[1] == "SKY")
        proof.system.kind = SystemKind::sky;
      else if (words[1] == "SKYI")
        proof.system.kind = SystemKind::skyi;
      else
        throw ParseError(line_no, 1, "unknown system '" + words[1] + "'");
      in_proof = true;
      continue;
    }
    if (done) throw ParseError(line_no, 1, "content after 'end'");
    if (line == "end") {
      done = true;
      continue;
    }
    if (line.rfind("lambda:", 0) == 0) {
      proof.system.lambda.push_back(parse_formula(detail::trim(line.substr(7)), line_no - 1));
      continue;
    }
    size_t dot = line.find('.');
    if (dot == std::string::npos) throw ParseError(line_no, 1, "expected '<index>. <formula> <justification>'");
    int index = 0;
    try {
      size_t used = 0;
      index = std::stoi(line.substr(0, dot), &used);
      if (used != dot) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ParseError(line_no, 1, "bad line index '" + line.substr(0, dot) + "'");
    }
    std::string rest = line.substr(dot + 1);
    size_t end = 0;
    Formula formula = parse_formula_prefix(rest, &end, line_no - 1);
    std::vector<std::string> toks = detail::split_ws(rest.substr(end));
    if (toks.empty()) throw ParseError(line_no, 1, "missing justification");
    Justification just;
    auto parse_cites = [&](size_t from, size_t at_least) {
      for (size_t k = from; k < toks.size(); ++k) {
        try {
          just.cites.push_back(std::stoi(toks[k]));
        } catch (const std::exception&) {
          throw ParseError(line_no, 1, "bad citation '" + toks[k] + "'");
        }
      }
      if (just.cites.size() < at_least)
        throw ParseError(line_no, 1, toks[0] + " needs at least " + std::to_string(at_least) +
                                         " citation(s)");
    };
    if (toks[0] == "MP") {
      just.kind = Justification::Kind::mp;
      parse_cites(1, 2);
      if (just.cites.size() != 2) throw ParseError(line_no, 1, "MP needs exactly two citations");
    } else if (toks[0] == "NECK") {
      just.kind = Justification::Kind::neck;
      parse_cites(1, 1);
      if (just.cites.size() != 1) throw ParseError(line_no, 1, "NECK needs exactly one citation");
    } else if (toks[0] == "NECKY") {
      just.kind = Justification::Kind::necky;
      if (toks.size() != 1) throw ParseError(line_no, 1, "NECKY takes no citations");
    } else if (toks[0] == "PL") {
      just.kind = Justification::Kind::pl;
      parse_cites(1, 1);
    } else if (toks.size() == 1) {
      just.kind = Justification::Kind::axiom;
      just.axiom = toks[0];
    } else {
      throw ParseError(line_no, 1, "unrecognized justification '" + toks[0] + "'");
    }
    proof.lines.push_back(ProofLine{index, formula, just});
  }
  if (!in_proof) throw ParseError(1, 1, "expected 'proof SKY' or 'proof SKYI'");
  if (!done) throw ParseError(static_cast<int>(lines.size()), 1, "missing 'end'");
  return proof;
}

inline std::string print_proof(const Proof& p) {
  std::ostringstream out;
  out << "proof " << system_name(p.system.kind) << "\n";
  for (const Formula& l : p.system.lambda) out << "  lambda: " << print_formula(l) << "\n";
  for (const ProofLine& line : p.lines) {
    out << "  " << line.index << ". " << print_formula(line.formula) << "  ";
    switch (line.just.kind) {
      case Justification::Kind::axiom: out << line.just.axiom; break;
      case Justification::Kind::mp: out << "MP"; break;
      case Justification::Kind::neck: out << "NECK"; break;
      case Justification::Kind::necky: out << "NECKY"; break;
      case Justification::Kind::pl: out << "PL"; break;
    }
    if (line.just.kind != Justification::Kind::axiom)
      for (int c : line.just.cites) out << " " << c;
    out << "\n";
  }
  out << "end\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Derived theorems

struct NamedProof {
  std::string theorem;
  Proof proof;
};

// Machine-checked proofs in SKYI of the four schemas it subsumes: each chains
// an introspection axiom with PRES.
inline std::vector<NamedProof> derive_skyi_theorems() {
  Agent i{"i"};
  Formula p = Formula::prop("p");
  auto chain = [&](const std::string& theorem, const std::string& axiom, const Formula& from,
                   const Formula& mid, const Formula& to) {
    Proof proof;
    proof.system.kind = SystemKind::skyi;
    proof.lines.push_back(
        ProofLine{1, Formula::implies(from, mid), Justification{Justification::Kind::axiom, axiom, {}}});
    proof.lines.push_back(
        ProofLine{2, Formula::implies(mid, to), Justification{Justification::Kind::axiom, "PRES", {}}});
    proof.lines.push_back(
        ProofLine{3, Formula::implies(from, to), Justification{Justification::Kind::pl, "", {1, 2}}});
    return NamedProof{theorem, proof};
  };
  Formula kp = Formula::know(i, p);
  Formula kyp = Formula::know_why(i, p);
  return {
      chain("4", "4KY", kp, Formula::know_why(i, kp), Formula::know(i, kp)),
      chain("5", "5KY", Formula::lnot(kp), Formula::know_why(i, Formula::lnot(kp)),
            Formula::know(i, Formula::lnot(kp))),
      chain("4YK", "4Y", kyp, Formula::know_why(i, kyp), Formula::know(i, kyp)),
      chain("5YK", "5Y", Formula::lnot(kyp), Formula::know_why(i, Formula::lnot(kyp)),
            Formula::know(i, Formula::lnot(kyp))),
  };
}

}  // namespace whylog
