#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "whylog/proofs.hpp"
#include "whylog/saturation_oracle.hpp"
#include "whylog/transforms.hpp"

namespace whylog::cli {

// Exit codes: 0 success/true, 1 semantic false/violations/rejection, 2 usage
// or parse error.
inline constexpr int kExitTrue = 0;
inline constexpr int kExitFalse = 1;
inline constexpr int kExitError = 2;

namespace detail {

inline uint64_t fnv1a(const std::string& bytes, uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

inline std::string basename(const std::string& path) {
  size_t slash = path.find_last_of("/\\");
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Report header: command echo (paths reduced to basenames so reports are
// location-independent) plus a digest of the input bytes. Reports are
// byte-identical across runs for identical inputs.
inline void echo(std::ostream& out, const std::vector<std::string>& words,
                 const std::string& input_bytes) {
  out << "#";
  for (const std::string& w : words) out << " " << w;
  out << "\n# inputs fnv1a=" << hex64(fnv1a(input_bytes)) << "\n";
}

inline bool looks_like_jl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string t = whylog::detail::trim(line);
    if (t.rfind("seed[", 0) == 0) return true;
  }
  return false;
}

inline std::string trace_text(const Frame& frame, const EvalTrace& t) {
  auto worlds = [&](const WorldSet& set) { return whylog::detail::world_list(frame, set); };
  switch (t.kind) {
    case EvalTrace::Kind::k_counterexample:
      return "body fails at " + frame.worlds[static_cast<size_t>(*t.world)];
    case EvalTrace::Kind::ky_witness:
      return "witness " + print_term(*t.witness) + " covers {" + worlds(*t.cell) + "}";
    case EvalTrace::Kind::ky_no_uniform_witness:
      return "no uniform explanation on {" + worlds(*t.cell) + "}";
    case EvalTrace::Kind::ky_body_counterexample:
      return "body fails at " + frame.worlds[static_cast<size_t>(*t.world)];
    case EvalTrace::Kind::cond_empty_cell:
      return "no condition worlds in the class; vacuously true";
    case EvalTrace::Kind::cond_witness:
      return "witness " + print_term(*t.witness) + " covers the condition cell {" +
             worlds(*t.cell) + "}";
    case EvalTrace::Kind::cond_no_uniform_witness:
      return "no uniform explanation on the condition cell {" + worlds(*t.cell) + "}";
    case EvalTrace::Kind::cond_body_counterexample:
      return "body fails at " + frame.worlds[static_cast<size_t>(*t.world)] +
             " inside the condition cell";
  }
  return "";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands

// Grows a literal JL model's universe to cover a query formula; entries are
// re-indexed, never saturated.
inline JlModel grow_jl_universe(JlModel j, const Formula& f) {
  bool missing = false;
  for (const Formula& sub : subformulas(f))
    if (!j.evidence.front().in_universe(sub)) missing = true;
  if (!missing) return j;
  std::vector<Formula> roots = j.universe;
  roots.push_back(f);
  std::vector<Formula> universe = build_universe(roots);
  std::vector<CoverageTable> grown;
  for (int a = 0; a < j.frame.agent_count(); ++a) {
    CoverageTable table(universe);
    for (const auto& [idx, sd] : j.seed_lines[static_cast<size_t>(a)])
      table.insert(table.index_of(sd.formula), sd.witness, sd.worlds);
    grown.push_back(std::move(table));
  }
  j.universe = std::move(universe);
  j.evidence = std::move(grown);
  return j;
}

inline int cmd_check(const std::string& model_path, const std::string& world,
                     const std::string& formula_text, bool jl, bool trace, std::ostream& out,
                     std::ostream& err) {
  std::string bytes = detail::read_file(model_path);
  std::vector<std::string> words = {"check", detail::basename(model_path), world, formula_text};
  if (jl) words.push_back("--jl");
  if (trace) words.push_back("--trace");
  detail::echo(out, words, bytes + formula_text);

  Formula f = parse_formula(formula_text);
  std::vector<std::string> warnings;
  Verdict v{false, std::nullopt};
  std::string trace_line;
  if (jl && !detail::looks_like_jl(bytes)) {
    Model m = load_model(bytes, &warnings);
    v = eval_jl(jl_transform(extend_universe(m, {f})), world, f);
  } else if (detail::looks_like_jl(bytes)) {
    JlModel j = grow_jl_universe(load_jl_model(bytes, &warnings), f);
    v = eval_jl(j, world, f);
  } else {
    Model m = load_model(bytes, &warnings);
    m = extend_universe(m, {f});
    v = eval(m, world, f);
    if (v.trace) trace_line = detail::trace_text(m.frame, *v.trace);
  }
  for (const std::string& w : warnings) err << "warning: " << w << "\n";
  if (trace && !trace_line.empty()) out << "trace: " << trace_line << "\n";
  out << (v.value ? "true" : "false") << "\n";
  return v.value ? kExitTrue : kExitFalse;
}

inline int cmd_validate(const std::string& model_path, bool factivity,
                        const std::string& introspection_list, std::ostream& out,
                        std::ostream& err) {
  std::string bytes = detail::read_file(model_path);
  std::vector<std::string> words = {"validate", detail::basename(model_path)};
  if (factivity) words.push_back("--factivity");
  if (!introspection_list.empty()) words.push_back("--introspection=" + introspection_list);
  detail::echo(out, words, bytes);
  std::vector<std::string> warnings;
  int violations = 0;
  if (detail::looks_like_jl(bytes)) {
    JlModel j = load_jl_model(bytes, &warnings);
    for (const JlViolation& v : validate_jl(j)) {
      out << "violation jl-" << v.condition << ": " << v.detail << "\n";
      ++violations;
    }
  } else {
    Model m = load_model(bytes, &warnings);
    if (factivity)
      for (const FactivityViolation& v : check_factivity(m)) {
        out << "violation factivity: " << print_term(v.witness) << " : "
            << print_formula(v.formula) << " @ " << m.frame.worlds[static_cast<size_t>(v.world)]
            << "\n";
        ++violations;
      }
    if (!introspection_list.empty()) {
      std::vector<Formula> shapes = parse_formula_list(introspection_list);
      for (const IntrospectionViolation& v : check_introspection(m, shapes)) {
        out << "violation introspection: " << print_formula(v.formula) << " @ "
            << m.frame.worlds[static_cast<size_t>(v.world)] << "\n";
        ++violations;
      }
    }
  }
  for (const std::string& w : warnings) err << "warning: " << w << "\n";
  if (violations == 0) {
    out << "ok\n";
    return kExitTrue;
  }
  out << violations << " violation(s)\n";
  return kExitFalse;
}

inline int cmd_saturate(const std::string& model_path, std::ostream& out, std::ostream& err) {
  std::string bytes = detail::read_file(model_path);
  detail::echo(out, {"saturate", detail::basename(model_path)}, bytes);
  std::vector<std::string> warnings;
  Model m = load_model(bytes, &warnings);
  for (const std::string& w : warnings) err << "warning: " << w << "\n";
  out << "# universe: " << m.universe.size()
      << " formulas (subformula closure of seeds, lambda, and queries)\n";
  auto is_seeded = [&](const Term& witness, const Formula& f, const WorldSet& set) {
    for (const Seed& sd : m.seeds)
      if (sd.witness == witness && sd.formula == f && sd.worlds == set) return true;
    if (witness == Term::self_evident() && set == WorldSet::all(m.frame.world_count()))
      for (const Formula& l : m.lambda)
        if (l == f) return true;
    return false;
  };
  for (size_t k = 0; k < m.universe.size(); ++k)
    for (const CoverageEntry& en : m.coverage.entries(static_cast<int>(k))) {
      out << "seed " << print_term(en.witness) << " : " << print_formula(m.universe[k]) << " @ "
          << whylog::detail::world_list(m.frame, en.worlds);
      if (!is_seeded(en.witness, m.universe[k], en.worlds)) out << "  # derived";
      out << "\n";
    }
  return kExitTrue;
}

inline int cmd_transform(const std::string& model_path, const std::string& mode,
                         const std::string& out_path, std::ostream& out, std::ostream& err) {
  std::string bytes = detail::read_file(model_path);
  detail::echo(out, {"transform", detail::basename(model_path), mode, detail::basename(out_path)},
               bytes);
  std::vector<std::string> warnings;
  Model m = load_model(bytes, &warnings);
  for (const std::string& w : warnings) err << "warning: " << w << "\n";
  std::string text;
  if (mode == "factive") {
    text = print_model(factive_transform(m));
  } else if (mode == "jl") {
    text = print_jl_model(jl_transform(m));
  } else {
    throw Error("unknown transform mode '" + mode + "' (expected factive or jl)");
  }
  std::ofstream sink(out_path, std::ios::binary);
  if (!sink) throw Error("cannot write '" + out_path + "'");
  sink << text;
  out << "wrote " << detail::basename(out_path) << " (" << text.size() << " bytes)\n";
  return kExitTrue;
}

inline int cmd_prove(const std::string& proof_path, std::ostream& out, std::ostream& err) {
  (void)err;
  std::string bytes = detail::read_file(proof_path);
  detail::echo(out, {"prove", detail::basename(proof_path)}, bytes);
  Proof proof = parse_proof(bytes);
  ProofVerdict verdict = check_proof(proof);
  for (const LineDiagnostic& d : verdict.lines)
    if (!d.ok) out << "line " << d.index << ": " << d.message << "\n";
  if (verdict.accepted) {
    out << "accepted (" << proof.lines.size() << " lines)\n";
    return kExitTrue;
  }
  out << "rejected\n";
  return kExitFalse;
}

// ---------------------------------------------------------------------------
// Soundness fuzzing

struct FuzzCaps {
  int max_worlds = 4;
  int max_agents = 2;
  int max_props = 3;
  int max_seeds = 4;
  int formula_depth = 2;
};

struct FuzzCounterexample {
  int trial;
  std::string axiom;
  Formula instance;
  int world;
  Model model;
};

namespace detail {

// TAUT is a schema family; fuzz it through a fixed propositional base.
inline std::vector<std::pair<std::string, Formula>> axiom_instances(SystemKind kind,
                                                                    std::mt19937_64& rng,
                                                                    const std::vector<std::string>& props,
                                                                    const std::vector<std::string>& agents,
                                                                    int depth) {
  std::vector<std::pair<std::string, Formula>> out;
  auto inst = [&](const char* metavar) {
    (void)metavar;
    return random_formula(rng, props, agents, depth, /*allow_cond=*/false);
  };
  for (const std::string& name : axiom_names(kind)) {
    if (name == "TAUT") {
      Formula phi = inst("phi"), psi = inst("psi"), chi = inst("chi");
      out.emplace_back("TAUT", Formula::implies(phi, Formula::implies(psi, phi)));
      out.emplace_back(
          "TAUT",
          Formula::implies(Formula::implies(phi, Formula::implies(psi, chi)),
                           Formula::implies(Formula::implies(phi, psi), Formula::implies(phi, chi))));
      out.emplace_back("TAUT",
                       Formula::implies(Formula::implies(Formula::lnot(phi), Formula::lnot(psi)),
                                        Formula::implies(psi, phi)));
      continue;
    }
    AxiomMatch subst;
    subst.formulas.emplace("phi", inst("phi"));
    subst.formulas.emplace("psi", inst("psi"));
    subst.agents.emplace("i", agents[rng() % agents.size()]);
    out.emplace_back(name, instantiate_schema(axiom_schema(name), subst));
  }
  return out;
}

}  // namespace detail

// Evaluates every axiom schema of the system, instantiated with random small
// formulas, at every world of a random model per trial. SKYI trials run on
// introspectively completed models. Any false world is a counterexample;
// soundness says there are none.
inline std::vector<FuzzCounterexample> run_fuzz(SystemKind kind, int trials, uint64_t rng_seed,
                                                const FuzzCaps& caps) {
  std::vector<FuzzCounterexample> cexs;
  for (int trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(rng_seed * 0x9e3779b97f4a7c15ULL + static_cast<uint64_t>(trial));
    RandomModelSpec spec;
    spec.world_count = 1 + static_cast<int>(rng() % static_cast<uint64_t>(caps.max_worlds));
    spec.agent_count = 1 + static_cast<int>(rng() % static_cast<uint64_t>(caps.max_agents));
    spec.prop_count = 1 + static_cast<int>(rng() % static_cast<uint64_t>(caps.max_props));
    spec.seed_count = static_cast<int>(rng() % static_cast<uint64_t>(caps.max_seeds + 1));
    spec.lambda_pool = {parse_formula("p1 -> p1"), parse_formula("p1 & p1 -> p1")};
    spec.rng_seed = rng();
    Model m = random_model(spec);

    std::vector<std::string> props;
    for (int p = 0; p < spec.prop_count; ++p) props.push_back("p" + std::to_string(p + 1));
    auto instances =
        detail::axiom_instances(kind, rng, props, m.frame.agents, caps.formula_depth);

    if (kind == SystemKind::skyi) {
      std::vector<Formula> shapes;
      std::set<Formula, FormulaLess> seen;
      for (const auto& [name, f] : instances)
        for (const Formula& sub : subformulas(f))
          if (introspective_shape_agent(sub) && seen.insert(sub).second) shapes.push_back(sub);
      m = introspective_complete(m, shapes);
    }

    for (const auto& [name, f] : instances) {
      Model ext = extend_universe(m, {f});
      std::vector<bool> truth = eval_all(ext, f);
      for (int w = 0; w < ext.frame.world_count(); ++w)
        if (!truth[static_cast<size_t>(w)]) {
          cexs.push_back(FuzzCounterexample{trial, name, f, w, ext});
          break;
        }
    }
  }
  return cexs;
}

inline int cmd_fuzz(const std::string& system, int trials, uint64_t rng_seed, const FuzzCaps& caps,
                    std::ostream& out, std::ostream& err) {
  (void)err;
  if (system != "SKY" && system != "SKYI")
    throw Error("unknown system '" + system + "' (expected SKY or SKYI)");
  if (trials < 1) throw Error("trials must be >= 1");
  SystemKind kind = system == "SKY" ? SystemKind::sky : SystemKind::skyi;
  detail::echo(out, {"fuzz", system, std::to_string(trials), "seed=" + std::to_string(rng_seed)},
               system + std::to_string(trials) + std::to_string(rng_seed));
  std::vector<FuzzCounterexample> cexs = run_fuzz(kind, trials, rng_seed, caps);
  out << "trials: " << trials << "\n";
  for (const FuzzCounterexample& cex : cexs) {
    std::string path = "fuzz-cex-" + system + "-" + std::to_string(rng_seed) + "-" +
                       std::to_string(cex.trial) + ".mod";
    std::ofstream sink(path, std::ios::binary);
    sink << print_model(cex.model);
    out << "counterexample trial=" << cex.trial << " axiom=" << cex.axiom << " world="
        << cex.model.frame.worlds[static_cast<size_t>(cex.world)] << " formula="
        << print_formula(cex.instance) << " model=" << path << "\n";
  }
  out << "counterexamples: " << cexs.size() << "\n";
  return cexs.empty() ? kExitTrue : kExitFalse;
}

// ---------------------------------------------------------------------------
// Entry point

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"model checker and proof checker for the logic of knowing why"};
  app.name("whylog");
  app.require_subcommand(1);

  std::string model_path, world, formula_text, out_path, mode, proof_path, system;
  std::string introspection_list;
  bool jl = false, trace = false, factivity = false;
  int trials = 100;
  uint64_t rng_seed = 1;
  FuzzCaps caps;

  CLI::App* check = app.add_subcommand("check", "evaluate a formula at a world");
  check->add_option("model", model_path)->required();
  check->add_option("world", world)->required();
  check->add_option("formula", formula_text)->required();
  check->add_flag("--jl", jl, "evaluate under the JL semantics of the corresponding JL model");
  check->add_flag("--trace", trace, "print the verdict's explanation");

  CLI::App* validate = app.add_subcommand("validate", "check model well-formedness and properties");
  validate->add_option("model", model_path)->required();
  validate->add_flag("--factivity", factivity, "report factivity violations");
  validate->add_option("--introspection", introspection_list,
                       "comma-separated shaped formulas to check introspection against");

  CLI::App* saturate_cmd = app.add_subcommand("saturate", "print the saturated coverage table");
  saturate_cmd->add_option("model", model_path)->required();

  CLI::App* transform = app.add_subcommand("transform", "write a transformed model");
  transform->add_option("model", model_path)->required();
  transform->add_option("mode", mode, "factive or jl")->required();
  transform->add_option("out", out_path)->required();

  CLI::App* prove = app.add_subcommand("prove", "check a Hilbert-style proof");
  prove->add_option("proof", proof_path)->required();

  CLI::App* fuzz = app.add_subcommand("fuzz", "soundness-fuzz a system's axioms");
  fuzz->add_option("system", system, "SKY or SKYI")->required();
  fuzz->add_option("trials", trials)->required();
  fuzz->add_option("--rng-seed", rng_seed);
  fuzz->add_option("--max-worlds", caps.max_worlds);
  fuzz->add_option("--max-agents", caps.max_agents);
  fuzz->add_option("--max-props", caps.max_props);
  fuzz->add_option("--max-seeds", caps.max_seeds);
  fuzz->add_option("--depth", caps.formula_depth);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitTrue;
    }
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (check->parsed()) return cmd_check(model_path, world, formula_text, jl, trace, out, err);
    if (validate->parsed())
      return cmd_validate(model_path, factivity, introspection_list, out, err);
    if (saturate_cmd->parsed()) return cmd_saturate(model_path, out, err);
    if (transform->parsed()) return cmd_transform(model_path, mode, out_path, out, err);
    if (prove->parsed()) return cmd_prove(proof_path, out, err);
    if (fuzz->parsed()) return cmd_fuzz(system, trials, rng_seed, caps, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  err << "error: no subcommand\n";
  return kExitError;
}

}  // namespace whylog::cli
