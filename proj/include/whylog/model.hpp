#pragma once

#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "whylog/coverage.hpp"
#include "whylog/error.hpp"
#include "whylog/syntax.hpp"
#include "whylog/term.hpp"
#include "whylog/worldset.hpp"

namespace whylog {

// Worlds, agents, per-agent partitions and the valuation. Worlds are named
// on declaration and addressed by index elsewhere. Shared between plain
// models and JL models.
struct Frame {
  std::vector<std::string> worlds;
  std::vector<std::string> agents;
  std::map<std::string, int> world_index;
  std::map<std::string, int> agent_index;
  std::vector<std::vector<WorldSet>> blocks;  // [agent][block]
  std::vector<std::vector<int>> block_of;     // [agent][world] -> block index
  std::map<std::string, WorldSet> valuation;  // prop -> worlds where true

  int world_count() const { return static_cast<int>(worlds.size()); }
  int agent_count() const { return static_cast<int>(agents.size()); }

  int world_id(const std::string& name) const {
    auto it = world_index.find(name);
    if (it == world_index.end()) throw ValidationError("unknown world '" + name + "'");
    return it->second;
  }

  int agent_id(const std::string& name) const {
    auto it = agent_index.find(name);
    if (it == agent_index.end()) throw ValidationError("unknown agent '" + name + "'");
    return it->second;
  }

  const WorldSet& block(int agent, int world) const {
    return blocks[static_cast<size_t>(agent)]
                 [static_cast<size_t>(block_of[static_cast<size_t>(agent)][static_cast<size_t>(world)])];
  }

  WorldSet prop_set(const std::string& name) const {
    auto it = valuation.find(name);
    if (it != valuation.end()) return it->second;
    return WorldSet(world_count());
  }

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct Model {
  Frame frame;
  std::vector<Formula> lambda;  // sorted, unique
  std::vector<Seed> seeds;      // declaration order
  std::vector<Formula> universe;
  CoverageTable coverage;       // == saturate(seeds, lambda, |W|, universe)
};

inline bool operator==(const Model& a, const Model& b) {
  auto seeds_eq = [](const std::vector<Seed>& x, const std::vector<Seed>& y) {
    if (x.size() != y.size()) return false;
    for (size_t k = 0; k < x.size(); ++k)
      if (!(x[k].witness == y[k].witness) || !(x[k].formula == y[k].formula) ||
          !(x[k].worlds == y[k].worlds))
        return false;
    return true;
  };
  return a.frame == b.frame && a.lambda == b.lambda && seeds_eq(a.seeds, b.seeds) &&
         a.universe == b.universe && a.coverage == b.coverage;
}

// The unique partition block of `agent` containing `world`.
inline const WorldSet& equivalence_class(const Model& m, int agent, int world) {
  return m.frame.block(agent, world);
}

inline const WorldSet& equivalence_class(const Model& m, const std::string& agent,
                                         const std::string& world) {
  return m.frame.block(m.frame.agent_id(agent), m.frame.world_id(world));
}

// ---------------------------------------------------------------------------
// Universe construction

// Subformula closure of the roots, in post-order of first occurrence, then
// closed under antecedent/consequent extraction for desugared implications
// (a no-op after subformula closure, kept as a guard).
inline std::vector<Formula> build_universe(const std::vector<Formula>& roots) {
  std::set<Formula, FormulaLess> seen;
  std::vector<Formula> out;
  for (const Formula& r : roots) detail::subformulas_walk(r, seen, out);
  for (size_t k = 0; k < out.size(); ++k) {
    Formula lhs = out[k], rhs = out[k];
    if (!is_implication(out[k], &lhs, &rhs)) continue;
    if (seen.insert(lhs).second) out.push_back(lhs);
    if (seen.insert(rhs).second) out.push_back(rhs);
  }
  return out;
}

inline std::vector<Formula> build_universe(const Model& m, const std::vector<Formula>& extra) {
  std::vector<Formula> roots = m.universe;
  for (const Formula& f : extra) roots.push_back(f);
  return build_universe(roots);
}

// ---------------------------------------------------------------------------
// Construction and validation

// Validates the parts, builds the universe (seeds + lambda + extras, closed
// under subformulas) and saturates the coverage table.
inline Model make_model(Frame frame, std::vector<Formula> lambda, std::vector<Seed> seeds,
                        const std::vector<Formula>& extra_universe = {}) {
  if (frame.worlds.empty()) throw ValidationError("model needs at least one world");
  if (frame.agents.empty()) throw ValidationError("model needs at least one agent");
  if (frame.valuation.count(kTopProp))
    throw ValidationError(std::string("proposition '") + kTopProp + "' is reserved");
  frame.block_of.assign(frame.agents.size(), {});
  for (int a = 0; a < frame.agent_count(); ++a) {
    WorldSet covered(frame.world_count());
    auto& bo = frame.block_of[static_cast<size_t>(a)];
    bo.assign(static_cast<size_t>(frame.world_count()), -1);
    for (size_t k = 0; k < frame.blocks[static_cast<size_t>(a)].size(); ++k) {
      const WorldSet& b = frame.blocks[static_cast<size_t>(a)][k];
      if (b.empty()) throw ValidationError("empty partition block for agent " + frame.agents[a]);
      if (!b.intersect(covered).empty())
        throw ValidationError("overlapping partition blocks for agent " + frame.agents[a]);
      covered = covered.unite(b);
      for (int w : b.members()) bo[static_cast<size_t>(w)] = static_cast<int>(k);
    }
    if (covered != WorldSet::all(frame.world_count()))
      throw ValidationError("partition for agent " + frame.agents[a] + " does not cover all worlds");
  }

  std::sort(lambda.begin(), lambda.end(), FormulaLess{});
  lambda.erase(std::unique(lambda.begin(), lambda.end()), lambda.end());
  for (const Formula& l : lambda)
    if (!is_propositional_tautology(l))
      throw ValidationError("lambda member is not a propositional tautology: " + print_formula(l));

  std::vector<Formula> roots;
  for (const Seed& sd : seeds) roots.push_back(sd.formula);
  for (const Formula& l : lambda) roots.push_back(l);
  for (const Formula& f : extra_universe) roots.push_back(f);
  std::vector<Formula> universe = build_universe(roots);

  for (const Seed& sd : seeds) {
    if (sd.worlds.universe_size() != frame.world_count())
      throw ValidationError("seed world-set does not match the model's worlds");
    if (sd.worlds.empty()) throw ValidationError("seed with empty world-set");
  }

  CoverageTable coverage = saturate(seeds, lambda, frame.world_count(), universe);
  return Model{std::move(frame), std::move(lambda), std::move(seeds), std::move(universe),
               std::move(coverage)};
}

// Grows the model universe to cover `extra` and re-saturates. Growing the
// universe never adds or changes entries on old formulas, so evaluation
// results on them are unaffected.
inline Model extend_universe(const Model& m, const std::vector<Formula>& extra) {
  std::vector<Formula> universe = build_universe(m, extra);
  if (universe.size() == m.universe.size()) return m;
  Model out = m;
  out.coverage = saturate(m.seeds, m.lambda, m.frame.world_count(), universe);
  out.universe = std::move(universe);
  return out;
}

// ---------------------------------------------------------------------------
// Model files

namespace detail {

inline void check_name(const std::string& name, int line, const char* what) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0])))
    throw ParseError(line, 1, std::string(what) + " name must start with a letter: '" + name + "'");
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
      throw ParseError(line, 1, std::string(what) + " name has invalid character: '" + name + "'");
  if (is_reserved_word(name))
    throw ParseError(line, 1, "'" + name + "' is reserved and cannot name a " + what);
}

struct ModelFileParts {
  Frame frame;
  std::vector<Formula> lambda;
  std::vector<Seed> seeds;                                  // plain `seed` lines
  std::vector<std::pair<std::string, Seed>> agent_seeds;    // `seed[i]` lines
  bool saw_agent_seeds = false;
  bool saw_plain_seeds = false;
};

// Line-oriented reader shared by the plain and JL model formats.
inline ModelFileParts read_model_file(const std::string& text, std::vector<std::string>* warnings) {
  ModelFileParts parts;
  Frame& frame = parts.frame;
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

  bool in_model = false, done = false;
  bool have_worlds = false, have_agents = false;
  std::map<std::string, int> partition_seen;  // agent -> defining line
  // per-agent union-find for the optional `edges` form
  std::map<std::string, std::vector<int>> edge_parent;

  for (size_t ln = 0; ln < lines.size(); ++ln) {
    int line_no = static_cast<int>(ln) + 1;
    std::string line = trim(lines[ln]);
    if (line.empty()) continue;
    if (!in_model) {
      if (line != "model") throw ParseError(line_no, 1, "expected 'model'");
      in_model = true;
      continue;
    }
    if (done) throw ParseError(line_no, 1, "content after 'end'");
    if (line == "end") {
      done = true;
      continue;
    }

    size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError(line_no, 1, "expected '<keyword>: ...' line");
    std::string head = trim(line.substr(0, colon));
    std::string rest = trim(line.substr(colon + 1));
    std::vector<std::string> head_words = split_ws(head);
    if (head_words.empty()) throw ParseError(line_no, 1, "missing keyword");
    const std::string& kw = head_words[0];

    if (kw == "worlds") {
      if (have_worlds) throw ParseError(line_no, 1, "duplicate 'worlds' line");
      for (const std::string& w : split_ws(rest)) {
        check_name(w, line_no, "world");
        if (!frame.world_index.emplace(w, frame.world_count()).second)
          throw ParseError(line_no, 1, "duplicate world '" + w + "'");
        frame.worlds.push_back(w);
      }
      if (frame.worlds.empty()) throw ParseError(line_no, 1, "empty 'worlds' line");
      have_worlds = true;
    } else if (kw == "agents") {
      if (have_agents) throw ParseError(line_no, 1, "duplicate 'agents' line");
      for (const std::string& a : split_ws(rest)) {
        check_name(a, line_no, "agent");
        if (!frame.agent_index.emplace(a, frame.agent_count()).second)
          throw ParseError(line_no, 1, "duplicate agent '" + a + "'");
        frame.agents.push_back(a);
      }
      if (frame.agents.empty()) throw ParseError(line_no, 1, "empty 'agents' line");
      have_agents = true;
      frame.blocks.resize(frame.agents.size());
      frame.block_of.resize(frame.agents.size());
    } else if (kw == "partition" || kw == "edges") {
      if (!have_worlds || !have_agents)
        throw ParseError(line_no, 1, "'" + kw + "' before 'worlds'/'agents'");
      if (head_words.size() != 2) throw ParseError(line_no, 1, "expected '" + kw + " <agent>:'");
      const std::string& agent = head_words[1];
      if (!frame.agent_index.count(agent))
        throw ParseError(line_no, 1, "unknown agent '" + agent + "'");
      if (!partition_seen.emplace(agent, line_no).second)
        throw ParseError(line_no, 1, "second partition/edges line for agent '" + agent + "'");
      int a = frame.agent_index[agent];
      if (kw == "partition") {
        std::vector<WorldSet> blocks;
        size_t i = 0;
        while (i < rest.size()) {
          while (i < rest.size() && std::isspace(static_cast<unsigned char>(rest[i]))) ++i;
          if (i >= rest.size()) break;
          if (rest[i] != '{') throw ParseError(line_no, 1, "expected '{' in partition");
          size_t close = rest.find('}', i);
          if (close == std::string::npos) throw ParseError(line_no, 1, "unclosed '{' in partition");
          WorldSet block(frame.world_count());
          for (const std::string& w : split_ws(rest.substr(i + 1, close - i - 1))) {
            if (!frame.world_index.count(w))
              throw ParseError(line_no, 1, "unknown world '" + w + "' in partition");
            block.add(frame.world_index[w]);
          }
          if (block.empty()) throw ParseError(line_no, 1, "empty partition block");
          blocks.push_back(block);
          i = close + 1;
        }
        if (blocks.empty()) throw ParseError(line_no, 1, "empty partition");
        frame.blocks[static_cast<size_t>(a)] = std::move(blocks);
      } else {
        // edges w1-w2 w2-w3: closed reflexively/symmetrically/transitively
        std::vector<int> parent(static_cast<size_t>(frame.world_count()));
        for (size_t k = 0; k < parent.size(); ++k) parent[k] = static_cast<int>(k);
        std::function<int(int)> find = [&](int x) {
          while (parent[static_cast<size_t>(x)] != x) x = parent[static_cast<size_t>(x)];
          return x;
        };
        for (const std::string& pair : split_ws(rest)) {
          size_t dash = pair.find('-');
          if (dash == std::string::npos)
            throw ParseError(line_no, 1, "expected 'w1-w2' pairs in edges");
          std::string wa = pair.substr(0, dash), wb = pair.substr(dash + 1);
          if (!frame.world_index.count(wa))
            throw ParseError(line_no, 1, "unknown world '" + wa + "' in edges");
          if (!frame.world_index.count(wb))
            throw ParseError(line_no, 1, "unknown world '" + wb + "' in edges");
          int ra = find(frame.world_index[wa]), rb = find(frame.world_index[wb]);
          if (ra != rb) parent[static_cast<size_t>(std::max(ra, rb))] = std::min(ra, rb);
        }
        std::map<int, WorldSet> classes;
        for (int w = 0; w < frame.world_count(); ++w) {
          auto [it, fresh] = classes.emplace(find(w), WorldSet(frame.world_count()));
          (void)fresh;
          it->second.add(w);
        }
        std::vector<WorldSet> blocks;
        for (auto& [root, set] : classes) blocks.push_back(set);
        frame.blocks[static_cast<size_t>(a)] = std::move(blocks);
        if (warnings)
          warnings->push_back("agent " + agent +
                              ": edges closed to an equivalence relation (line " +
                              std::to_string(line_no) + ")");
      }
      // block lookup
      auto& bo = frame.block_of[static_cast<size_t>(a)];
      bo.assign(static_cast<size_t>(frame.world_count()), -1);
      for (size_t b = 0; b < frame.blocks[static_cast<size_t>(a)].size(); ++b)
        for (int w : frame.blocks[static_cast<size_t>(a)][b].members())
          bo[static_cast<size_t>(w)] = static_cast<int>(b);
    } else if (kw == "val") {
      if (!have_worlds) throw ParseError(line_no, 1, "'val' before 'worlds'");
      if (head_words.size() != 2) throw ParseError(line_no, 1, "expected 'val <prop>:'");
      const std::string& prop = head_words[1];
      check_name(prop, line_no, "proposition");
      if (prop == kTopProp)
        throw ParseError(line_no, 1, std::string("proposition '") + kTopProp + "' is reserved");
      auto [it, fresh] = frame.valuation.emplace(prop, WorldSet(frame.world_count()));
      (void)fresh;
      for (const std::string& w : split_ws(rest)) {
        if (!frame.world_index.count(w))
          throw ParseError(line_no, 1, "unknown world '" + w + "' in val");
        it->second.add(frame.world_index[w]);
      }
    } else if (kw == "lambda") {
      parts.lambda.push_back(parse_formula(rest, line_no - 1));
    } else if (kw == "seed" || (kw.rfind("seed[", 0) == 0 && kw.back() == ']')) {
      if (!have_worlds) throw ParseError(line_no, 1, "'seed' before 'worlds'");
      std::string agent;
      if (kw != "seed") {
        agent = kw.substr(5, kw.size() - 6);
        if (!frame.agent_index.count(agent))
          throw ParseError(line_no, 1, "unknown agent '" + agent + "' in seed");
        parts.saw_agent_seeds = true;
      } else {
        parts.saw_plain_seeds = true;
      }
      // head = "seed <term>" (term may contain spaces), rest = "<formula> @ <worlds>"
      std::string term_text = trim(head.substr(kw.size()));
      if (term_text.empty()) throw ParseError(line_no, 1, "missing term in seed");
      Term witness = parse_term(term_text, line_no - 1);
      size_t at = rest.find('@');
      if (at == std::string::npos) throw ParseError(line_no, 1, "missing '@' in seed");
      Formula formula = parse_formula(trim(rest.substr(0, at)), line_no - 1);
      WorldSet worlds(frame.world_count());
      for (const std::string& w : split_ws(rest.substr(at + 1))) {
        if (!frame.world_index.count(w))
          throw ParseError(line_no, 1, "unknown world '" + w + "' in seed");
        worlds.add(frame.world_index[w]);
      }
      if (worlds.empty()) throw ParseError(line_no, 1, "seed with no worlds");
      Seed sd{witness, formula, worlds};
      if (agent.empty())
        parts.seeds.push_back(sd);
      else
        parts.agent_seeds.emplace_back(agent, sd);
    } else {
      throw ParseError(line_no, 1, "unknown keyword '" + kw + "'");
    }
  }
  if (!in_model) throw ParseError(1, 1, "expected 'model'");
  if (!done) throw ParseError(static_cast<int>(lines.size()), 1, "missing 'end'");
  if (!have_worlds) throw ParseError(1, 1, "missing 'worlds' line");
  if (!have_agents) throw ParseError(1, 1, "missing 'agents' line");
  for (const std::string& a : frame.agents)
    if (!partition_seen.count(a))
      throw ValidationError("agent " + a + " has no partition/edges line");
  return parts;
}

}  // namespace detail

inline Model load_model(const std::string& text, std::vector<std::string>* warnings = nullptr) {
  detail::ModelFileParts parts = detail::read_model_file(text, warnings);
  if (parts.saw_agent_seeds)
    throw ValidationError("per-agent seed[..] lines belong to the JL model format");
  return make_model(std::move(parts.frame), std::move(parts.lambda), std::move(parts.seeds));
}

namespace detail {

inline std::string world_list(const Frame& frame, const WorldSet& set) {
  std::string out;
  for (int w : set.members()) {
    if (!out.empty()) out += " ";
    out += frame.worlds[static_cast<size_t>(w)];
  }
  return out;
}

inline void print_frame(std::ostringstream& out, const Frame& frame) {
  out << "model\n";
  out << "  worlds:";
  for (const std::string& w : frame.worlds) out << " " << w;
  out << "\n  agents:";
  for (const std::string& a : frame.agents) out << " " << a;
  out << "\n";
  for (int a = 0; a < frame.agent_count(); ++a) {
    out << "  partition " << frame.agents[a] << ":";
    for (const WorldSet& b : frame.blocks[static_cast<size_t>(a)])
      out << " {" << world_list(frame, b) << "}";
    out << "\n";
  }
  for (const auto& [prop, set] : frame.valuation)
    out << "  val " << prop << ": " << world_list(frame, set) << "\n";
}

}  // namespace detail

// Canonical text form; load_model(print_model(m)) == m.
inline std::string print_model(const Model& m) {
  std::ostringstream out;
  detail::print_frame(out, m.frame);
  for (const Formula& l : m.lambda) out << "  lambda: " << print_formula(l) << "\n";
  for (const Seed& sd : m.seeds)
    out << "  seed " << print_term(sd.witness) << " : " << print_formula(sd.formula) << " @ "
        << detail::world_list(m.frame, sd.worlds) << "\n";
  out << "end\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Random generation (fuzz harness)

struct RandomModelSpec {
  int world_count = 1;
  int agent_count = 1;
  int prop_count = 1;
  int seed_count = 0;
  std::vector<Formula> lambda_pool;
  uint64_t rng_seed = 0;
};

namespace detail {

// Uniform random set partition via restricted-growth strings: T(m, k) counts
// the RGS suffixes of length m when k blocks are in use.
inline std::vector<int> random_partition_rgs(std::mt19937_64& rng, int n) {
  if (n > 24) throw ValidationError("random partitions support at most 24 worlds");
  std::vector<std::vector<uint64_t>> T(static_cast<size_t>(n + 1),
                                       std::vector<uint64_t>(static_cast<size_t>(n + 2), 0));
  for (int k = 0; k <= n + 1; ++k) T[0][static_cast<size_t>(k)] = 1;
  for (int m = 1; m <= n; ++m)
    for (int k = 0; k <= n; ++k)
      T[static_cast<size_t>(m)][static_cast<size_t>(k)] =
          static_cast<uint64_t>(k) * T[static_cast<size_t>(m - 1)][static_cast<size_t>(k)] +
          T[static_cast<size_t>(m - 1)][static_cast<size_t>(k + 1)];
  std::vector<int> rgs(static_cast<size_t>(n));
  int used = 0;
  for (int pos = 0; pos < n; ++pos) {
    int remaining = n - pos - 1;
    uint64_t total = T[static_cast<size_t>(remaining + 1)][static_cast<size_t>(used)];
    uint64_t pick = std::uniform_int_distribution<uint64_t>(0, total - 1)(rng);
    int choice = -1;
    for (int b = 0; b < used; ++b) {
      uint64_t weight = T[static_cast<size_t>(remaining)][static_cast<size_t>(used)];
      if (pick < weight) {
        choice = b;
        break;
      }
      pick -= weight;
    }
    if (choice < 0) choice = used++;
    rgs[static_cast<size_t>(pos)] = choice;
  }
  return rgs;
}

inline WorldSet random_nonempty_subset(std::mt19937_64& rng, int n) {
  WorldSet set(n);
  do {
    set = WorldSet(n);
    for (int w = 0; w < n; ++w)
      if (rng() & 1) set.add(w);
  } while (set.empty());
  return set;
}

}  // namespace detail

// Random formula over the given props/agents with AST depth <= depth.
// Conditional Ky is included only when allow_cond is set.
inline Formula random_formula(std::mt19937_64& rng, const std::vector<std::string>& props,
                              const std::vector<std::string>& agents, int depth,
                              bool allow_cond = false) {
  auto pick = [&rng](size_t n) {
    return std::uniform_int_distribution<size_t>(0, n - 1)(rng);
  };
  if (depth <= 0 || agents.empty())
    return Formula::prop(props[pick(props.size())]);
  auto sub = [&] { return random_formula(rng, props, agents, depth - 1, allow_cond); };
  int roll = static_cast<int>(pick(allow_cond ? 13 : 12));
  switch (roll) {
    case 0:
    case 1:
    case 2:
      return Formula::prop(props[pick(props.size())]);
    case 3:
    case 4:
      return Formula::lnot(sub());
    case 5:
    case 6: {
      Formula a = sub();  // rng draws sequenced left-to-right
      return Formula::land(a, sub());
    }
    case 7: {
      Formula a = sub();
      return Formula::implies(a, sub());
    }
    case 8: {
      Formula a = sub();
      return Formula::lor(a, sub());
    }
    case 9:
    case 10: {
      Agent a{agents[pick(agents.size())]};
      return Formula::know(a, sub());
    }
    case 11: {
      Agent a{agents[pick(agents.size())]};
      return Formula::know_why(a, sub());
    }
    default: {
      Agent a{agents[pick(agents.size())]};
      Formula cond = sub();
      return Formula::know_why_cond(a, cond, sub());
    }
  }
}

// Deterministic random model: uniform partitions, coin-flip valuation, seeds
// over a small implication-rich formula pool, lambda drawn from the pool.
// Always valid per the load_model checks.
inline Model random_model(const RandomModelSpec& spec) {
  if (spec.world_count < 1 || spec.agent_count < 1 || spec.prop_count < 1 || spec.seed_count < 0)
    throw ValidationError("random_model counts must be positive");
  std::mt19937_64 rng(spec.rng_seed);
  Frame frame;
  for (int w = 0; w < spec.world_count; ++w) {
    frame.worlds.push_back("w" + std::to_string(w + 1));
    frame.world_index.emplace(frame.worlds.back(), w);
  }
  for (int a = 0; a < spec.agent_count; ++a) {
    frame.agents.push_back("a" + std::to_string(a + 1));
    frame.agent_index.emplace(frame.agents.back(), a);
  }
  frame.blocks.resize(frame.agents.size());
  frame.block_of.resize(frame.agents.size());
  for (int a = 0; a < spec.agent_count; ++a) {
    std::vector<int> rgs = detail::random_partition_rgs(rng, spec.world_count);
    int nblocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
    std::vector<WorldSet> blocks(static_cast<size_t>(nblocks), WorldSet(spec.world_count));
    for (int w = 0; w < spec.world_count; ++w) blocks[static_cast<size_t>(rgs[static_cast<size_t>(w)])].add(w);
    frame.blocks[static_cast<size_t>(a)] = std::move(blocks);
    auto& bo = frame.block_of[static_cast<size_t>(a)];
    bo.assign(static_cast<size_t>(spec.world_count), -1);
    for (int w = 0; w < spec.world_count; ++w) bo[static_cast<size_t>(w)] = rgs[static_cast<size_t>(w)];
  }
  std::vector<std::string> props;
  for (int p = 0; p < spec.prop_count; ++p) {
    props.push_back("p" + std::to_string(p + 1));
    WorldSet set(spec.world_count);
    for (int w = 0; w < spec.world_count; ++w)
      if (rng() & 1) set.add(w);
    frame.valuation.emplace(props.back(), set);
  }

  std::vector<Formula> lambda;
  for (const Formula& l : spec.lambda_pool)
    if (rng() & 1) lambda.push_back(l);

  // seeded formulas: propositional with implications, occasionally modal
  std::vector<Seed> seeds;
  for (int s = 0; s < spec.seed_count; ++s) {
    Formula f = Formula::prop(props[0]);
    switch (rng() % 5) {
      case 0:
        f = Formula::prop(props[rng() % props.size()]);
        break;
      case 1:
        f = Formula::implies(Formula::prop(props[rng() % props.size()]),
                             Formula::prop(props[rng() % props.size()]));
        break;
      case 2:
        f = random_formula(rng, props, {}, 0);
        f = Formula::implies(random_formula(rng, props, frame.agents, 1), f);
        break;
      case 3:
        f = random_formula(rng, props, frame.agents, 2);
        break;
      default:
        f = Formula::lnot(Formula::prop(props[rng() % props.size()]));
        break;
    }
    seeds.push_back(Seed{Term::base("t" + std::to_string(s + 1)), f,
                         detail::random_nonempty_subset(rng, spec.world_count)});
  }
  return make_model(std::move(frame), std::move(lambda), std::move(seeds));
}

}  // namespace whylog
