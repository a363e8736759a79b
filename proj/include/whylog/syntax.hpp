#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "whylog/error.hpp"
#include "whylog/lexer.hpp"

namespace whylog {

// Reserved proposition used to desugar `top`; model files may not declare it.
inline constexpr const char* kTopProp = "p0";

inline bool is_reserved_word(const std::string& s) {
  return s == "K" || s == "Ky" || s == "top" || s == "bot" || s == "e";
}

struct Agent {
  std::string name;

  friend bool operator==(const Agent&, const Agent&) = default;
  friend auto operator<=>(const Agent&, const Agent&) = default;
};

// Immutable formula tree over the core connectives. Derived connectives
// (top, bot, ->, |) are parser sugar that normalizes into these five.
class Formula {
 public:
  enum class Kind { prop, lnot, land, know, know_why, know_why_cond };

  static Formula prop(std::string name) {
    return Formula(make(Kind::prop, std::move(name), nullptr, nullptr));
  }
  static Formula lnot(const Formula& f) { return Formula(make(Kind::lnot, "", f.node_, nullptr)); }
  static Formula land(const Formula& a, const Formula& b) {
    return Formula(make(Kind::land, "", a.node_, b.node_));
  }
  static Formula know(const Agent& i, const Formula& f) {
    return Formula(make(Kind::know, i.name, f.node_, nullptr));
  }
  static Formula know_why(const Agent& i, const Formula& f) {
    return Formula(make(Kind::know_why, i.name, f.node_, nullptr));
  }
  static Formula know_why_cond(const Agent& i, const Formula& cond, const Formula& body) {
    return Formula(make(Kind::know_why_cond, i.name, cond.node_, body.node_));
  }

  // phi -> psi  ==  ~(phi & ~psi)
  static Formula implies(const Formula& a, const Formula& b) { return lnot(land(a, lnot(b))); }
  // phi | psi  ==  ~(~phi & ~psi)
  static Formula lor(const Formula& a, const Formula& b) { return lnot(land(lnot(a), lnot(b))); }
  static Formula top() {
    Formula p = prop(kTopProp);
    return lnot(land(p, lnot(p)));
  }
  static Formula bottom() { return lnot(top()); }

  Kind kind() const { return node_->kind; }

  const std::string& prop_name() const {
    assert(kind() == Kind::prop);
    return node_->text;
  }

  Agent agent() const {
    assert(kind() == Kind::know || kind() == Kind::know_why || kind() == Kind::know_why_cond);
    return Agent{node_->text};
  }

  Formula inner() const {
    assert(kind() == Kind::lnot);
    return Formula(node_->a);
  }

  Formula left() const {
    assert(kind() == Kind::land);
    return Formula(node_->a);
  }

  Formula right() const {
    assert(kind() == Kind::land);
    return Formula(node_->b);
  }

  Formula condition() const {
    assert(kind() == Kind::know_why_cond);
    return Formula(node_->a);
  }

  Formula body() const {
    assert(kind() == Kind::know || kind() == Kind::know_why);
    return Formula(node_->a);
  }

  Formula cond_body() const {
    assert(kind() == Kind::know_why_cond);
    return Formula(node_->b);
  }

  friend int formula_compare(const Formula& x, const Formula& y) {
    if (x.node_ == y.node_) return 0;
    int kx = static_cast<int>(x.kind()), ky = static_cast<int>(y.kind());
    if (kx != ky) return kx < ky ? -1 : 1;
    if (int c = x.node_->text.compare(y.node_->text); c != 0) return c < 0 ? -1 : 1;
    auto cmp_child = [](const std::shared_ptr<const Node>& a,
                        const std::shared_ptr<const Node>& b) -> int {
      if (a == b) return 0;
      if (!a || !b) return a ? 1 : -1;
      return formula_compare(Formula(a), Formula(b));
    };
    if (int c = cmp_child(x.node_->a, y.node_->a); c != 0) return c;
    return cmp_child(x.node_->b, y.node_->b);
  }

  friend bool operator==(const Formula& x, const Formula& y) { return formula_compare(x, y) == 0; }
  friend bool operator<(const Formula& x, const Formula& y) { return formula_compare(x, y) < 0; }

 private:
  struct Node {
    Kind kind;
    std::string text;  // prop name or agent name
    std::shared_ptr<const Node> a, b;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static std::shared_ptr<const Node> make(Kind kind, std::string text,
                                          std::shared_ptr<const Node> a,
                                          std::shared_ptr<const Node> b) {
    return std::make_shared<const Node>(Node{kind, std::move(text), std::move(a), std::move(b)});
  }

  std::shared_ptr<const Node> node_;
};

struct FormulaLess {
  bool operator()(const Formula& a, const Formula& b) const { return formula_compare(a, b) < 0; }
};

// Recognizes the desugared implication pattern ~(lhs & ~rhs).
inline bool is_implication(const Formula& f, Formula* lhs = nullptr, Formula* rhs = nullptr) {
  if (f.kind() != Formula::Kind::lnot) return false;
  Formula conj = f.inner();
  if (conj.kind() != Formula::Kind::land) return false;
  Formula r = conj.right();
  if (r.kind() != Formula::Kind::lnot) return false;
  if (lhs) *lhs = conj.left();
  if (rhs) *rhs = r.inner();
  return true;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class FormulaParser {
 public:
  explicit FormulaParser(Lexer& lx) : lx_(lx) {}

  Formula parse() {
    Formula f = impl();
    return f;
  }

 private:
  Formula impl() {
    Formula a = disj();
    if (lx_.peek().type == Token::Type::arrow) {
      lx_.next();
      return Formula::implies(a, impl());
    }
    return a;
  }

  Formula disj() {
    Formula a = conj();
    while (lx_.peek().type == Token::Type::pipe) {
      lx_.next();
      a = Formula::lor(a, conj());
    }
    return a;
  }

  Formula conj() {
    Formula a = unary();
    while (lx_.peek().type == Token::Type::amp) {
      lx_.next();
      a = Formula::land(a, unary());
    }
    return a;
  }

  Agent bracketed_agent() {
    lx_.expect(Token::Type::lbracket);
    const Token& t = lx_.expect(Token::Type::ident);
    if (is_reserved_word(t.text))
      throw ParseError(t.line, t.col, "'" + t.text + "' is reserved and cannot name an agent");
    Agent i{t.text};
    lx_.expect(Token::Type::rbracket);
    return i;
  }

  Formula unary() {
    const Token& t = lx_.peek();
    switch (t.type) {
      case Token::Type::tilde:
        lx_.next();
        return Formula::lnot(unary());
      case Token::Type::lparen: {
        lx_.next();
        Formula f = impl();
        lx_.expect(Token::Type::rparen);
        return f;
      }
      case Token::Type::ident: {
        lx_.next();
        if (t.text == "K") {
          Agent i = bracketed_agent();  // sequenced before the body parse
          return Formula::know(i, unary());
        }
        if (t.text == "Ky") {
          Agent i = bracketed_agent();
          if (lx_.peek().type == Token::Type::lparen) {
            lx_.next();
            Formula first = impl();
            if (lx_.peek().type == Token::Type::comma) {
              lx_.next();
              Formula second = impl();
              lx_.expect(Token::Type::rparen);
              return Formula::know_why_cond(i, first, second);
            }
            lx_.expect(Token::Type::rparen);
            return Formula::know_why(i, first);
          }
          return Formula::know_why(i, unary());
        }
        if (t.text == "top") return Formula::top();
        if (t.text == "bot") return Formula::bottom();
        if (is_reserved_word(t.text))
          throw ParseError(t.line, t.col,
                           "'" + t.text + "' is reserved and cannot name a proposition");
        return Formula::prop(t.text);
      }
      default:
        throw ParseError(t.line, t.col,
                         "expected formula (one of '~', 'K', 'Ky', 'top', 'bot', identifier, "
                         "'('), got " +
                             Lexer::describe(t));
    }
  }

  Lexer& lx_;
};

}  // namespace detail

inline Formula parse_formula(const std::string& text, int line_offset = 0) {
  detail::Lexer lx(text, line_offset);
  Formula f = detail::FormulaParser(lx).parse();
  lx.expect(detail::Token::Type::eof);
  return f;
}

// Parses a formula from the front of `text`; *end receives the byte offset of
// the first token not consumed. Used where a formula is followed by more input
// on the same line (proof justifications).
inline Formula parse_formula_prefix(const std::string& text, size_t* end, int line_offset = 0) {
  detail::Lexer lx(text, line_offset);
  Formula f = detail::FormulaParser(lx).parse();
  if (end) *end = lx.peek().offset;
  return f;
}

// Comma-separated formulas; commas inside Ky[i](.,.) do not split.
inline std::vector<Formula> parse_formula_list(const std::string& text, int line_offset = 0) {
  detail::Lexer lx(text, line_offset);
  std::vector<Formula> fs;
  fs.push_back(detail::FormulaParser(lx).parse());
  while (lx.peek().type == detail::Token::Type::comma) {
    lx.next();
    fs.push_back(detail::FormulaParser(lx).parse());
  }
  lx.expect(detail::Token::Type::eof);
  return fs;
}

// ---------------------------------------------------------------------------
// Printing

// Canonical text: binary connectives parenthesized, unary chains flat, and the
// implication pattern ~(a & ~b) re-sugared to (a -> b). parse(print(f)) == f.
inline std::string print_formula(const Formula& f) {
  Formula lhs = f, rhs = f;
  if (is_implication(f, &lhs, &rhs))
    return "(" + print_formula(lhs) + " -> " + print_formula(rhs) + ")";
  switch (f.kind()) {
    case Formula::Kind::prop:
      return f.prop_name();
    case Formula::Kind::lnot:
      return "~" + print_formula(f.inner());
    case Formula::Kind::land:
      return "(" + print_formula(f.left()) + " & " + print_formula(f.right()) + ")";
    case Formula::Kind::know:
      return "K[" + f.agent().name + "] " + print_formula(f.body());
    case Formula::Kind::know_why:
      return "Ky[" + f.agent().name + "] " + print_formula(f.body());
    case Formula::Kind::know_why_cond:
      return "Ky[" + f.agent().name + "](" + print_formula(f.condition()) + ", " +
             print_formula(f.cond_body()) + ")";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Subformulas

namespace detail {

inline void subformulas_walk(const Formula& f, std::set<Formula, FormulaLess>& seen,
                             std::vector<Formula>& out) {
  switch (f.kind()) {
    case Formula::Kind::prop:
      break;
    case Formula::Kind::lnot:
      subformulas_walk(f.inner(), seen, out);
      break;
    case Formula::Kind::land:
      subformulas_walk(f.left(), seen, out);
      subformulas_walk(f.right(), seen, out);
      break;
    case Formula::Kind::know:
    case Formula::Kind::know_why:
      subformulas_walk(f.body(), seen, out);
      break;
    case Formula::Kind::know_why_cond:
      subformulas_walk(f.condition(), seen, out);
      subformulas_walk(f.cond_body(), seen, out);
      break;
  }
  if (seen.insert(f).second) out.push_back(f);
}

}  // namespace detail

// All subformulas including f itself, deduplicated, in post-order of first
// occurrence. The order is deterministic and places children before parents.
inline std::vector<Formula> subformulas(const Formula& f) {
  std::set<Formula, FormulaLess> seen;
  std::vector<Formula> out;
  detail::subformulas_walk(f, seen, out);
  return out;
}

// ---------------------------------------------------------------------------
// Modal atomization and the propositional tautology test

// Maximal modal subformulas and propositions become atoms; the skeleton is a
// pure ~/& formula over placeholder propositions a1..aN referring to them.
struct ModalAtomization {
  std::vector<Formula> atoms;
  Formula skeleton;

  // Substitutes each placeholder back; reproduces the original formula.
  Formula reconstruct() const { return substitute(skeleton); }

 private:
  Formula substitute(const Formula& g) const {
    switch (g.kind()) {
      case Formula::Kind::prop: {
        const std::string& n = g.prop_name();
        size_t idx = std::stoul(n.substr(1)) - 1;
        return atoms[idx];
      }
      case Formula::Kind::lnot:
        return Formula::lnot(substitute(g.inner()));
      case Formula::Kind::land:
        return Formula::land(substitute(g.left()), substitute(g.right()));
      default:
        assert(false && "skeleton contains a modal node");
        return g;
    }
  }
};

namespace detail {

inline Formula atomize_walk(const Formula& f, std::map<Formula, int, FormulaLess>& index,
                            std::vector<Formula>& atoms) {
  switch (f.kind()) {
    case Formula::Kind::lnot:
      return Formula::lnot(atomize_walk(f.inner(), index, atoms));
    case Formula::Kind::land: {
      Formula left = atomize_walk(f.left(), index, atoms);  // left-to-right atom numbering
      return Formula::land(left, atomize_walk(f.right(), index, atoms));
    }
    default: {
      auto [it, inserted] = index.emplace(f, static_cast<int>(atoms.size()));
      if (inserted) atoms.push_back(f);
      return Formula::prop("a" + std::to_string(it->second + 1));
    }
  }
}

// Skeletons compiled to index-resolved nodes so the 2^n sweep does no string work.
struct SkelNode {
  enum class Op { atom, lnot, land } op;
  int atom = -1;
  int a = -1, b = -1;  // child slots
};

inline int skeleton_compile(const Formula& g, std::vector<SkelNode>& nodes) {
  switch (g.kind()) {
    case Formula::Kind::prop: {
      int idx = static_cast<int>(std::stoul(g.prop_name().substr(1))) - 1;
      nodes.push_back(SkelNode{SkelNode::Op::atom, idx, -1, -1});
      break;
    }
    case Formula::Kind::lnot: {
      int a = skeleton_compile(g.inner(), nodes);
      nodes.push_back(SkelNode{SkelNode::Op::lnot, -1, a, -1});
      break;
    }
    case Formula::Kind::land: {
      int a = skeleton_compile(g.left(), nodes);
      int b = skeleton_compile(g.right(), nodes);
      nodes.push_back(SkelNode{SkelNode::Op::land, -1, a, b});
      break;
    }
    default:
      assert(false && "skeleton contains a modal node");
  }
  return static_cast<int>(nodes.size()) - 1;
}

inline bool skeleton_eval(const std::vector<SkelNode>& nodes, int at, uint32_t assignment) {
  const SkelNode& n = nodes[at];
  switch (n.op) {
    case SkelNode::Op::atom:
      return (assignment >> n.atom) & 1;
    case SkelNode::Op::lnot:
      return !skeleton_eval(nodes, n.a, assignment);
    case SkelNode::Op::land:
      return skeleton_eval(nodes, n.a, assignment) && skeleton_eval(nodes, n.b, assignment);
  }
  return false;
}

}  // namespace detail

inline ModalAtomization modal_atomize(const Formula& f) {
  std::map<Formula, int, FormulaLess> index;
  std::vector<Formula> atoms;
  Formula skeleton = detail::atomize_walk(f, index, atoms);
  return ModalAtomization{std::move(atoms), skeleton};
}

// True iff the modal-atom skeleton holds under all 2^n assignments.
inline bool is_propositional_tautology(const Formula& f, int atom_cap = 20) {
  ModalAtomization at = modal_atomize(f);
  int n = static_cast<int>(at.atoms.size());
  if (n > atom_cap || n > 31)
    throw ResourceError("tautology check: " + std::to_string(n) + " atoms exceed cap of " +
                        std::to_string(std::min(atom_cap, 31)));
  std::vector<detail::SkelNode> nodes;
  int root = detail::skeleton_compile(at.skeleton, nodes);
  for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask)
    if (!detail::skeleton_eval(nodes, root, static_cast<uint32_t>(mask))) return false;
  return true;
}

}  // namespace whylog
