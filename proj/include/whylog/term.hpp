#pragma once

#include <cassert>
#include <memory>
#include <string>
#include <utility>

#include "whylog/error.hpp"
#include "whylog/lexer.hpp"

namespace whylog {

// Explanation term: the self-evident constant `e`, a named base term, or an
// application (s . t) combining two terms.
class Term {
 public:
  enum class Kind { self_evident, base, app };

  static Term self_evident() { return Term(make(Kind::self_evident, "e", nullptr, nullptr)); }

  static Term base(std::string name) {
    assert(!name.empty());
    return Term(make(Kind::base, std::move(name), nullptr, nullptr));
  }

  static Term app(Term lhs, Term rhs) {
    return Term(make(Kind::app, "", lhs.node_, rhs.node_));
  }

  Kind kind() const { return node_->kind; }

  const std::string& name() const {
    assert(kind() != Kind::app);
    return node_->name;
  }

  Term left() const {
    assert(kind() == Kind::app);
    return Term(node_->l);
  }

  Term right() const {
    assert(kind() == Kind::app);
    return Term(node_->r);
  }

  // Node count; applications strictly increase it.
  int size() const { return node_->size; }

  friend bool operator==(const Term& a, const Term& b) { return term_compare(a, b) == 0; }

  // Total order: size first, then e < base < app, then names/children.
  // "Smaller" means a shorter (and tie-broken) witness.
  friend int term_compare(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return 0;
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    int ka = static_cast<int>(a.kind()), kb = static_cast<int>(b.kind());
    if (ka != kb) return ka < kb ? -1 : 1;
    switch (a.kind()) {
      case Kind::self_evident:
        return 0;
      case Kind::base:
        return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
      case Kind::app: {
        int c = term_compare(a.left(), b.left());
        if (c != 0) return c;
        return term_compare(a.right(), b.right());
      }
    }
    return 0;
  }

  friend bool operator<(const Term& a, const Term& b) { return term_compare(a, b) < 0; }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::shared_ptr<const Node> l, r;
    int size;
  };

  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static std::shared_ptr<const Node> make(Kind kind, std::string name,
                                          std::shared_ptr<const Node> l,
                                          std::shared_ptr<const Node> r) {
    int size = 1;
    if (l) size += l->size;
    if (r) size += r->size;
    return std::make_shared<const Node>(Node{kind, std::move(name), std::move(l), std::move(r), size});
  }

  std::shared_ptr<const Node> node_;
};

struct TermLess {
  bool operator()(const Term& a, const Term& b) const { return term_compare(a, b) < 0; }
};

// Applications are always fully parenthesized: (s . t).
inline std::string print_term(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::self_evident: return "e";
    case Term::Kind::base: return t.name();
    case Term::Kind::app: return "(" + print_term(t.left()) + " . " + print_term(t.right()) + ")";
  }
  return "";
}

namespace detail {

inline Term parse_term_at(Lexer& lx) {
  const Token& t = lx.peek();
  switch (t.type) {
    case Token::Type::ident: {
      lx.next();
      if (t.text == "e") return Term::self_evident();
      return Term::base(t.text);
    }
    case Token::Type::lparen: {
      lx.next();
      Term lhs = parse_term_at(lx);
      lx.expect(Token::Type::dot);
      Term rhs = parse_term_at(lx);
      lx.expect(Token::Type::rparen);
      return Term::app(lhs, rhs);
    }
    default:
      throw ParseError(t.line, t.col,
                       "expected term (one of 'e', identifier, '('), got " + Lexer::describe(t));
  }
}

}  // namespace detail

inline Term parse_term(const std::string& text, int line_offset = 0) {
  detail::Lexer lx(text, line_offset);
  Term t = detail::parse_term_at(lx);
  lx.expect(detail::Token::Type::eof);
  return t;
}

}  // namespace whylog
