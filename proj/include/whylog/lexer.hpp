#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "whylog/error.hpp"

namespace whylog::detail {

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

struct Token {
  enum class Type {
    ident,
    word,  // digit-initiated token such as a proof-line citation or axiom name
    tilde,
    amp,
    pipe,
    arrow,
    lparen,
    rparen,
    lbracket,
    rbracket,
    comma,
    dot,
    eof,
  };

  Type type;
  std::string text;
  int line;
  int col;
  size_t offset;  // byte offset of the token start in the source text
};

inline const char* token_name(Token::Type t) {
  switch (t) {
    case Token::Type::ident: return "identifier";
    case Token::Type::word: return "word";
    case Token::Type::tilde: return "'~'";
    case Token::Type::amp: return "'&'";
    case Token::Type::pipe: return "'|'";
    case Token::Type::arrow: return "'->'";
    case Token::Type::lparen: return "'('";
    case Token::Type::rparen: return "')'";
    case Token::Type::lbracket: return "'['";
    case Token::Type::rbracket: return "']'";
    case Token::Type::comma: return "','";
    case Token::Type::dot: return "'.'";
    case Token::Type::eof: return "end of input";
  }
  return "?";
}

// Tokenizer shared by the formula and term grammars. Tracks line/column for
// error reporting; callers embedding fragments in files shift the line.
class Lexer {
 public:
  explicit Lexer(const std::string& text, int line_offset = 0) {
    int line = 1 + line_offset, col = 1;
    size_t i = 0;
    auto push = [&](Token::Type type, const std::string& s, size_t off) {
      tokens_.push_back(Token{type, s, line, col, off});
      col += static_cast<int>(s.size());
    };
    while (i < text.size()) {
      char c = text[i];
      if (c == '\n') {
        ++line;
        col = 1;
        ++i;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++col;
        ++i;
        continue;
      }
      if (std::isalnum(static_cast<unsigned char>(c))) {
        size_t j = i;
        while (j < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
          ++j;
        bool leading_digit = std::isdigit(static_cast<unsigned char>(c));
        push(leading_digit ? Token::Type::word : Token::Type::ident, text.substr(i, j - i), i);
        i = j;
        continue;
      }
      if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
        push(Token::Type::arrow, "->", i);
        i += 2;
        continue;
      }
      Token::Type type;
      switch (c) {
        case '~': type = Token::Type::tilde; break;
        case '&': type = Token::Type::amp; break;
        case '|': type = Token::Type::pipe; break;
        case '(': type = Token::Type::lparen; break;
        case ')': type = Token::Type::rparen; break;
        case '[': type = Token::Type::lbracket; break;
        case ']': type = Token::Type::rbracket; break;
        case ',': type = Token::Type::comma; break;
        case '.': type = Token::Type::dot; break;
        default:
          throw ParseError(line, col, std::string("unexpected character '") + c + "'");
      }
      push(type, std::string(1, c), i);
      ++i;
    }
    tokens_.push_back(Token{Token::Type::eof, "", line, col, text.size()});
  }

  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }
  void back() { --pos_; }

  const Token& expect(Token::Type type) {
    const Token& t = peek();
    if (t.type != type)
      throw ParseError(t.line, t.col,
                       std::string("expected ") + token_name(type) + ", got " +
                           describe(t));
    return next();
  }

  static std::string describe(const Token& t) {
    if (t.type == Token::Type::ident || t.type == Token::Type::word) return "'" + t.text + "'";
    return token_name(t.type);
  }

 private:
  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

}  // namespace whylog::detail
