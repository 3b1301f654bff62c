#pragma once

#include <cctype>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lae/errors.hpp"
#include "lae/grades.hpp"
#include "lae/syntax.hpp"

namespace lae {

namespace detail {

enum class Tok { ident, top, bottom, bang, amp, bar, lparen, rparen, dle, dge, gimp, arrow, iff, end };

inline std::string tok_name(Tok t) {
  switch (t) {
    case Tok::ident: return "variable";
    case Tok::top: return "'T'";
    case Tok::bottom: return "'_|_'";
    case Tok::bang: return "'!'";
    case Tok::amp: return "'&'";
    case Tok::bar: return "'|'";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::dle: return "'dle'";
    case Tok::dge: return "'dge'";
    case Tok::gimp: return "'=>{c}'";
    case Tok::arrow: return "'->'";
    case Tok::iff: return "'<->'";
    case Tok::end: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline std::vector<Token> tokenize(std::string_view src, std::size_t first_line) {
  std::vector<Token> out;
  std::size_t line = first_line;
  std::size_t col = 1;
  std::size_t i = 0;
  auto fail = [&](const std::string& msg) { throw ParseError(line, col, {}, msg); };
  while (i < src.size()) {
    const char ch = src[i];
    if (ch == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      ++col;
      continue;
    }
    if (ch == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    const std::size_t start_col = col;
    auto emit = [&](Tok k, std::size_t len, std::string text = {}) {
      out.push_back(Token{k, std::move(text), line, start_col});
      i += len;
      col += len;
    };
    auto rest = src.substr(i);
    if (rest.starts_with("_|_")) {
      emit(Tok::bottom, 3);
    } else if (rest.starts_with("<->")) {
      emit(Tok::iff, 3);
    } else if (rest.starts_with("->")) {
      emit(Tok::arrow, 2);
    } else if (rest.starts_with("=>")) {
      std::size_t j = 2;
      while (j < rest.size() && (rest[j] == ' ' || rest[j] == '\t')) ++j;
      if (j >= rest.size() || rest[j] != '{') fail("expected '{' after '=>'");
      const std::size_t close = rest.find('}', j);
      if (close == std::string_view::npos) fail("unterminated grade in '=>{'");
      std::string grade;
      for (char g : rest.substr(j + 1, close - j - 1))
        if (!std::isspace(static_cast<unsigned char>(g))) grade += g;
      if (grade.empty()) fail("empty grade in '=>{}'");
      emit(Tok::gimp, close + 1, grade);
    } else if (ch == '!') {
      emit(Tok::bang, 1);
    } else if (ch == '&') {
      emit(Tok::amp, 1);
    } else if (ch == '|') {
      emit(Tok::bar, 1);
    } else if (ch == '(') {
      emit(Tok::lparen, 1);
    } else if (ch == ')') {
      emit(Tok::rparen, 1);
    } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = 0;
      while (j < rest.size() && (std::isalnum(static_cast<unsigned char>(rest[j])) || rest[j] == '_' ||
                                 rest[j] == '\''))
        ++j;
      std::string word(rest.substr(0, j));
      if (word == "T")
        emit(Tok::top, j);
      else if (word == "dle")
        emit(Tok::dle, j);
      else if (word == "dge")
        emit(Tok::dge, j);
      else
        emit(Tok::ident, j, word);
    } else {
      fail(std::string("unexpected character '") + ch + "'");
    }
  }
  out.push_back(Token{Tok::end, {}, line, col});
  return out;
}

/// Backtracking recursive descent over the two-level grammar. Soft failures return
/// nullopt and record the furthest position reached; sort, variant and grade errors throw.
class Parser {
 public:
  Parser(std::vector<Token> toks, const Signature& sig, const GradeScale& scale, Logic logic)
      : toks_(std::move(toks)), sig_(sig), scale_(scale), logic_(logic) {}

  bool has_gimp() const {
    for (const auto& t : toks_)
      if (t.kind == Tok::gimp) return true;
    return false;
  }

  OuterFormula whole_formula() {
    pos_ = 0;
    auto f = outer_iff();
    if (f && peek() == Tok::end) return *f;
    if (f) expect(Tok::end);
    throw error();
  }

  BasicExpr whole_basic() {
    pos_ = 0;
    auto e = basic_or();
    if (e && peek() == Tok::end) return *e;
    if (e) expect(Tok::end);
    throw error();
  }

 private:
  Tok peek() const { return toks_[pos_].kind; }

  bool accept(Tok k) {
    if (peek() == k) {
      ++pos_;
      return true;
    }
    expect(k);
    return false;
  }

  void expect(Tok k) {
    if (pos_ > far_) {
      far_ = pos_;
      expected_.clear();
    }
    if (pos_ == far_) expected_.insert(tok_name(k));
  }

  ParseError error() const {
    const Token& t = toks_[far_];
    std::string found = t.kind == Tok::ident ? "'" + t.text + "'" : tok_name(t.kind);
    return ParseError(t.line, t.column, {expected_.begin(), expected_.end()}, "unexpected " + found);
  }

  // outer level

  std::optional<OuterFormula> outer_iff() {
    auto lhs = outer_imp();
    if (!lhs) return std::nullopt;
    while (accept(Tok::iff)) {
      auto rhs = outer_imp();
      if (!rhs) return std::nullopt;
      lhs = fx::iff(*lhs, *rhs);
    }
    return lhs;
  }

  std::optional<OuterFormula> outer_imp() {
    auto lhs = outer_or();
    if (!lhs) return std::nullopt;
    if (accept(Tok::arrow)) {
      auto rhs = outer_imp();
      if (!rhs) return std::nullopt;
      return fx::imp(*lhs, *rhs);
    }
    return lhs;
  }

  std::optional<OuterFormula> outer_or() {
    auto lhs = outer_and();
    if (!lhs) return std::nullopt;
    while (accept(Tok::bar)) {
      auto rhs = outer_and();
      if (!rhs) return std::nullopt;
      lhs = fx::disj(*lhs, *rhs);
    }
    return lhs;
  }

  std::optional<OuterFormula> outer_and() {
    auto lhs = outer_unary();
    if (!lhs) return std::nullopt;
    while (accept(Tok::amp)) {
      auto rhs = outer_unary();
      if (!rhs) return std::nullopt;
      lhs = fx::conj(*lhs, *rhs);
    }
    return lhs;
  }

  std::optional<OuterFormula> outer_unary() {
    const std::size_t start = pos_;
    if (auto g = gimp()) return fx::atom(*g);
    pos_ = start;
    if (accept(Tok::bang)) {
      auto f = outer_unary();
      if (!f) return std::nullopt;
      return fx::neg(*f);
    }
    if (accept(Tok::lparen)) {
      auto f = outer_iff();
      if (!f || !accept(Tok::rparen)) return std::nullopt;
      return f;
    }
    return std::nullopt;
  }

  std::optional<GradedImplication> gimp() {
    auto lhs = basic_or();
    if (!lhs) return std::nullopt;
    if (peek() != Tok::gimp) {
      expect(Tok::gimp);
      return std::nullopt;
    }
    const Token& t = toks_[pos_++];
    Grade c;
    try {
      c = scale_.grade_of(Rational::parse(t.text));
    } catch (const UnknownGrade&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(t.line, t.column, {"grade"}, e.what());
    }
    auto rhs = basic_or();
    if (!rhs) return std::nullopt;
    return GradedImplication{*lhs, c, *rhs};
  }

  // basic level

  std::optional<BasicExpr> basic_or() {
    auto lhs = basic_and();
    if (!lhs) return std::nullopt;
    while (true) {
      const std::size_t save = pos_;
      if (!accept(Tok::bar)) break;
      auto rhs = basic_and();
      if (!rhs) {
        pos_ = save;
        break;
      }
      lhs = ex::disj(*lhs, *rhs);
    }
    return lhs;
  }

  std::optional<BasicExpr> basic_and() {
    auto lhs = basic_unary();
    if (!lhs) return std::nullopt;
    while (true) {
      const std::size_t save = pos_;
      if (!accept(Tok::amp)) break;
      auto rhs = basic_unary();
      if (!rhs) {
        pos_ = save;
        break;
      }
      lhs = ex::conj(*lhs, *rhs);
    }
    return lhs;
  }

  std::optional<BasicExpr> basic_unary() {
    if (accept(Tok::bang)) {
      auto e = basic_unary();
      if (!e) return std::nullopt;
      return ex::neg(*e);
    }
    if (peek() == Tok::dle || peek() == Tok::dge) {
      const Token& t = toks_[pos_++];
      if (!has_order(logic_))
        throw VariantError(std::to_string(t.line) + ":" + std::to_string(t.column) +
                           ": diamonds are not available in plain lae");
      auto e = basic_unary();
      if (!e) return std::nullopt;
      return t.kind == Tok::dle ? ex::dle(*e) : ex::dge(*e);
    }
    expect(Tok::dle);
    expect(Tok::dge);
    return basic_atom();
  }

  std::optional<BasicExpr> basic_atom() {
    if (peek() == Tok::ident) {
      const Token& t = toks_[pos_++];
      auto v = sig_.find(t.text);
      if (!v)
        throw SortError(std::to_string(t.line) + ":" + std::to_string(t.column) + ": undeclared variable '" +
                        t.text + "'");
      return ex::var(*v);
    }
    expect(Tok::ident);
    if (accept(Tok::top)) return ex::top();
    if (accept(Tok::bottom)) return ex::bottom();
    if (accept(Tok::lparen)) {
      auto e = basic_or();
      if (!e || !accept(Tok::rparen)) return std::nullopt;
      return e;
    }
    return std::nullopt;
  }

  std::vector<Token> toks_;
  const Signature& sig_;
  const GradeScale& scale_;
  Logic logic_;
  std::size_t pos_ = 0;
  std::size_t far_ = 0;
  std::set<std::string> expected_;
};

}  // namespace detail

using Parsed = std::variant<OuterFormula, BasicExpr>;

/// Outer formula parser. `first_line` shifts reported line numbers for text taken from a file.
inline OuterFormula parse_formula(std::string_view src, const Signature& sig, const GradeScale& scale,
                                  Logic logic, std::size_t first_line = 1) {
  detail::Parser p(detail::tokenize(src, first_line), sig, scale, logic);
  return p.whole_formula();
}

inline BasicExpr parse_basic(std::string_view src, const Signature& sig, const GradeScale& scale,
                             Logic logic, std::size_t first_line = 1) {
  detail::Parser p(detail::tokenize(src, first_line), sig, scale, logic);
  return p.whole_basic();
}

/// Text containing a graded implication parses as an outer formula, anything else as a
/// basic expression.
inline Parsed parse(std::string_view src, const Signature& sig, const GradeScale& scale, Logic logic,
                    std::size_t first_line = 1) {
  detail::Parser p(detail::tokenize(src, first_line), sig, scale, logic);
  if (p.has_gimp()) return p.whole_formula();
  return p.whole_basic();
}

inline std::string to_string(const Parsed& p, const Signature& sig, const GradeScale& scale) {
  if (auto f = std::get_if<OuterFormula>(&p)) return to_string(*f, sig, scale);
  return to_string(std::get<BasicExpr>(p), sig);
}

}  // namespace lae
