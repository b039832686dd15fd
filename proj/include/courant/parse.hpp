#pragma once

// Recursive-descent parser for polynomial expressions:
//
//   expr    := term (('+'|'-') term)*
//   term    := ['-'|'+'] factor ('*' factor)*
//   factor  := base ('^' nonneg-int)?
//   base    := rational-literal | identifier | '(' expr ')'
//   literal := int ('/' positive-int)?

#include <cctype>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "courant/poly.hpp"

namespace courant {

namespace detail {

class ExprParser {
 public:
  ExprParser(std::string_view text, std::span<const std::string> vars) : text_(text), vars_(vars) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial acc = term();
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Polynomial term() {
    bool negate = false;
    for (;;) {
      if (accept('-')) {
        negate = !negate;
      } else if (!accept('+')) {
        break;
      }
    }
    Polynomial acc = factor();
    while (accept('*')) acc *= factor();
    return negate ? -acc : acc;
  }

  Polynomial factor() {
    Polynomial b = base();
    if (!accept('^')) return b;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '-') fail("negative exponent");
    std::string digits = read_digits();
    if (digits.empty()) fail("expected exponent");
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == '/'))
      fail("non-integer exponent");
    unsigned long k = std::stoul(digits);
    Polynomial r = Polynomial::constant(vars_.size(), 1);
    for (unsigned long i = 0; i < k; ++i) r *= b;
    return r;
  }

  Polynomial base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return literal();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Polynomial literal() {
    std::string num = read_digits();
    std::string den = "1";
    std::size_t save = pos_;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      skip_ws();
      den = read_digits();
      if (den.empty()) fail("expected denominator");
      if (den.find_first_not_of('0') == std::string::npos) fail("zero denominator");
    } else {
      pos_ = save;
    }
    if (pos_ < text_.size() && text_[pos_] == '.') fail("decimal literals are not supported");
    Rational q{mpz_class(num), mpz_class(den)};
    q.canonicalize();
    return Polynomial::constant(vars_.size(), q);
  }

  Polynomial identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string_view name = text_.substr(start, pos_ - start);
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return Polynomial::variable(vars_.size(), i);
    pos_ = start;
    fail("unknown identifier '" + std::string(name) + "'");
  }

  std::string read_digits() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  std::span<const std::string> vars_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Polynomial parse(std::string_view text, std::span<const std::string> variables) {
  return detail::ExprParser(text, variables).parse();
}

inline PolyMap parse_map(std::span<const std::string> exprs, std::span<const std::string> variables) {
  std::vector<Polynomial> outs;
  outs.reserve(exprs.size());
  for (const auto& e : exprs) outs.push_back(parse(e, variables));
  return PolyMap(variables.size(), std::move(outs));
}

}  // namespace courant
