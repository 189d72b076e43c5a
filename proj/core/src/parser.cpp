#include <cctype>
#include <cstdlib>
#include <string>
#include <vector>

#include "herm/expr.hpp"

namespace herm {

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& detail)
    : Error([&] {
        std::string msg = "syntax error at offset " + std::to_string(offset) + ": " + detail;
        if (!expected.empty()) {
          msg += " (expected ";
          for (std::size_t i = 0; i < expected.size(); ++i) msg += (i ? ", " : "") + expected[i];
          msg += ")";
        }
        return msg;
      }()),
      offset_(offset),
      expected_(std::move(expected)) {}

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string text;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      while (i < src.size() && (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '.')) ++i;
      // optional exponent: 1e-5, 2.5E+3
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
          i = j;
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
      }
      out.push_back({Tok::Number, start, std::string(src.substr(start, i - start))});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (i < src.size() && std::isalnum(static_cast<unsigned char>(src[i]))) ++i;
      out.push_back({Tok::Ident, start, std::string(src.substr(start, i - start))});
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      default:
        throw ParseError(start, {"number", "variable", "function", "'('"},
                         std::string("unexpected character '") + c + "'");
    }
    out.push_back({k, start, std::string(1, c)});
    ++i;
  }
  out.push_back({Tok::End, src.size(), ""});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, int dimension) : toks_(std::move(toks)), dim_(dimension) {}

  Expr parse_all() {
    Expr e = expr();
    if (peek().kind != Tok::End) throw ParseError(peek().offset, {"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"},
                                                  "unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  Expr expr() {
    Expr e = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const bool plus = take().kind == Tok::Plus;
      Expr r = term();
      e = plus ? e + r : e - r;
    }
    return e;
  }

  Expr term() {
    Expr e = factor();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const bool mul = take().kind == Tok::Star;
      Expr r = factor();
      e = mul ? e * r : e / r;
    }
    return e;
  }

  Expr factor() {
    if (peek().kind == Tok::Minus) {
      take();
      return -factor();
    }
    Expr b = base();
    if (peek().kind == Tok::Caret) {
      take();
      bool negative = false;
      if (peek().kind == Tok::Minus) {
        take();
        negative = true;
      }
      const Token& t = peek();
      if (t.kind != Tok::Number)
        throw ParseError(t.offset, {"integer exponent"}, "exponent must be an integer literal");
      for (char ch : t.text)
        if (!std::isdigit(static_cast<unsigned char>(ch)))
          throw ParseError(t.offset, {"integer exponent"}, "non-integer exponent '" + t.text + "'");
      take();
      const long k = std::strtol(t.text.c_str(), nullptr, 10);
      if (k > 64) throw ParseError(t.offset, {"integer exponent <= 64"}, "exponent too large");
      b = pow(b, negative ? -static_cast<int>(k) : static_cast<int>(k));
    }
    return b;
  }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      const Token& t = peek();
      throw ParseError(t.offset, {what}, t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
    }
    take();
  }

  Expr call_argument() {
    expect(Tok::LParen, "'('");
    Expr e = expr();
    expect(Tok::RParen, "')'");
    return e;
  }

  Expr base() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        take();
        char* end = nullptr;
        const double v = std::strtod(t.text.c_str(), &end);
        if (end != t.text.c_str() + t.text.size())
          throw ParseError(t.offset, {"number"}, "malformed number '" + t.text + "'");
        return Expr::constant(v);
      }
      case Tok::LParen: {
        take();
        Expr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: {
        take();
        if (t.text == "i") return Expr::constant(kI);
        if (t.text == "conj") return conj(call_argument());
        if (t.text == "abs2") return abs2(call_argument());
        if (t.text == "exp") return exp(call_argument());
        if (t.text == "log") return log(call_argument());
        if (t.text.size() >= 2 && t.text[0] == 'z') {
          bool digits = true;
          for (std::size_t k = 1; k < t.text.size(); ++k)
            digits = digits && std::isdigit(static_cast<unsigned char>(t.text[k]));
          if (digits) {
            const long k = std::strtol(t.text.c_str() + 1, nullptr, 10);
            if (k < 1 || k > dim_)
              throw ParseError(t.offset, {"z1..z" + std::to_string(dim_)},
                               "variable index out of range in '" + t.text + "'");
            return Expr::var(static_cast<int>(k));
          }
        }
        throw ParseError(t.offset, {"z<k>", "i", "conj", "abs2", "exp", "log"}, "unknown identifier '" + t.text + "'");
      }
      default:
        throw ParseError(t.offset, {"number", "variable", "function", "'('"},
                         t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int dim_;
};

}  // namespace

Expr parse(std::string_view source, int dimension) {
  if (dimension < 0) throw Error("parse: dimension must be non-negative");
  Parser p(lex(source), dimension);
  return p.parse_all();
}

}  // namespace herm
