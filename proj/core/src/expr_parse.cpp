// Recursive-descent parser. Precedence, loosest first:
//   + -   (left)
//   * /   (left)
//   unary -
//   ^     (right; the exponent may itself carry a unary minus)
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

#include "ulamkit/errors.hpp"
#include "ulamkit/expr.hpp"

namespace ulamkit::expr {

namespace {

std::optional<Function> lookup_function(std::string_view name) {
  if (name == "sin") return Function::kSin;
  if (name == "cos") return Function::kCos;
  if (name == "tan") return Function::kTan;
  if (name == "exp") return Function::kExp;
  if (name == "log") return Function::kLog;
  if (name == "sqrt") return Function::kSqrt;
  if (name == "abs") return Function::kAbs;
  if (name == "re") return Function::kRe;
  if (name == "im") return Function::kIm;
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    skip_ws();
    if (pos_ >= text_.size()) fail("empty expression", {"expression"});
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) {
      fail("unexpected input", {"operator", "')'", "end of input"});
    }
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what,
                         std::vector<std::string> expected) const {
    std::string msg = what + " at offset " + std::to_string(pos_);
    if (!expected.empty()) {
      msg += "; expected one of:";
      for (const auto& e : expected) msg += " " + e;
    }
    throw SyntaxError(msg, pos_, std::move(expected));
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_sum() {
    Expr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + parse_product();
      } else if (accept('-')) {
        lhs = lhs - parse_product();
      } else {
        return lhs;
      }
    }
  }

  Expr parse_product() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * parse_unary();
      } else if (accept('/')) {
        lhs = lhs / parse_unary();
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return pow(base, parse_unary());
    return base;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) {
      fail("unexpected end of input", {"number", "identifier", "'('", "'-'"});
    }
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_sum();
      if (!accept(')')) fail("unbalanced parenthesis", {"')'"});
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return parse_identifier();
    }
    fail("unexpected character", {"number", "identifier", "'('", "'-'"});
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        ++pos_;
      }
      if (pos_ < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits();
      } else {
        pos_ = save;
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      fail("malformed number", {"number"});
    }
    return Expr::number(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      auto fn = lookup_function(name);
      if (!fn) {
        throw UnknownFunction("unknown function '" + std::string(name) +
                              "' at offset " + std::to_string(start));
      }
      ++pos_;
      Expr arg = parse_sum();
      if (!accept(')')) fail("missing ')' after function argument", {"')'"});
      return call(*fn, arg);
    }
    if (name == "t") return Expr::variable();
    if (name == "i") {
      Node n{NodeKind::kImaginaryUnit};
      return Expr(std::make_shared<const Node>(std::move(n)));
    }
    if (name == "pi") return Expr::number(std::numbers::pi);
    if (lookup_function(name)) {
      fail("function '" + std::string(name) + "' requires an argument",
           {"'('"});
    }
    return Expr::parameter(std::string(name));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace ulamkit::expr
