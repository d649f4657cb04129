#include "arithdyn/parser.hpp"

#include <cctype>
#include <limits>

#include "arithdyn/errors.hpp"

namespace arithdyn {

namespace {

class Parser {
 public:
  Parser(std::string_view text, unsigned nvars, unsigned order)
      : text_(text), nvars_(nvars), order_(order), field_(CyclotomicField::get(order)) {}

  MultiPoly parse_all() {
    skip();
    if (pos_ >= text_.size()) fail("empty expression");
    MultiPoly p = expr();
    skip();
    if (pos_ < text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { fail_at(message, pos_); }

  [[noreturn]] void fail_at(const std::string& message, std::size_t at) const {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw parse_error(message, line, column);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  MultiPoly constant(const CyclotomicElement& c) const {
    MultiPoly p(nvars_, order_);
    p.add_term(Exponent(nvars_, 0), c);
    return p;
  }

  std::string digits() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return std::string(text_.substr(start, pos_ - start));
  }

  unsigned small_integer(const char* what) {
    const std::size_t at = pos_;
    const std::string d = digits();
    if (d.size() > 9) fail_at(std::string(what) + " too large", at);
    return static_cast<unsigned>(std::stoul(d));
  }

  MultiPoly expr() {
    MultiPoly acc = term();
    while (true) {
      if (peek('+')) {
        ++pos_;
        acc += term();
      } else if (peek('-')) {
        ++pos_;
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  MultiPoly term() {
    MultiPoly acc = unary();
    while (true) {
      if (peek('*')) {
        ++pos_;
        acc *= unary();
      } else if (peek('/')) {
        ++pos_;
        const std::size_t at = pos_;
        MultiPoly d = unary();
        if (!d.is_constant()) fail_at("division by a non-constant polynomial", at);
        if (d.is_zero()) fail_at("division by zero", at);
        acc *= d.constant_term().inverse();
      } else {
        return acc;
      }
    }
  }

  MultiPoly unary() {
    if (peek('-')) {
      ++pos_;
      return -unary();
    }
    if (peek('+')) {
      ++pos_;
      return unary();
    }
    return power();
  }

  MultiPoly power() {
    MultiPoly base = atom();
    if (peek('^')) {
      ++pos_;
      const unsigned e = small_integer("exponent");
      if (e > 4096) fail("exponent too large");
      return base.pow(e);
    }
    return base;
  }

  MultiPoly atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      MultiPoly inner = expr();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return constant(CyclotomicElement(BigRational(BigInt(digits())), order_));
    }
    if (c == 'X' || c == 'x') {
      const std::size_t at = pos_;
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        fail_at("expected a variable index after 'X'", at);
      }
      const unsigned i = small_integer("variable index");
      if (i == 0 || i > nvars_) {
        fail_at("variable X" + std::to_string(i) + " out of range (N = " + std::to_string(nvars_) + ")", at);
      }
      return MultiPoly::variable(nvars_, i - 1, order_);
    }
    if (c == 'z') {
      const std::size_t at = pos_;
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        fail_at("expected a root-of-unity order after 'z'", at);
      }
      const unsigned k = small_integer("root order");
      if (k == 0 || !field_->contains_root_of_unity(k)) {
        fail_at("z" + std::to_string(k) + " is not in Q(z" + std::to_string(order_) + ")", at);
      }
      return constant(CyclotomicElement::zeta(k).promote(order_));
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  unsigned nvars_;
  unsigned order_;
  std::shared_ptr<const CyclotomicField> field_;
};

}  // namespace

MultiPoly parse_polynomial(std::string_view text, unsigned nvars, unsigned order) {
  MultiPoly p = Parser(text, nvars, order).parse_all();
  return p.order() == order ? p : p.promote(order);
}

CyclotomicElement parse_constant(std::string_view text, unsigned order) {
  MultiPoly p = Parser(text, 1, order).parse_all();
  if (!p.is_constant()) throw parse_error("expected a constant, found a polynomial", 1, 1);
  return p.constant_term().promote(order);
}

AffinePoint parse_point(std::string_view text, unsigned dimension, unsigned order) {
  std::vector<CyclotomicElement> coords;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && text[i] == '(') ++depth;
    if (i < text.size() && text[i] == ')') --depth;
    if (i == text.size() || (text[i] == ',' && depth == 0)) {
      const std::string_view piece = text.substr(start, i - start);
      try {
        coords.push_back(parse_constant(piece, order));
      } catch (const parse_error& e) {
        throw parse_error(std::string("point coordinate ") + std::to_string(coords.size() + 1) + ": " + e.what(),
                          e.line(), e.column() + start);
      }
      start = i + 1;
    }
  }
  if (coords.size() != dimension) {
    throw parse_error("point has " + std::to_string(coords.size()) + " coordinates, expected " +
                          std::to_string(dimension),
                      1, 1);
  }
  return AffinePoint(std::move(coords));
}

AffineMorphism parse_morphism(const std::vector<std::string>& components, unsigned order) {
  std::vector<MultiPoly> polys;
  const unsigned n = static_cast<unsigned>(components.size());
  for (const auto& c : components) polys.push_back(parse_polynomial(c, n, order));
  return AffineMorphism(std::move(polys));
}

}  // namespace arithdyn
