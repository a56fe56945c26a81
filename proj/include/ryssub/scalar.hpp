#pragma once

// Exact arithmetic in the quadratic field Q(sqrt 2).
//
// A Scalar holds a + b*sqrt(2) with a, b arbitrary-precision rationals kept in
// lowest terms by GMP. Equality is structural on the canonical pair, which is
// sound because {1, sqrt 2} is a Q-basis of the field.

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <compare>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace ryssub {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
public:
  DivisionByZero() : Error("division by zero in Q(sqrt2)") {}
};

class ParseError : public Error {
public:
  ParseError(std::string token, const std::string &what)
      : Error("cannot parse scalar literal: " + what + " (at '" + token + "')"),
        token_(std::move(token)) {}
  const std::string &token() const noexcept { return token_; }

private:
  std::string token_;
};

using Rational = mpq_class;

class Scalar {
public:
  Scalar() = default;
  Scalar(long v) : rat_(v) {}                                       // NOLINT
  Scalar(int v) : rat_(v) {}                                        // NOLINT
  Scalar(Rational rat, Rational sqrt2 = 0) : rat_(std::move(rat)), sqrt2_(std::move(sqrt2)) {
    rat_.canonicalize();
    sqrt2_.canonicalize();
  }

  static Scalar sqrt2() { return Scalar(Rational(0), Rational(1)); }
  static Scalar fraction(long num, long den) { return Scalar(Rational(num, den)); }

  const Rational &rational_part() const noexcept { return rat_; }
  const Rational &sqrt2_part() const noexcept { return sqrt2_; }

  bool is_zero() const noexcept { return sgn(rat_) == 0 && sgn(sqrt2_) == 0; }
  bool is_rational() const noexcept { return sgn(sqrt2_) == 0; }

  /// Exact sign of a + b*sqrt2, decided without floating point.
  int sign() const {
    const int sa = sgn(rat_);
    const int sb = sgn(sqrt2_);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: compare a^2 against 2 b^2.
    const Rational a2 = rat_ * rat_;
    const Rational b2 = 2 * sqrt2_ * sqrt2_;
    const int c = cmp(a2, b2);
    return c > 0 ? sa : (c < 0 ? sb : 0);
  }

  /// Field norm a^2 - 2 b^2; zero only for the zero element.
  Rational norm() const { return rat_ * rat_ - 2 * sqrt2_ * sqrt2_; }

  Scalar conjugate() const { return Scalar(rat_, -sqrt2_); }

  std::optional<Scalar> try_inverse() const {
    if (is_zero()) return std::nullopt;
    const Rational n = norm();
    return Scalar(rat_ / n, -sqrt2_ / n);
  }

  Scalar inverse() const {
    auto inv = try_inverse();
    if (!inv) throw DivisionByZero();
    return *std::move(inv);
  }

  Scalar operator-() const { return Scalar(-rat_, -sqrt2_); }

  Scalar &operator+=(const Scalar &o) {
    rat_ += o.rat_;
    sqrt2_ += o.sqrt2_;
    return *this;
  }
  Scalar &operator-=(const Scalar &o) {
    rat_ -= o.rat_;
    sqrt2_ -= o.sqrt2_;
    return *this;
  }
  Scalar &operator*=(const Scalar &o) {
    Rational a = rat_ * o.rat_ + 2 * sqrt2_ * o.sqrt2_;
    Rational b = rat_ * o.sqrt2_ + sqrt2_ * o.rat_;
    rat_ = std::move(a);
    sqrt2_ = std::move(b);
    return *this;
  }
  Scalar &operator/=(const Scalar &o) { return *this *= o.inverse(); }

  friend Scalar operator+(Scalar a, const Scalar &b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar &b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar &b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar &b) { return a /= b; }

  friend bool operator==(const Scalar &a, const Scalar &b) {
    return a.rat_ == b.rat_ && a.sqrt2_ == b.sqrt2_;
  }
  friend std::strong_ordering operator<=>(const Scalar &a, const Scalar &b) {
    const int s = (a - b).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  double to_double() const {
    constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
    return rat_.get_d() + sqrt2_.get_d() * kSqrt2;
  }

private:
  Rational rat_{0};
  Rational sqrt2_{0};
};

inline Scalar abs(const Scalar &s) { return s.sign() < 0 ? -s : s; }

/// Division that reports a zero divisor as an empty result instead of throwing.
inline std::optional<Scalar> try_divide(const Scalar &a, const Scalar &b) {
  auto inv = b.try_inverse();
  if (!inv) return std::nullopt;
  return a * *inv;
}

// ---------------------------------------------------------------------------
// Literal grammar
//
//   SCALAR   := TERM (("+"|"-") TERM)?
//   TERM     := RATIONAL ("*sqrt2")? | "sqrt2"
//   RATIONAL := ("-")? INT ("/" POSINT)?
//
// Whitespace is allowed between tokens; at most one sqrt2 term.

namespace detail {

class LiteralLexer {
public:
  explicit LiteralLexer(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool consume(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  bool consume_word(std::string_view w) {
    skip_ws();
    if (text_.substr(pos_, w.size()) != w) return false;
    pos_ += w.size();
    return true;
  }
  std::string digits() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }
  /// The token at the cursor, for error messages.
  std::string current_token() {
    skip_ws();
    if (pos_ >= text_.size()) return "<end>";
    std::size_t end = pos_ + 1;
    while (end < text_.size() && !std::isspace(static_cast<unsigned char>(text_[end])) &&
           text_[end] != '+' && text_[end] != '-')
      ++end;
    return std::string(text_.substr(pos_, end - pos_));
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

struct Term {
  Rational coeff;
  bool has_sqrt2 = false;
};

inline Term parse_term(LiteralLexer &lx, bool negate) {
  Term t;
  if (lx.consume_word("sqrt2")) {
    t.coeff = negate ? -1 : 1;
    t.has_sqrt2 = true;
    return t;
  }
  bool neg = negate;
  if (lx.consume('-')) neg = !neg;
  if (lx.consume_word("sqrt2")) {
    t.coeff = neg ? -1 : 1;
    t.has_sqrt2 = true;
    return t;
  }
  std::string num = lx.digits();
  if (num.empty()) throw ParseError(lx.current_token(), "expected integer or sqrt2");
  Rational value{mpz_class(num)};
  if (lx.consume('/')) {
    std::string den = lx.digits();
    if (den.empty()) throw ParseError(lx.current_token(), "expected denominator");
    mpz_class d(den);
    if (d == 0) throw ParseError(den, "zero denominator");
    value = Rational(mpz_class(num), d);
    value.canonicalize();
  }
  if (neg) value = -value;
  if (lx.consume('*')) {
    if (!lx.consume_word("sqrt2")) throw ParseError(lx.current_token(), "expected sqrt2 after '*'");
    t.has_sqrt2 = true;
  }
  t.coeff = value;
  return t;
}

inline std::string rational_literal(const Rational &q) {
  return q.get_den() == 1 ? q.get_num().get_str() : q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace detail

inline Scalar parse_scalar(std::string_view text) {
  detail::LiteralLexer lx(text);
  if (lx.at_end()) throw ParseError("<end>", "empty literal");
  Rational rat = 0;
  Rational root = 0;
  bool seen_sqrt2 = false;
  auto absorb = [&](const detail::Term &t) {
    if (t.has_sqrt2) {
      if (seen_sqrt2) throw ParseError("sqrt2", "more than one sqrt2 term");
      seen_sqrt2 = true;
      root += t.coeff;
    } else {
      rat += t.coeff;
    }
  };
  absorb(detail::parse_term(lx, false));
  if (!lx.at_end()) {
    bool negate;
    if (lx.consume('+'))
      negate = false;
    else if (lx.consume('-'))
      negate = true;
    else
      throw ParseError(lx.current_token(), "expected '+' or '-'");
    absorb(detail::parse_term(lx, negate));
  }
  if (!lx.at_end()) throw ParseError(lx.current_token(), "trailing input");
  return Scalar(rat, root);
}

/// Canonical literal: "0", "-3/2", "sqrt2", "-1/2*sqrt2", "1 - 1/2*sqrt2".
inline std::string to_string(const Scalar &s) {
  const Rational &a = s.rational_part();
  const Rational &b = s.sqrt2_part();
  auto root_term = [](const Rational &c) {
    return c == 1 ? std::string("sqrt2") : detail::rational_literal(c) + "*sqrt2";
  };
  if (sgn(b) == 0) return detail::rational_literal(a);
  if (sgn(a) == 0) return root_term(b);
  std::string out = detail::rational_literal(a);
  out += sgn(b) > 0 ? " + " : " - ";
  out += root_term(sgn(b) > 0 ? b : Rational(-b));
  return out;
}

inline std::ostream &operator<<(std::ostream &os, const Scalar &s) { return os << to_string(s); }

}  // namespace ryssub
