#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace polsel {

using Rational = boost::rational<std::int64_t>;

/// Exact Gaussian rational re + i*im. Characters of every built-in group are
/// of this form, so no character computation ever rounds.
class Scalar {
 public:
  constexpr Scalar() = default;
  Scalar(std::int64_t re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  Scalar(Rational re) : re_(re) {}      // NOLINT(google-explicit-constructor)
  Scalar(Rational re, Rational im) : re_(re), im_(im) {}

  static Scalar i() { return {Rational(0), Rational(1)}; }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_real() const { return im_.numerator() == 0; }
  bool is_integer() const { return im_.numerator() == 0 && re_.denominator() == 1; }

  Scalar conj() const { return {re_, -im_}; }
  /// |z|^2, always real.
  Rational norm() const { return re_ * re_ + im_ * im_; }

  Scalar& operator+=(const Scalar& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    Rational r = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = r;
    return *this;
  }
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend Scalar operator-(const Scalar& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  /// Compact exact form: "1", "-1/2", "i", "-i", "1+2i", "3/4-i".
  std::string to_string() const;
  /// Inverse of to_string(). Throws ParseError on malformed text.
  static Scalar parse(std::string_view text);

 private:
  Rational re_{0};
  Rational im_{0};
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace polsel
