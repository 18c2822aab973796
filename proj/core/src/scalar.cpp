#include "polsel/scalar.hpp"

#include "polsel/errors.hpp"

#include <charconv>
#include <ostream>
#include <sstream>

namespace polsel {

Scalar& Scalar::operator/=(const Scalar& o) {
  Rational n = o.norm();
  if (n.numerator() == 0) throw InvalidArgument("division by zero scalar");
  *this *= o.conj();
  re_ /= n;
  im_ /= n;
  return *this;
}

namespace {

std::string rational_string(const Rational& r) {
  std::string s = std::to_string(r.numerator());
  if (r.denominator() != 1) s += "/" + std::to_string(r.denominator());
  return s;
}

Rational parse_rational(std::string_view text, std::string_view whole) {
  auto fail = [&] { return ParseError("malformed scalar '" + std::string(whole) + "'", 0); };
  if (text.empty()) throw fail();
  auto slash = text.find('/');
  auto parse_int = [&](std::string_view t) {
    std::int64_t v = 0;
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty()) throw fail();
    return v;
  };
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  std::int64_t den = parse_int(text.substr(slash + 1));
  if (den == 0) throw fail();
  return Rational(parse_int(text.substr(0, slash)), den);
}

// Coefficient of i: "" -> 1, "-" -> -1, "+" -> 1, otherwise a rational.
Rational parse_imag_coeff(std::string_view t, std::string_view whole) {
  if (t.empty() || t == "+") return Rational(1);
  if (t == "-") return Rational(-1);
  return parse_rational(t, whole);
}

}  // namespace

std::string Scalar::to_string() const {
  if (im_.numerator() == 0) return rational_string(re_);
  std::string imag;
  if (im_ == Rational(1)) {
    imag = "i";
  } else if (im_ == Rational(-1)) {
    imag = "-i";
  } else {
    imag = rational_string(im_) + "i";
  }
  if (re_.numerator() == 0) return imag;
  std::string out = rational_string(re_);
  if (imag.front() != '-') out += "+";
  return out + imag;
}

Scalar Scalar::parse(std::string_view text) {
  std::string_view whole = text;
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty scalar", 0);
  if (text.back() != 'i') return Scalar(parse_rational(text, whole));

  text.remove_suffix(1);
  // Split at the last sign that is not the leading one.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = text.size(); k-- > 1;) {
    if (text[k] == '+' || text[k] == '-') {
      split = k;
      break;
    }
  }
  if (split == std::string_view::npos) return {Rational(0), parse_imag_coeff(text, whole)};
  return {parse_rational(text.substr(0, split), whole),
          parse_imag_coeff(text.substr(split), whole)};
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

}  // namespace polsel
