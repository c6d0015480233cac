#include "genlab/scalar.hpp"

#include <cmath>

namespace genlab {

namespace {

bool valid_int_text(std::string_view s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

}  // namespace

Int parse_int(std::string_view text) {
  if (!valid_int_text(text)) {
    throw ParseError("bad integer '" + std::string(text) + "'");
  }
  std::string s(text);
  if (s[0] == '+') s.erase(0, 1);
  return Int(s, 10);
}

Rat parse_rat(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rat(parse_int(text));
  Int num = parse_int(text.substr(0, slash));
  std::string_view den_text = text.substr(slash + 1);
  if (!den_text.empty() && den_text[0] == '-') {
    throw ParseError("negative denominator in '" + std::string(text) + "'");
  }
  Int den = parse_int(den_text);
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

std::string format_rat(const Rat& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rat make_rat(long num, long den) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

int QS2::sign() const {
  int sa = sgn(a);
  int sb = sgn(b);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: compare a^2 with 2 b^2; never equal for nonzero b.
  Rat lhs = a * a;
  Rat rhs = 2 * b * b;
  return lhs > rhs ? sa : sb;
}

double QS2::approx() const { return a.get_d() + b.get_d() * std::sqrt(2.0); }

int compare(const QS2& x, const QS2& y) { return (x - y).sign(); }

std::string format_qs2(const QS2& v) {
  if (sgn(v.b) == 0) return format_rat(v.a);
  std::string half = format_rat(Rat(v.b * 2)) + ":sqrt2half";
  if (sgn(v.a) == 0) return half;
  return format_rat(v.a) + "+" + half;
}

QS2 parse_qs2(std::string_view text) {
  constexpr std::string_view kTag = ":sqrt2half";
  if (text.size() < kTag.size() ||
      text.substr(text.size() - kTag.size()) != kTag) {
    return QS2(parse_rat(text));
  }
  std::string_view body = text.substr(0, text.size() - kTag.size());
  // A '+' after the first character separates the rational part.
  auto plus = body.find('+', 1);
  Rat a(0);
  std::string_view c_text = body;
  if (plus != std::string_view::npos) {
    a = parse_rat(body.substr(0, plus));
    c_text = body.substr(plus + 1);
  }
  Rat c = parse_rat(c_text);
  return QS2(a, Rat(c / 2));
}

}  // namespace genlab
