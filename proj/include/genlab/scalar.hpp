#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace genlab {

using Int = mpz_class;
using Rat = mpq_class;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accepts "n", "-n" or "n/d"; result is canonical.
Rat parse_rat(std::string_view text);
// Always "num/den", also for integers.
std::string format_rat(const Rat& q);

Int parse_int(std::string_view text);

Rat make_rat(long num, long den = 1);

// Exact element a + b*sqrt(2) of Q(sqrt 2).
struct QS2 {
  Rat a;
  Rat b;

  QS2() = default;
  QS2(Rat a_in, Rat b_in) : a(std::move(a_in)), b(std::move(b_in)) {}
  explicit QS2(const Rat& r) : a(r), b(0) {}

  bool is_zero() const { return sgn(a) == 0 && sgn(b) == 0; }
  // Exact sign of a + b*sqrt2.
  int sign() const;

  QS2 operator+(const QS2& o) const { return {a + o.a, b + o.b}; }
  QS2 operator-(const QS2& o) const { return {a - o.a, b - o.b}; }
  QS2 operator-() const { return {-a, -b}; }
  QS2 operator*(const QS2& o) const {
    return {a * o.a + 2 * b * o.b, a * o.b + b * o.a};
  }
  QS2 operator*(const Rat& r) const { return {a * r, b * r}; }
  bool operator==(const QS2& o) const { return a == o.a && b == o.b; }
  bool operator!=(const QS2& o) const { return !(*this == o); }

  double approx() const;
};

// -1, 0, 1 for x < y, x == y, x > y.
int compare(const QS2& x, const QS2& y);

// "a", "c:sqrt2half" or "a+c:sqrt2half" where the value is a + c*sqrt2/2.
std::string format_qs2(const QS2& v);
QS2 parse_qs2(std::string_view text);

}  // namespace genlab
