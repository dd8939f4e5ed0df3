#pragma once

// Coefficient rings for truncated power series: exact rationals (GMP),
// the quadratic extension Q(sqrt3), and plain binary doubles.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace uipt {

using Rat = mpq_class;

inline Rat rat_of(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Exact square root of a nonnegative rational; returns false if the value
// is not a perfect square (or is negative).
inline bool rat_try_sqrt(const Rat& x, Rat& out) {
  if (sgn(x) < 0) return false;
  if (sgn(x) == 0) {
    out = 0;
    return true;
  }
  const mpz_class& num = x.get_num();
  const mpz_class& den = x.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return false;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  out = Rat(rn, rd);
  return true;
}

inline std::string rat_to_string(const Rat& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

inline Rat rat_parse(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  r.canonicalize();
  return r;
}

// Element a + b*sqrt(3) with exact rational a, b.
struct Sqrt3 {
  Rat a{0};
  Rat b{0};

  Sqrt3() = default;
  Sqrt3(Rat a_, Rat b_) : a(std::move(a_)), b(std::move(b_)) {}
  Sqrt3(long v) : a(v), b(0) {}  // NOLINT: implicit by design, mirrors integer literals
  explicit Sqrt3(const Rat& v) : a(v), b(0) {}

  bool is_rational() const { return sgn(b) == 0; }
  double to_double() const { return a.get_d() + b.get_d() * 1.7320508075688772935; }

  friend Sqrt3 operator+(const Sqrt3& x, const Sqrt3& y) { return {x.a + y.a, x.b + y.b}; }
  friend Sqrt3 operator-(const Sqrt3& x, const Sqrt3& y) { return {x.a - y.a, x.b - y.b}; }
  friend Sqrt3 operator-(const Sqrt3& x) { return {-x.a, -x.b}; }
  friend Sqrt3 operator*(const Sqrt3& x, const Sqrt3& y) {
    return {x.a * y.a + 3 * x.b * y.b, x.a * y.b + x.b * y.a};
  }
  Sqrt3& operator+=(const Sqrt3& y) { a += y.a; b += y.b; return *this; }
  Sqrt3& operator-=(const Sqrt3& y) { a -= y.a; b -= y.b; return *this; }
  Sqrt3& operator*=(const Sqrt3& y) { *this = *this * y; return *this; }
  friend bool operator==(const Sqrt3& x, const Sqrt3& y) { return x.a == y.a && x.b == y.b; }

  // Field norm a^2 - 3 b^2; zero iff the element is zero.
  Rat norm() const { return a * a - 3 * b * b; }

  Sqrt3 inverse() const {
    Rat n = norm();
    if (sgn(n) == 0) throw std::domain_error("Sqrt3: division by zero");
    return {a / n, -b / n};
  }
  friend Sqrt3 operator/(const Sqrt3& x, const Sqrt3& y) { return x * y.inverse(); }

  // Sign under the real embedding sqrt(3) = 1.732..., computed exactly.
  int sign() const {
    int sa = sgn(a), sb = sgn(b);
    if (sa == 0 && sb == 0) return 0;
    if (sa >= 0 && sb >= 0) return 1;
    if (sa <= 0 && sb <= 0) return -1;
    // opposite signs: a + b*sqrt3 > 0  <=>  a^2 > 3 b^2 when a > 0
    int sn = sgn(Rat(a * a - 3 * b * b));
    return sa > 0 ? (sn >= 0 ? (sn == 0 ? 0 : 1) : -1) : (sn > 0 ? -1 : (sn == 0 ? 0 : 1));
  }
};

// Principal square root in Q(sqrt3), if one exists there.
inline bool sqrt3_try_sqrt(const Sqrt3& z, Sqrt3& out) {
  if (z.sign() < 0) return false;
  if (z.sign() == 0) {
    out = Sqrt3{};
    return true;
  }
  Rat r;
  if (sgn(z.b) == 0) {
    if (rat_try_sqrt(z.a, r)) {
      out = Sqrt3{r, 0};
      return true;
    }
    if (rat_try_sqrt(z.a / 3, r)) {
      out = Sqrt3{0, r};
      return true;
    }
    return false;
  }
  // w = c + d*sqrt3 with c^2 + 3 d^2 = a, 2 c d = b.
  Rat n;
  if (!rat_try_sqrt(z.norm(), n)) return false;
  for (int pick : {0, 1}) {
    Rat c2 = (z.a + (pick == 0 ? n : -n)) / 2;
    Rat c;
    if (sgn(c2) > 0 && rat_try_sqrt(c2, c)) {
      Rat d = z.b / (2 * c);
      Sqrt3 w{c, d};
      if (w.sign() < 0) w = -w;
      if (w * w == z) {
        out = w;
        return true;
      }
    }
  }
  return false;
}

inline std::string sqrt3_to_string(const Sqrt3& z) {
  return rat_to_string(z.a) + "+" + rat_to_string(z.b) + "*sqrt3";
}

inline Sqrt3 sqrt3_parse(const std::string& s) {
  const std::string suffix = "*sqrt3";
  if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
    std::string body = s.substr(0, s.size() - suffix.size());
    auto plus = body.find('+', 1);
    if (plus == std::string::npos) throw std::invalid_argument("bad sqrt3 literal: " + s);
    return {rat_parse(body.substr(0, plus)), rat_parse(body.substr(plus + 1))};
  }
  return Sqrt3{rat_parse(s)};
}

inline std::string double_to_string(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Uniform interface the series template uses on its coefficients.
template <class R>
struct RingOps;

template <>
struct RingOps<Rat> {
  static constexpr bool exact = true;
  static const char* name() { return "rational"; }
  static Rat zero() { return Rat(0); }
  static Rat one() { return Rat(1); }
  static Rat from_int(long v) { return Rat(v); }
  static Rat from_rat(const Rat& v) { return v; }
  static bool is_zero(const Rat& x) { return sgn(x) == 0; }
  static Rat inverse(const Rat& x) {
    if (sgn(x) == 0) throw std::domain_error("rational: division by zero");
    return 1 / x;
  }
  static bool try_sqrt(const Rat& x, Rat& out) { return rat_try_sqrt(x, out); }
  static double to_double(const Rat& x) { return x.get_d(); }
  static std::string to_string(const Rat& x) { return rat_to_string(x); }
  static Rat parse(const std::string& s) { return rat_parse(s); }
};

template <>
struct RingOps<Sqrt3> {
  static constexpr bool exact = true;
  static const char* name() { return "sqrt3"; }
  static Sqrt3 zero() { return Sqrt3{}; }
  static Sqrt3 one() { return Sqrt3{1}; }
  static Sqrt3 from_int(long v) { return Sqrt3{v}; }
  static Sqrt3 from_rat(const Rat& v) { return Sqrt3{v}; }
  static bool is_zero(const Sqrt3& x) { return sgn(x.a) == 0 && sgn(x.b) == 0; }
  static Sqrt3 inverse(const Sqrt3& x) { return x.inverse(); }
  static bool try_sqrt(const Sqrt3& x, Sqrt3& out) { return sqrt3_try_sqrt(x, out); }
  static double to_double(const Sqrt3& x) { return x.to_double(); }
  static std::string to_string(const Sqrt3& x) { return sqrt3_to_string(x); }
  static Sqrt3 parse(const std::string& s) { return sqrt3_parse(s); }
};

template <>
struct RingOps<double> {
  static constexpr bool exact = false;
  static const char* name() { return "float64"; }
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double from_int(long v) { return static_cast<double>(v); }
  static double from_rat(const Rat& v) { return v.get_d(); }
  static bool is_zero(double x) { return x == 0.0; }
  static double inverse(double x) {
    if (x == 0.0) throw std::domain_error("float64: division by zero");
    return 1.0 / x;
  }
  static bool try_sqrt(double x, double& out) {
    if (x < 0) return false;
    out = std::sqrt(x);
    return true;
  }
  static double to_double(double x) { return x; }
  static std::string to_string(double x) { return double_to_string(x); }
  static double parse(const std::string& s) { return std::stod(s); }
};

}  // namespace uipt
