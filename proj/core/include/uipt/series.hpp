#pragma once

// Truncated formal power series over a pluggable coefficient ring.
// A series of order N stores coefficients 0..N; degrees beyond N are
// unknown, not zero, and every operation propagates orders as min.

#include <uipt/rings.hpp>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace uipt {

template <class R>
class Series {
 public:
  using Ring = RingOps<R>;

  explicit Series(int order) : c_(static_cast<size_t>(order) + 1, Ring::zero()) {
    if (order < 0) throw std::invalid_argument("series order must be >= 0");
  }
  Series(std::vector<R> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw std::invalid_argument("series needs at least the constant term");
  }

  static Series constant(const R& v, int order) {
    Series s(order);
    s.c_[0] = v;
    return s;
  }
  static Series identity(int order) {  // the series x
    Series s(order);
    if (order >= 1) s.c_[1] = Ring::one();
    return s;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const R& operator[](int k) const { return c_[static_cast<size_t>(k)]; }
  R& at(int k) { return c_[static_cast<size_t>(k)]; }
  const std::vector<R>& coeffs() const { return c_; }

  // k-th coefficient with the truncation contract enforced.
  const R& coeff(int k) const {
    if (k < 0 || k > order()) throw std::out_of_range("coefficient beyond truncation order");
    return c_[static_cast<size_t>(k)];
  }

  // First index with a nonzero coefficient, or order()+1 if none stored.
  int valuation() const {
    for (int i = 0; i <= order(); ++i)
      if (!Ring::is_zero(c_[i])) return i;
    return order() + 1;
  }

  Series truncated(int new_order) const {
    if (new_order >= order()) return *this;
    return Series(std::vector<R>(c_.begin(), c_.begin() + new_order + 1));
  }

  R eval(const R& x) const {  // Horner
    R acc = c_.back();
    for (int i = order() - 1; i >= 0; --i) acc = acc * x + c_[i];
    return acc;
  }

  bool operator==(const Series& o) const { return c_ == o.c_; }

 private:
  std::vector<R> c_;
};

template <class R>
Series<R> add(const Series<R>& a, const Series<R>& b) {
  int n = std::min(a.order(), b.order());
  Series<R> r(n);
  for (int i = 0; i <= n; ++i) r.at(i) = a[i] + b[i];
  return r;
}

template <class R>
Series<R> sub(const Series<R>& a, const Series<R>& b) {
  int n = std::min(a.order(), b.order());
  Series<R> r(n);
  for (int i = 0; i <= n; ++i) r.at(i) = a[i] - b[i];
  return r;
}

template <class R>
Series<R> negate(const Series<R>& a) {
  Series<R> r(a.order());
  for (int i = 0; i <= a.order(); ++i) r.at(i) = -a[i];
  return r;
}

template <class R>
Series<R> scale(const Series<R>& a, const R& v) {
  Series<R> r(a.order());
  for (int i = 0; i <= a.order(); ++i) r.at(i) = a[i] * v;
  return r;
}

template <class R>
Series<R> add_const(const Series<R>& a, const R& v) {
  Series<R> r = a;
  r.at(0) = r[0] + v;
  return r;
}

// Truncated Cauchy product, schoolbook.
template <class R>
Series<R> mul(const Series<R>& a, const Series<R>& b) {
  int n = std::min(a.order(), b.order());
  Series<R> r(n);
  for (int i = 0; i <= n && i <= a.order(); ++i) {
    if (RingOps<R>::is_zero(a[i])) continue;
    int jmax = std::min(n - i, b.order());
    for (int j = 0; j <= jmax; ++j) r.at(i + j) = r[i + j] + a[i] * b[j];
  }
  return r;
}

// Multiplication by x^k; every coefficient of the product is known, so the
// order genuinely grows by k.
template <class R>
Series<R> shift_up(const Series<R>& a, int k) {
  Series<R> r(a.order() + k);
  for (int i = 0; i <= a.order(); ++i) r.at(i + k) = a[i];
  return r;
}

// Exact division by x^k. In exact rings the dropped coefficients must be
// identically zero; anything else means an upstream bug.
template <class R>
Series<R> shift_down(const Series<R>& a, int k) {
  if (k == 0) return a;
  if (a.order() < k) throw std::invalid_argument("shift_down: order too small");
  if constexpr (RingOps<R>::exact) {
    for (int i = 0; i < k; ++i)
      if (!RingOps<R>::is_zero(a[i])) throw std::logic_error("shift_down: inexact division by x");
  }
  Series<R> r(a.order() - k);
  for (int i = 0; i <= r.order(); ++i) r.at(i) = a[i + k];
  return r;
}

// Reciprocal of a series with invertible constant term.
template <class R>
Series<R> inverse(const Series<R>& a) {
  int n = a.order();
  Series<R> r(n);
  R inv0 = RingOps<R>::inverse(a[0]);
  r.at(0) = inv0;
  for (int k = 1; k <= n; ++k) {
    R acc = RingOps<R>::zero();
    for (int j = 1; j <= k; ++j) acc = acc + a[j] * r[k - j];
    r.at(k) = -(acc * inv0);
  }
  return r;
}

template <class R>
Series<R> div(const Series<R>& a, const Series<R>& b) {
  int v = b.valuation();
  if (v > b.order()) throw std::domain_error("series division by zero series");
  if (v == 0) return mul(a, inverse(b));
  if (a.order() < v) throw std::invalid_argument("series division: dividend order below divisor valuation");
  Series<R> num = shift_down(a, v);
  Series<R> den = shift_down(b, v).truncated(std::min(a.order(), b.order()) - v);
  return mul(num, inverse(den));
}

// Principal branch square root: handles an even-valuation prefix, then the
// constant term must admit a square root in the ring.
template <class R>
Series<R> sqrt(const Series<R>& f) {
  int v = f.valuation();
  if (v > f.order()) return Series<R>(f.order());  // sqrt(0) = 0
  if (v % 2 != 0) throw std::domain_error("series sqrt: odd valuation");
  Series<R> g = v > 0 ? shift_down(f, v) : f;
  int n = g.order();
  R g0;
  if (!RingOps<R>::try_sqrt(g[0], g0))
    throw std::domain_error("series sqrt: constant term is not a square in the ring");
  Series<R> r(n);
  r.at(0) = g0;
  R two_g0_inv = RingOps<R>::inverse(g0 + g0);
  for (int k = 1; k <= n; ++k) {
    R acc = g[k];
    for (int j = 1; j < k; ++j) acc = acc - r[j] * r[k - j];
    r.at(k) = acc * two_g0_inv;
  }
  return v > 0 ? shift_up(r, v / 2) : r;  // shift_up keeps the reduced order
}

// f(g(x)) for g with zero constant term, Horner over g.
template <class R>
Series<R> compose(const Series<R>& f, const Series<R>& g) {
  if (!RingOps<R>::is_zero(g[0]))
    throw std::domain_error("series compose: inner series must have zero constant term");
  int n = std::min(f.order(), g.order());
  Series<R> gt = g.truncated(n);
  Series<R> acc = Series<R>::constant(f[std::min(f.order(), n)], n);
  for (int i = std::min(f.order(), n) - 1; i >= 0; --i) acc = add_const(mul(acc, gt), f[i]);
  return acc;
}

// f^k by binary exponentiation with truncated products.
template <class R>
Series<R> powi(const Series<R>& f, long k) {
  if (k < 0) throw std::invalid_argument("powi: negative exponent");
  Series<R> acc = Series<R>::constant(RingOps<R>::one(), f.order());
  Series<R> base = f;
  while (k > 0) {
    if (k & 1) acc = mul(acc, base);
    k >>= 1;
    if (k > 0) base = mul(base, base);
  }
  return acc;
}

template <class R>
Series<R> derivative(const Series<R>& f) {
  if (f.order() == 0) return Series<R>(0);
  Series<R> r(f.order() - 1);
  for (int i = 1; i <= f.order(); ++i) r.at(i - 1) = f[i] * RingOps<R>::from_int(i);
  return r;
}

// Compositional inverse: g with f(g(x)) = x, by Newton iteration with
// doubling precision. Requires f(0) = 0 and invertible linear coefficient.
template <class R>
Series<R> revert(const Series<R>& f) {
  if (!RingOps<R>::is_zero(f[0])) throw std::domain_error("revert: constant term must vanish");
  if (f.order() < 1) throw std::invalid_argument("revert: order must be >= 1");
  R f1 = f[1];
  if (RingOps<R>::is_zero(f1)) throw std::domain_error("revert: linear coefficient not invertible");
  int n = f.order();
  Series<R> fp = derivative(f);
  int k = 1;  // g is correct through order k
  Series<R> g = scale(Series<R>::identity(1), RingOps<R>::inverse(f1));
  while (k < n) {
    int m = std::min(2 * k, n);
    Series<R> gm(m);
    for (int i = 0; i <= std::min(g.order(), m); ++i) gm.at(i) = g[i];
    Series<R> err = sub(compose(f.truncated(m), gm), Series<R>::identity(m));
    // f(g) - x vanishes identically through order k; factoring x^{k+1} out
    // keeps the division well-ordered at the final doubling step.
    Series<R> low = shift_down(err, k + 1);
    Series<R> slope = compose(fp.truncated(std::min(n - 1, m)), gm.truncated(std::min(n - 1, m)));
    Series<R> corr = shift_up(div(low, slope.truncated(std::max(low.order(), 0))), k + 1);
    Series<R> next(m);
    for (int i = 0; i <= m; ++i) {
      R v = gm[i];
      if (i <= corr.order()) v = v - corr[i];
      next.at(i) = v;
    }
    g = next;
    k = m;
  }
  return g;
}

template <class R>
nlohmann::json series_to_json(const Series<R>& s) {
  nlohmann::json j;
  j["ring"] = RingOps<R>::name();
  j["order"] = s.order();
  std::vector<std::string> coeffs;
  coeffs.reserve(s.order() + 1);
  for (int i = 0; i <= s.order(); ++i) coeffs.push_back(RingOps<R>::to_string(s[i]));
  j["coeffs"] = coeffs;
  return j;
}

template <class R>
Series<R> series_from_json(const nlohmann::json& j) {
  if (j.at("ring").get<std::string>() != RingOps<R>::name())
    throw std::invalid_argument("series ring mismatch: expected " + std::string(RingOps<R>::name()));
  int order = j.at("order").get<int>();
  std::vector<R> coeffs;
  coeffs.reserve(order + 1);
  for (const auto& c : j.at("coeffs")) coeffs.push_back(RingOps<R>::parse(c.get<std::string>()));
  if (static_cast<int>(coeffs.size()) != order + 1)
    throw std::invalid_argument("series coeffs/order mismatch");
  return Series<R>(std::move(coeffs));
}

}  // namespace uipt
