#include <doctest.h>

#include <uipt/series.hpp>

#include <random>

using namespace uipt;

namespace {

Series<Rat> random_series(std::mt19937_64& gen, int order, bool unit_valuation = false) {
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 7);
  Series<Rat> s(order);
  for (int i = 0; i <= order; ++i) s.at(i) = rat_of(num(gen), den(gen));
  if (unit_valuation) {
    s.at(0) = 0;
    if (sgn(s[1]) == 0) s.at(1) = 1;
  }
  return s;
}

}  // namespace

TEST_CASE("ring: rational sqrt and parsing") {
  Rat out;
  CHECK(rat_try_sqrt(rat_of(9, 4), out));
  CHECK(out == rat_of(3, 2));
  CHECK_FALSE(rat_try_sqrt(rat_of(2, 1), out));
  CHECK_FALSE(rat_try_sqrt(rat_of(-1, 1), out));
  CHECK(rat_parse(rat_to_string(rat_of(-22, 7))) == rat_of(-22, 7));
}

TEST_CASE("ring: sqrt3 arithmetic, sign, sqrt") {
  Sqrt3 z{rat_of(1, 2), rat_of(-1, 6)};  // (3 - sqrt3)/6
  CHECK(z.sign() > 0);
  CHECK((z * z.inverse()) == Sqrt3{1});
  CHECK(Sqrt3{rat_of(-1, 1), rat_of(1, 2)}.sign() < 0);   // -1 + 0.866
  CHECK(Sqrt3{rat_of(-1, 1), rat_of(2, 3)}.sign() > 0);   // -1 + 1.15
  Sqrt3 r;
  CHECK(sqrt3_try_sqrt(Sqrt3{3}, r));
  CHECK(r == Sqrt3{Rat(0), Rat(1)});
  // (1 + sqrt3)^2 = 4 + 2 sqrt3
  CHECK(sqrt3_try_sqrt(Sqrt3{Rat(4), Rat(2)}, r));
  CHECK(r == Sqrt3{Rat(1), Rat(1)});
  CHECK_FALSE(sqrt3_try_sqrt(Sqrt3{2}, r));
  CHECK(sqrt3_parse(sqrt3_to_string(z)) == z);
}

TEST_CASE("series: add identities") {
  Series<Rat> one_plus_x({Rat(1), Rat(1)});
  Series<Rat> zero(1);
  CHECK(add(one_plus_x, zero) == one_plus_x);
  Series<Rat> one_minus_x({Rat(1), Rat(-1)});
  Series<Rat> sum = add(one_plus_x, one_minus_x);
  CHECK(sum[0] == 2);
  CHECK(sum[1] == 0);
}

TEST_CASE("series: add matches elementwise oracle on random input") {
  std::mt19937_64 gen(11);
  Series<Rat> a = random_series(gen, 50), b = random_series(gen, 50);
  Series<Rat> s = add(a, b);
  for (int i = 0; i <= 50; ++i) CHECK(s[i] == a[i] + b[i]);
}

TEST_CASE("series: mul identity and binomial square") {
  std::mt19937_64 gen(12);
  Series<Rat> f = random_series(gen, 30);
  CHECK(mul(f, Series<Rat>::constant(Rat(1), 30)) == f);
  Series<Rat> one_plus_x({Rat(1), Rat(1), Rat(0)});
  Series<Rat> sq = mul(one_plus_x, one_plus_x);
  CHECK(sq[0] == 1);
  CHECK(sq[1] == 2);
  CHECK(sq[2] == 1);
}

TEST_CASE("series: mul matches naive convolution oracle at order 100") {
  std::mt19937_64 gen(13);
  Series<Rat> a = random_series(gen, 100), b = random_series(gen, 100);
  Series<Rat> p = mul(a, b);
  for (int k = 0; k <= 100; ++k) {
    Rat acc(0);
    for (int i = 0; i <= k; ++i) acc += a[i] * b[k - i];
    CHECK(p[k] == acc);
  }
  CHECK(mul(a, b) == mul(b, a));
}

TEST_CASE("series: compose identities") {
  std::mt19937_64 gen(14);
  Series<Rat> f = random_series(gen, 25);
  CHECK(compose(f, Series<Rat>::identity(25)) == f);
  Series<Rat> one_plus_u({Rat(1), Rat(1), Rat(0)});
  Series<Rat> inner({Rat(0), Rat(1), Rat(1)});
  Series<Rat> c = compose(one_plus_u, inner);
  CHECK(c[0] == 1);
  CHECK(c[1] == 1);
  CHECK(c[2] == 1);
  CHECK_THROWS(compose(f, one_plus_u));  // nonzero constant term rejected
}

TEST_CASE("series: exp-like composed with log-like is the identity to order 30") {
  // exp(u)-1 and log(1+u) as exact rational series
  const int n = 30;
  Series<Rat> expm1(n), log1p(n);
  Rat fact(1);
  for (int k = 1; k <= n; ++k) {
    fact *= k;
    expm1.at(k) = 1 / fact;
    log1p.at(k) = rat_of(k % 2 == 1 ? 1 : -1, k);
  }
  Series<Rat> comp = compose(expm1, log1p);
  CHECK(comp[0] == 0);
  CHECK(comp[1] == 1);
  for (int k = 2; k <= n; ++k) CHECK(comp[k] == 0);
}

TEST_CASE("series: sqrt basics and square-back oracle") {
  Series<Rat> one = Series<Rat>::constant(Rat(1), 5);
  CHECK(sqrt(one) == one);
  Series<Rat> perfect({Rat(1), Rat(2), Rat(1)});
  Series<Rat> root = sqrt(perfect);
  CHECK(root[0] == 1);
  CHECK(root[1] == 1);
  CHECK(root[2] == 0);
  // sqrt(1-4x): square back
  std::mt19937_64 gen(15);
  Series<Rat> f = random_series(gen, 40);
  f.at(0) = rat_of(9, 4);
  Series<Rat> g = sqrt(f);
  CHECK(mul(g, g) == f);
  Series<Rat> bad({Rat(2), Rat(1)});
  CHECK_THROWS(sqrt(bad));
}

TEST_CASE("series: sqrt handles even valuation") {
  // x^2 (1+x) has sqrt x sqrt(1+x)
  Series<Rat> f({Rat(0), Rat(0), Rat(1), Rat(1), Rat(0), Rat(0)});
  Series<Rat> g = sqrt(f);
  CHECK(g[0] == 0);
  CHECK(g[1] == 1);
  CHECK(mul(g, g).truncated(4) == f.truncated(4));
  Series<Rat> odd({Rat(0), Rat(1)});
  CHECK_THROWS(sqrt(odd));
}

TEST_CASE("series: powi identities and iterated-multiplication oracle") {
  std::mt19937_64 gen(16);
  Series<Rat> f = random_series(gen, 35);
  Series<Rat> p0 = powi(f, 0);
  CHECK(p0[0] == 1);
  for (int i = 1; i <= 35; ++i) CHECK(p0[i] == 0);
  Series<Rat> cube = powi(Series<Rat>({Rat(1), Rat(1), Rat(0), Rat(0)}), 3);
  CHECK(cube[0] == 1);
  CHECK(cube[1] == 3);
  CHECK(cube[2] == 3);
  CHECK(cube[3] == 1);
  Series<Rat> by_pow = powi(f, 13);
  Series<Rat> by_mul = Series<Rat>::constant(Rat(1), 35);
  for (int i = 0; i < 13; ++i) by_mul = mul(by_mul, f);
  CHECK(by_pow == by_mul);
}

TEST_CASE("series: coeff extraction and range contract") {
  Series<Rat> f({Rat(1), Rat(2)});
  CHECK(f.coeff(1) == 2);
  CHECK(f.coeff(0) == f[0]);
  CHECK_THROWS(f.coeff(2));
  // binomial oracle: coeff((1+x)^10, 4) = C(10,4)
  Series<Rat> b = powi(Series<Rat>({Rat(1), Rat(1), 0, 0, 0, 0, 0, 0, 0, 0, 0}), 10);
  CHECK(b.coeff(4) == 210);
}

TEST_CASE("series: revert basics and round trips") {
  CHECK(revert(Series<Rat>::identity(10)) == Series<Rat>::identity(10));
  // revert(x/(1-x)) = x/(1+x)
  const int n = 20;
  Series<Rat> f(n), expected(n);
  for (int k = 1; k <= n; ++k) {
    f.at(k) = 1;
    expected.at(k) = k % 2 == 1 ? 1 : -1;
  }
  CHECK(revert(f) == expected);
  std::mt19937_64 gen(17);
  Series<Rat> g = random_series(gen, 40, true);
  Series<Rat> ginv = revert(g);
  Series<Rat> round = compose(g, ginv);
  CHECK(round[1] == 1);
  for (int k = 0; k <= 40; ++k)
    if (k != 1) CHECK(round[k] == 0);
}

TEST_CASE("series: float backend tracks the exact backend") {
  std::mt19937_64 gen(18);
  Series<Rat> a = random_series(gen, 200), b = random_series(gen, 200);
  a.at(0) = rat_of(5, 4);
  Series<double> ad(200), bd(200);
  for (int i = 0; i <= 200; ++i) {
    ad.at(i) = RingOps<Rat>::to_double(a[i]);
    bd.at(i) = RingOps<Rat>::to_double(b[i]);
  }
  Series<Rat> pe = mul(a, b);
  Series<double> pf = mul(ad, bd);
  for (int i = 0; i <= 200; ++i) {
    double exact = RingOps<Rat>::to_double(pe[i]);
    if (std::abs(exact) >= 1e-6) CHECK(std::abs(pf[i] - exact) <= 1e-12 * std::abs(exact) * (i + 1));
  }
}

TEST_CASE("series: json round trip is exact for exact rings") {
  std::mt19937_64 gen(19);
  Series<Rat> a = random_series(gen, 25);
  CHECK(series_from_json<Rat>(series_to_json(a)) == a);
  Series<Sqrt3> s(4);
  s.at(0) = Sqrt3{rat_of(1, 2), rat_of(-3, 7)};
  s.at(3) = Sqrt3{rat_of(-5, 2), rat_of(0, 1)};
  CHECK(series_from_json<Sqrt3>(series_to_json(s)) == s);
  CHECK_THROWS(series_from_json<Rat>(series_to_json(s)));  // ring mismatch
}

TEST_CASE("series: compose is associative where defined") {
  std::mt19937_64 gen(21);
  Series<Rat> f = random_series(gen, 24);
  Series<Rat> g = random_series(gen, 24, true);
  Series<Rat> h = random_series(gen, 24, true);
  CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
}

TEST_CASE("series: orders propagate as min, never zero-pad") {
  Series<Rat> a(10), b(4);
  CHECK(add(a, b).order() == 4);
  CHECK(mul(a, b).order() == 4);
  Series<Rat> x2({Rat(0), Rat(0), Rat(1), Rat(4)});
  CHECK(shift_down(x2, 2).order() == 1);
  Series<Rat> dirty({Rat(1), Rat(0), Rat(1)});
  CHECK_THROWS(shift_down(dirty, 1));
}
