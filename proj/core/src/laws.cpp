#include <uipt/laws.hpp>

#include <cmath>
#include <stdexcept>

namespace uipt::laws {

namespace {

double lbinom_central(long q) {  // ln binom(2q, q)
  return std::lgamma(2.0 * q + 1.0) - 2.0 * std::lgamma(q + 1.0);
}

// alpha^{q-p} C(q)/C(p) (p/q) = (1/4)^{q-p} binom(2q,q)/binom(2p,p): the q/p
// hidden in C(q)/C(p) cancels the explicit p/q
Rat transition_prefactor_exact(int p, long q) {
  mpz_class bq, bp;
  mpz_bin_uiui(bq.get_mpz_t(), 2 * q, q);
  mpz_bin_uiui(bp.get_mpz_t(), 2 * p, p);
  Rat pref = Rat(bq) / Rat(bp);
  for (long i = 0; i < std::abs(q - p); ++i) {
    if (q > p)
      pref /= 4;
    else
      pref *= 4;
  }
  return pref;
}

}  // namespace

double perimeter_prob(long r, long q) {
  if (r < 1 || q < 1) throw std::invalid_argument("perimeter_prob: r, q >= 1");
  double rp = static_cast<double>(r + 1);
  double x = 1.0 - 1.0 / (rp * rp);
  // (1/4)^{q-1} (q/2) binom(2q,q) x^{q-1} / (r+1)^3
  double ln = (q - 1.0) * (std::log(x) - std::log(4.0)) + std::log(q / 2.0) + lbinom_central(q) -
              3.0 * std::log(rp);
  return std::exp(ln);
}

PerimeterPmf perimeter_pmf(long r, long qmax, double tail_eps) {
  if (r < 1) throw std::invalid_argument("perimeter_pmf: r >= 1");
  PerimeterPmf out;
  out.r = r;
  bool adaptive = qmax < 0;
  long cap = adaptive ? 64 : qmax;
  double rp = static_cast<double>(r + 1);
  double x = 1.0 - 1.0 / (rp * rp);
  auto certified_tail = [&](long q0) {
    // terms b_q have ratio b_{q+1}/b_q = ((q+1)/q) (2(2q+1)/(2(q+1))) (x/4) -> below 1;
    // bound the tail by a geometric series once the ratio is monotone.
    double b = perimeter_prob(r, q0);
    double ratio = (static_cast<double>(q0 + 1) / q0) * (2.0 * (2 * q0 + 1) / (2.0 * (q0 + 1))) * (x / 4.0) *
                   (static_cast<double>(q0) / (q0 + 1));
    // ratio above simplifies to (2q0+1)/(q0+1) * x/4 * (q0+1)/q0 ... keep a safe cap instead
    ratio = std::min(0.999999, std::max(ratio, x));
    return b * ratio / (1.0 - ratio);
  };
  for (;;) {
    out.probs.clear();
    out.probs.reserve(cap);
    for (long q = 1; q <= cap; ++q) out.probs.push_back(perimeter_prob(r, q));
    out.tail = certified_tail(cap);
    if (!adaptive || out.tail <= tail_eps || cap > (1L << 24)) break;
    cap *= 2;
  }
  return out;
}

double perimeter_transition(int p, long q, int r) {
  if (p < 1 || q < 1 || r < 1) throw std::invalid_argument("perimeter_transition: p, q, r >= 1");
  Series<double> f = add_const(negate(skeleton::one_minus_iterate_series<double>(1.0, r, p)), 1.0);
  double coeff = powi(f, q).coeff(p);
  if (coeff <= 0.0) return 0.0;
  double ln = (p - q) * std::log(4.0) + lbinom_central(q) - lbinom_central(p) + std::log(coeff);
  return std::exp(ln);
}

Rat perimeter_transition_exact(int p, long q, int r) {
  if (p < 1 || q < 1 || r < 1) throw std::invalid_argument("perimeter_transition_exact: p, q, r >= 1");
  Series<Rat> f = add_const(negate(skeleton::one_minus_iterate_series<Rat>(Rat(1), r, p)), Rat(1));
  Rat coeff = powi(f, q).coeff(p);
  return transition_prefactor_exact(p, q) * coeff;
}

double hull_volume_gf_closed(double s, long r) {
  if (s < 0.0 || s > 1.0) throw std::domain_error("hull_volume_gf_closed: s in [0,1]");
  if (r < 0) throw std::domain_error("hull_volume_gf_closed: r >= 0");
  if (s == 0.0) return 0.0;
  double t = skeleton::t_from_s(s);
  if (t == 1.0) return 1.0;
  double z = std::sqrt(3.0 * (1.0 - t) / t);
  double a = std::sqrt((3.0 - 2.0 * t) / t);
  double w = std::asinh(z) + r * std::acosh(a);
  double c = std::cosh(w);
  if (w > 30.0) {
    // cosh / (cosh^2 + 2)^{3/2} ~ e^{-2w} 4 ... evaluate via logs
    double lc = w + std::log1p(std::exp(-2.0 * w)) - std::log(2.0);
    double ld = 1.5 * (2.0 * lc + std::log1p(2.0 * std::exp(-2.0 * lc)));
    return std::exp(1.5 * std::log(3.0) + lc - ld);
  }
  return std::pow(3.0, 1.5) * c / std::pow(c * c + 2.0, 1.5);
}

double hull_volume_gf_iterate(double s, long r) {
  if (s <= 0.0 || s > 1.0) throw std::domain_error("hull_volume_gf_iterate: s in (0,1]");
  double t = skeleton::t_from_s(s);
  if (t == 1.0) return 1.0;
  double f0 = skeleton::iterate_closed(t, r, 0.0);
  double fp = skeleton::iterate_prime0(t, r);
  return s * std::pow(1.0 - t * f0, -1.5) * fp;
}

template <class R>
Series<R> hull_volume_gf_series(int r, int order) {
  using Ring = RingOps<R>;
  if (r < 0) throw std::invalid_argument("hull_volume_gf_series: r >= 0");
  const int n0 = order + r + 4;
  const R one = Ring::one();
  const R three = Ring::from_int(3);
  const R third2 = Ring::from_int(2) * Ring::inverse(three);  // 2/3
  Series<R> tvar = Series<R>::identity(n0);

  // s(t) = sqrt3 * t * sqrt(1 - 2t/3); sqrt3 enters through the ring.
  Series<R> root = sqrt(add_const(negate(scale(tvar, third2)), one));  // sqrt(1-2t/3)
  R sqrt3;
  if (!Ring::try_sqrt(three, sqrt3)) throw std::logic_error("hull gf series: ring lacks sqrt(3)");
  Series<R> s_of_t = scale(mul(tvar, root), sqrt3);

  if (r == 0) return Series<R>::identity(order);  // E[s^V] = s

  // rho s(t) = (t/12) sqrt(1 - 2t/3): rational in t.
  Series<R> rho_s = scale(mul(tvar, root), Ring::inverse(Ring::from_int(12)));

  // g_1 = 1 - theta_t(0) = 1 - sqrt(1-2t/3) * T_2(rho s(t))
  static enumeration::TriangulationCounts counts;
  Series<Rat> t2_exact = counts.boundary_series(2, n0);
  Series<R> t2(n0);
  for (int i = 0; i <= n0; ++i) t2.at(i) = Ring::from_rat(t2_exact[i]);
  Series<R> g = add_const(negate(mul(root, compose(t2, rho_s))), one);

  std::vector<Series<R>> iterates;  // f_k = 1 - g_k, k = 1..r
  iterates.push_back(add_const(negate(g), one));
  // iterate map in the t-variable: g_{k+1} = g_k (6-5t+t g_k - 2 sqrt((3-2t)(3-3t+t g_k))) / (t (1-g_k)^2)
  Series<R> three_m2t = add_const(negate(scale(tvar, Ring::from_int(2))), three);
  Series<R> three_m3t = add_const(negate(scale(tvar, three)), three);
  Series<R> six_m5t = add_const(negate(scale(tvar, Ring::from_int(5))), Ring::from_int(6));
  for (int k = 1; k < r; ++k) {
    Series<R> tg = mul(tvar, g);
    Series<R> rad = mul(three_m2t.truncated(tg.order()), add(three_m3t.truncated(tg.order()), tg));
    Series<R> bracket = sub(add(six_m5t.truncated(tg.order()), tg), scale(sqrt(rad), Ring::from_int(2)));
    Series<R> omg = add_const(negate(g), one);
    Series<R> den = mul(tvar.truncated(omg.order()), mul(omg, omg));
    g = div(mul(g, bracket), den);
    iterates.push_back(add_const(negate(g), one));
  }

  // chain rule: phi_t^{{r}}'(0) = prod_{k=0}^{r-1} phi_t'(f_k), f_0 = 0
  int live = g.order();
  auto phi_t_prime_at = [&](const Series<R>& u) {
    Series<R> wseries = sub(three_m2t.truncated(u.order()), mul(tvar.truncated(u.order()), u));
    Series<R> sw = sqrt(wseries);
    Series<R> d = add(sqrt(three_m2t.truncated(sw.order())), sw);
    Series<R> d2inv = inverse(mul(d, d));
    Series<R> omu = add_const(negate(u), one);
    Series<R> corr = div(mul(mul(tvar.truncated(omu.order()), omu), d2inv), mul(d, sw));
    return mul(tvar.truncated(corr.order()), sub(d2inv.truncated(corr.order()), corr));
  };
  Series<R> prod = phi_t_prime_at(Series<R>(live));  // f_0 = 0
  for (int k = 1; k < r; ++k) prod = mul(prod, phi_t_prime_at(iterates[k - 1]));

  // E(t) = s(t) (1 - t f_r)^{-3/2} prod
  Series<R> f_r = iterates.back();
  Series<R> wr = inverse(sqrt(add_const(negate(mul(tvar.truncated(f_r.order()), f_r)), one)));
  Series<R> e_t = mul(mul(s_of_t.truncated(wr.order()), mul(wr, mul(wr, wr))), prod);

  // compose with the reversion of s(t)
  Series<R> tau = revert(s_of_t.truncated(e_t.order() + 1));
  Series<R> gf = compose(e_t, tau.truncated(e_t.order()));
  return gf.truncated(order);
}

template Series<Sqrt3> hull_volume_gf_series<Sqrt3>(int, int);
template Series<double> hull_volume_gf_series<double>(int, int);

HullVolumePmf hull_volume_pmf(int r, int nmax, bool exact) {
  HullVolumePmf out;
  out.r = r;
  out.probs.resize(nmax + 1, 0.0);
  if (exact) {
    Series<Sqrt3> gf = hull_volume_gf_series<Sqrt3>(r, nmax);
    for (int n = 0; n <= std::min(nmax, gf.order()); ++n) {
      if (gf[n].sign() < 0) throw std::logic_error("hull_volume_pmf: negative exact coefficient");
      out.probs[n] = gf[n].to_double();
    }
  } else {
    Series<double> gf = hull_volume_gf_series<double>(r, nmax);
    for (int n = 0; n <= std::min(nmax, gf.order()); ++n) {
      if (gf[n] < -1e-12) throw std::logic_error("hull_volume_pmf: negative float coefficient");
      out.probs[n] = std::max(0.0, gf[n]);
    }
  }
  return out;
}

double layer_volume_gf(double s, int r, int p, long q) {
  if (s <= 0.0 || s > 1.0) throw std::domain_error("layer_volume_gf: s in (0,1]");
  if (r < 1 || p < 1 || q < 1) throw std::invalid_argument("layer_volume_gf: r, p, q >= 1");
  double t = skeleton::t_from_s(s);
  if (t == 1.0) return 1.0;
  if (p == 1) {
    double ln = std::log(s) + (q - 1.0) * (std::log(t) + std::log(skeleton::iterate_closed(t, r, 0.0)) -
                                           std::log(skeleton::iterate_closed(1.0, r, 0.0))) +
                std::log(skeleton::iterate_prime0(t, r)) - std::log(skeleton::iterate_prime0(1.0, r));
    return std::exp(ln);
  }
  Series<double> ft = add_const(negate(skeleton::one_minus_iterate_series<double>(t, r, p)), 1.0);
  Series<double> f1 = add_const(negate(skeleton::one_minus_iterate_series<double>(1.0, r, p)), 1.0);
  double ct = powi(ft, q).coeff(p);
  double c1 = powi(f1, q).coeff(p);
  if (!(ct > 0.0) || !(c1 > 0.0))
    throw std::overflow_error("layer_volume_gf: coefficient underflow; parameters out of the float envelope");
  return std::exp(p * std::log(s) + (q - p) * std::log(t) + std::log(ct) - std::log(c1));
}

double slice_gf(long r, long q, const std::vector<long>& arcs, const std::vector<double>& s) {
  if (arcs.size() != s.size() || arcs.empty()) throw std::invalid_argument("slice_gf: arcs/values mismatch");
  long total = 0;
  for (long a : arcs) {
    if (a < 1) throw std::invalid_argument("slice_gf: degenerate arcs are rejected");
    total += a;
  }
  if (total != q) throw std::invalid_argument("slice_gf: arcs must sum to q");
  if (r < 1) throw std::invalid_argument("slice_gf: r >= 1");
  double f1_0 = skeleton::iterate_closed(1.0, r, 0.0);
  double f1_p = skeleton::iterate_prime0(1.0, r);
  double ln_prod = 0.0;
  double ksum = 0.0;
  for (size_t j = 0; j < arcs.size(); ++j) {
    if (s[j] <= 0.0 || s[j] > 1.0) throw std::domain_error("slice_gf: s values in (0,1]");
    double t = skeleton::t_from_s(s[j]);
    double ft0 = skeleton::iterate_closed(t, r, 0.0);
    ln_prod += arcs[j] * (std::log(t) + std::log(ft0) - std::log(f1_0));
    double ftp = skeleton::iterate_prime0(t, r);
    ksum += (static_cast<double>(arcs[j]) / q) * (1.0 / t) * (ftp / f1_p) * (f1_0 / ft0);
  }
  return std::exp(ln_prod) * ksum;
}

double VolumeGf::operator()(double s) const {
  if (s == 1.0) return 1.0;
  if (conditioned) return layer_volume_gf(s, static_cast<int>(r), 1, q);
  return method == Method::closed ? hull_volume_gf_closed(s, r) : hull_volume_gf_iterate(s, r);
}

}  // namespace uipt::laws
