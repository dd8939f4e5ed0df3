#pragma once

// The critical offspring law theta / phi of the skeleton forest, its
// volume-tilted family phi_t, the parametrization s^2 = t^2 (3 - 2t), and
// closed forms for the r-fold iterates phi_t^{{r}}.

#include <uipt/enumeration.hpp>
#include <uipt/series.hpp>

#include <mutex>
#include <vector>

namespace uipt::skeleton {

// Unique root in [0,1] of t^2 (3 - 2t) = s^2 (bisection + Newton polish).
double t_from_s(double s);

// theta(i) = rho alpha^{i-1} T_{i+2}(rho); exact, lands in Q.
Rat theta_exact(int i);
double theta_d(int i);

// Series expansion of phi(u) = 1 - (1 + (1-u)^{-1/2})^{-2} over any ring.
template <class R>
Series<R> phi_series_closed(int order) {
  Series<R> one_minus_u = add_const(negate(Series<R>::identity(order)), RingOps<R>::one());
  Series<R> w = inverse(sqrt(one_minus_u));  // (1-u)^{-1/2}
  Series<R> d = add_const(w, RingOps<R>::one());
  return add_const(negate(inverse(mul(d, d))), RingOps<R>::one());
}

// Same coefficients from the boundary-series definition
// theta(i) = rho alpha^{i-1} T_{i+2}(rho); must agree with the closed form.
Series<Rat> phi_series_from_counts(int order);

// phi_t(u) pointwise, eq. form 1 - (a (1-u)^{-1/2} + sqrt(1 + 3(1-t)/(t(1-u))))^{-2}.
double phi_t_eval(double t, double u);
double phi_t_prime_eval(double t, double u);

// Tilted coefficients theta_t(i) = rho s (alpha t)^{i-1} T_{i+2}(rho s),
// evaluated in log space through the closed form of T_p; any i.
double theta_t_d(double t, int i);

// Exact tilted series at rational t (s^2 = t^2(3-2t) stays rational):
// Phi_{s,t}(u) = rho s / ((alpha t)^2 u) * (T(rho s, alpha t u) - T(rho s, 0))
// expanded through the factored radicand; division exactness is asserted.
Series<Rat> phi_t_series_exact(const Rat& t, int order);
Series<double> phi_t_series(double t, int order);

// g_r(u) = 1 - phi_t^{{r}}(u) as a series, by the algebraic one-step map
//   g_{k+1} = g_k (6 - 5t + t g_k - 2 sqrt((3-2t)(3-3t+t g_k))) / (t (1 - g_k)^2),
// which keeps every square root and division exact in the ring.
template <class R>
Series<R> one_minus_iterate_series(const R& t, int r, int order);

// Closed forms of Lemma-type iterates: phi_t^{{r}}(u) and [u] phi_t^{{r}}.
double iterate_closed(double t, long r, double u);
double iterate_prime0(double t, long r);

// The offspring law theta (t = 1) or theta_t, with lazily extended support,
// cumulative sums and the analytic tail remainder.
class OffspringLaw {
 public:
  explicit OffspringLaw(double t = 1.0);
  double tilt() const { return t_; }
  double theta(int k) const;
  double cdf(int k) const;  // sum_{j<=k} theta(j)
  double tail(int k) const { return 1.0 - cdf(k); }
  int support_size() const;
  // smallest k with cdf(k) >= u (extends the table as needed)
  int quantile(double u) const;

 private:
  void extend_locked(int k) const;
  double t_;
  mutable std::mutex mu_;
  mutable std::vector<double> theta_;
  mutable std::vector<double> cdf_;
};

}  // namespace uipt::skeleton
