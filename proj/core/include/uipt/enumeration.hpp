#pragma once

// Triangulations of the p-gon counted by inner vertices: the algebraic
// one-catalytic-variable solution h, the disk series T(x,0), the boundary
// series T_p(x) via the Tutte coefficient recurrence, the constants
// rho = 1/(12 sqrt3) and alpha = 1/12, C(p), and Boltzmann slot laws.

#include <uipt/series.hpp>

#include <iosfwd>
#include <shared_mutex>
#include <vector>

namespace uipt::enumeration {

inline Sqrt3 rho() { return {Rat(0), rat_of(1, 36)}; }  // 1/(12 sqrt3) = sqrt3/36
inline Rat alpha() { return rat_of(1, 12); }
inline Sqrt3 t_rho_alpha_exact() { return {rat_of(1, 2), rat_of(-1, 6)}; }  // (3 - sqrt3)/6
inline double rho_d() { return rho().to_double(); }
inline double alpha_d() { return 1.0 / 12.0; }

// Unique series solution of x^2 = h^2 (1 - 8 h) with h(0) = 0, via Newton
// iteration on v where h = x v, v^2 (1 - 8 x v) = 1.
template <class R>
Series<R> h_series_from_base(const Series<R>& base) {
  int n = base.order();
  auto pad = [](const Series<R>& s, int m) {
    Series<R> r(m);
    for (int i = 0; i <= std::min(s.order(), m); ++i) r.at(i) = s[i];
    return r;
  };
  Series<R> v = Series<R>::constant(RingOps<R>::one(), 0);
  int m = 0;
  while (m < n) {
    m = std::min(2 * m + 1, n);
    Series<R> vm = pad(v, m);
    Series<R> bm = base.truncated(m);
    Series<R> bv = mul(bm, vm);
    Series<R> f = sub(mul(mul(vm, vm), add_const(scale(bv, RingOps<R>::from_int(-8)), RingOps<R>::one())),
                      Series<R>::constant(RingOps<R>::one(), m));
    Series<R> fp = sub(scale(vm, RingOps<R>::from_int(2)), scale(mul(bv, vm), RingOps<R>::from_int(24)));
    v = sub(vm, div(f, fp));
  }
  return mul(base, pad(v, n));
}

template <class R>
Series<R> h_series(int order) {
  return h_series_from_base(Series<R>::identity(order));
}

// h(rho z) as a plain double series; coefficients h_n rho^n stay bounded.
Series<double> h_scaled_series(int order);

// h(rho) from the first `terms` coefficients. h has a square-root
// singularity at rho, so the raw partial sum converges like N^{-1/2}; the
// estimate adds the n^{-3/2} coefficient tail fitted from the top of the
// computed range, which brings N = 10^4 within 1e-5 of alpha.
double h_at_rho_estimate(int terms);

// T(x, 0) = (6 h^2 + x - h) / (2 x); the division by x is exact and checked.
template <class R>
Series<R> t_disk_series(int order) {
  Series<R> h = h_series<R>(order + 1);
  Series<R> num = add(scale(mul(h, h), RingOps<R>::from_int(6)), sub(Series<R>::identity(order + 1), h));
  Series<R> q = shift_down(num, 1);
  if constexpr (RingOps<R>::exact) {
    if (!RingOps<R>::is_zero(q[0])) throw std::logic_error("t_disk_series: nonzero constant term");
  }
  return scale(q, RingOps<R>::inverse(RingOps<R>::from_int(2)));
}

// T(rho z, 0) as a double series in the rescaled variable z = x / rho.
Series<double> t_disk_scaled_series(int order);

// Exact cache of the boundary series T_p(x) and the counts |T_{n,p}|,
// produced by the Tutte coefficient recurrence
//   a_{k+1} = (a_k - delta_{k,1} - sum_{i+j=k} a_i a_j) / x,  a_k = T_{k+1}.
// Every division by x is an exactness assertion.
class TriangulationCounts {
 public:
  void warm(int pmax, int order);
  Series<Rat> boundary_series(int p, int order);
  Series<Rat> disk_series(int order) { return boundary_series(1, order); }
  mpz_class count(int n, int p);
  void export_csv(std::ostream& out, int nmax, int pmax);

 private:
  void ensure_locked(int pmax, int order);
  mutable std::shared_mutex mu_;
  std::vector<Series<Rat>> a_;  // a_[k] = T_{k+1}(x) to order master_order_ - k
  int master_order_ = -1;
};

// T_p(rho z) over doubles via the same recurrence in the rescaled variable.
std::vector<Series<double>> boundary_scaled_series(int pmax, int order);

// T_p(rho) exactly in Q(sqrt3): [y^{p-1}] of (y-rho)/(2y) + (alpha-y)^{3/2}/y,
// the factored form of the bivariate solution at x = rho.
Sqrt3 t_p_at_rho(int p);
double t_p_at_rho_d(int p);  // log-space closed form, any p

// Partial sum over p of T_p(rho) alpha^{p-1}, approximating T(rho, alpha).
double t_rho_alpha_partial(int pmax);

// C(p) = 3^{p-2} p (2p)! / (4 sqrt(2 pi) (p!)^2), split into its exact
// rational factor and the float value.
struct CConstant {
  Rat rational_part;
  double value;
};
CConstant c_constant(int p);

// |T_{n,p}| as an exact rational (always an integer; asserted), from the
// Lagrange-inversion closed form of the boundary series.
Rat count_closed_form(int n, int p);

// ln of the Boltzmann slot probability q_n = |T_{n,p}| rho^n / T_p(rho).
double slot_log_prob(int p, long n);

// Scalar h(x) for 0 <= x <= rho, and the closed-form T_p(x) routes built
// on it (test oracles and slot generating functions).
double h_at_x_d(double x);
double t_p_at_x_d(int p, double x);
double slot_gf(int p, double s);  // E[s^n] = T_p(rho s)/T_p(rho), log-space

struct SlotPmf {
  int p = 0;
  std::vector<double> probs;  // probs[n], n = 0..nmax
  double tail = 0.0;          // 1 - sum(probs), certified from exact T_p(rho)
  bool tail_ok = false;       // tail <= requested tail_eps
};

// Probabilities of the Boltzmann slot volume for the p-gon up to a cutoff.
// nmax < 0 selects the adaptive policy: extend until tail <= tail_eps or a
// hard cap is hit, in which case tail_ok reports the truncation deficit.
SlotPmf boltzmann_slot_pmf(int p, long nmax, double tail_eps);

}  // namespace uipt::enumeration
