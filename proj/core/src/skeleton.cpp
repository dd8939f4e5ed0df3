#include <uipt/skeleton.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace uipt::skeleton {

namespace {

// ln sinh(w) without overflow for large w
double lnsinh(double w) { return w + std::log1p(-std::exp(-2.0 * w)) - std::log(2.0); }
double lncosh(double w) { return w + std::log1p(std::exp(-2.0 * w)) - std::log(2.0); }

// w_r = asinh(sqrt(3(1-t)/(t(1-u)))) + r acosh(sqrt((3-2t)/t)), in log-safe form
double iterate_arg(double t, long r, double u) {
  double z = std::sqrt(3.0 * (1.0 - t) / (t * (1.0 - u)));
  double a = std::sqrt((3.0 - 2.0 * t) / t);
  return std::asinh(z) + r * std::acosh(a);
}

}  // namespace

double t_from_s(double s) {
  if (s < 0.0 || s > 1.0) throw std::domain_error("t_from_s: s must lie in [0,1]");
  if (s == 0.0) return 0.0;
  if (s == 1.0) return 1.0;
  const double target = s * s;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    (mid * mid * (3.0 - 2.0 * mid) < target ? lo : hi) = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 6; ++it) {
    double f = t * t * (3.0 - 2.0 * t) - target;
    double fp = 6.0 * t * (1.0 - t);
    if (fp <= 0.0) break;
    t -= f / fp;
    t = std::min(1.0, std::max(0.0, t));
  }
  if (std::abs(t * t * (3.0 - 2.0 * t) - target) > 1e-14)
    throw std::runtime_error("t_from_s: residual above tolerance");
  return t;
}

Rat theta_exact(int i) {
  // rho alpha^{i-1} T_{i+2}(rho): the sqrt3 parts pair up to a rational.
  Sqrt3 v = enumeration::rho() * enumeration::t_p_at_rho(i + 2);
  Rat alpha_pow(1);
  for (int k = 0; k < std::abs(i - 1); ++k) alpha_pow *= 12;
  Rat scaled;
  if (i >= 1)
    scaled = v.a / alpha_pow;
  else
    scaled = v.a * alpha_pow;
  if (sgn(v.b) != 0) throw std::logic_error("theta_exact: sqrt3 component did not cancel");
  return scaled;
}

double theta_d(int i) {
  // theta(i) = (3/2) binom(2i, i) / (4^i (i+1) (i+2))
  double ln = std::log(1.5) + std::lgamma(2.0 * i + 1.0) - 2.0 * std::lgamma(i + 1.0) -
              i * std::log(4.0) - std::log(i + 1.0) - std::log(i + 2.0);
  return std::exp(ln);
}

Series<Rat> phi_series_from_counts(int order) {
  std::vector<Rat> coeffs;
  coeffs.reserve(order + 1);
  for (int i = 0; i <= order; ++i) coeffs.push_back(theta_exact(i));
  return Series<Rat>(std::move(coeffs));
}

double phi_t_eval(double t, double u) {
  if (t <= 0.0 || t > 1.0) throw std::domain_error("phi_t_eval: t in (0,1]");
  if (u < 0.0 || u > 1.0) throw std::domain_error("phi_t_eval: u in [0,1]");
  if (u >= 1.0 - 1e-12) return 1.0;
  double a = std::sqrt((3.0 - 2.0 * t) / t);
  double d = a / std::sqrt(1.0 - u) + std::sqrt(1.0 + 3.0 * (1.0 - t) / (t * (1.0 - u)));
  return 1.0 - 1.0 / (d * d);
}

double phi_t_prime_eval(double t, double u) {
  // phi_t'(u) = t [ D^{-2} - t (1-u) D^{-3} W^{-1/2} ] with W = 3-2t-tu,
  // D = sqrt(3-2t) + sqrt(W); derived from 1-phi_t = t(1-u)/D^2.
  if (t <= 0.0 || t > 1.0) throw std::domain_error("phi_t_prime_eval: t in (0,1]");
  double w = 3.0 - 2.0 * t - t * u;
  double d = std::sqrt(3.0 - 2.0 * t) + std::sqrt(w);
  return t / (d * d) * (1.0 - t * (1.0 - u) / (d * std::sqrt(w)));
}

double theta_t_d(double t, int i) {
  if (t == 1.0) return theta_d(i);
  double s = t * std::sqrt(3.0 - 2.0 * t);
  double x = enumeration::rho_d() * s;
  double ln_t = std::log(enumeration::rho_d() * s) + (i - 1) * std::log(enumeration::alpha_d() * t);
  int p = i + 2;
  double h = enumeration::h_at_x_d(x);
  double ln_tp = std::lgamma(2.0 * p - 3.0) - std::lgamma(static_cast<double>(p)) - std::lgamma(p - 1.0) +
                 (0.5 - p) * std::log1p(-8.0 * h) + std::log1p(-(12.0 - 6.0 / p) * h);
  return std::exp(ln_t + ln_tp);
}

Series<Rat> phi_t_series_exact(const Rat& t, int order) {
  if (sgn(t) <= 0 || t > 1) throw std::domain_error("phi_t_series_exact: t in (0,1]");
  const Rat s2 = t * t * (3 - 2 * t);
  // R(u)/s^2 with R(u) = s^2 + 3t^2 u^2 - t^3 u^3 + 3 t^3 u - 6 t^2 u
  Series<Rat> radicand(std::max(order + 2, 3));
  radicand.at(0) = Rat(1);
  radicand.at(1) = (3 * t * t * t - 6 * t * t) / s2;
  radicand.at(2) = 3 * t * t / s2;
  radicand.at(3) = -t * t * t / s2;
  Series<Rat> g = sqrt(radicand);  // g(0) = 1
  // A(u) = rho^2 s^2 (g-1) / (2 (alpha t)^3) - (6 alpha^2 t^2 - alpha t) u / (2 (alpha t)^2)
  const Rat alpha = enumeration::alpha();
  const Rat rho2 = rat_of(1, 432);
  const Rat at = alpha * t;
  const Rat term_scale = rho2 * s2 / (2 * at * at * at);
  Series<Rat> a = scale(add_const(g, Rat(-1)), term_scale);
  const Rat linear_term = (6 * alpha * alpha * t * t - at) / (2 * at * at);
  a.at(1) -= linear_term;
  return shift_down(a, 2);  // the u^0 and u^1 terms must cancel exactly
}

Series<double> phi_t_series(double t, int order) {
  if (t <= 0.0 || t > 1.0) throw std::domain_error("phi_t_series: t in (0,1]");
  std::vector<double> coeffs;
  coeffs.reserve(order + 1);
  for (int i = 0; i <= order; ++i) coeffs.push_back(t == 1.0 ? theta_d(i) : theta_t_d(t, i));
  return Series<double>(std::move(coeffs));
}

template <class R>
Series<R> one_minus_iterate_series(const R& t, int r, int order) {
  using Ring = RingOps<R>;
  if (Ring::is_zero(t)) throw std::domain_error("iterate series: t must be positive");
  const int want = order;
  order += 2;  // the first step divides by (1-g_0)^2 = u^2 and costs two orders
  Series<R> g = add_const(negate(Series<R>::identity(order)), Ring::one());  // g_0 = 1 - u
  const R three = Ring::from_int(3);
  const R six = Ring::from_int(6);
  const R five = Ring::from_int(5);
  const R two = Ring::from_int(2);
  const R c32 = three - two * t;      // 3 - 2t
  const R c33 = three - three * t;    // 3 - 3t
  const R c65 = six - five * t;       // 6 - 5t
  for (int k = 0; k < r; ++k) {
    Series<R> w = add_const(scale(g, t), c33);           // 3 - 3t + t g
    Series<R> rad = scale(w, c32);                       // (3-2t)(3-3t+t g)
    Series<R> bracket = sub(add_const(scale(g, t), c65), scale(sqrt(rad), two));
    Series<R> one_minus_g = add_const(negate(g), Ring::one());
    Series<R> den = scale(mul(one_minus_g, one_minus_g), t);
    g = div(mul(g, bracket), den);
  }
  return g.truncated(std::min(want, g.order()));
}

template Series<Rat> one_minus_iterate_series<Rat>(const Rat&, int, int);
template Series<double> one_minus_iterate_series<double>(const double&, int, int);
template Series<Sqrt3> one_minus_iterate_series<Sqrt3>(const Sqrt3&, int, int);

double iterate_closed(double t, long r, double u) {
  if (t <= 0.0 || t > 1.0) throw std::domain_error("iterate_closed: t in (0,1]");
  if (r < 0) throw std::domain_error("iterate_closed: r >= 0");
  if (u >= 1.0 - 1e-12) return 1.0;
  if (r == 0) return u;
  if (t == 1.0) {
    double w = 1.0 / std::sqrt(1.0 - u) + r;
    return 1.0 - 1.0 / (w * w);
  }
  double w = iterate_arg(t, r, u);
  // 1 - 3(1-t)/t * sinh(w)^{-2}, log-safe
  return 1.0 - std::exp(std::log(3.0 * (1.0 - t) / t) - 2.0 * lnsinh(w));
}

double iterate_prime0(double t, long r) {
  if (t <= 0.0 || t > 1.0) throw std::domain_error("iterate_prime0: t in (0,1]");
  if (r < 0) throw std::domain_error("iterate_prime0: r >= 0");
  if (r == 0) return 1.0;
  if (t == 1.0) {
    double w = 1.0 + static_cast<double>(r);
    return 1.0 / (w * w * w);
  }
  double w = iterate_arg(t, r, 0.0);
  double ln = 1.5 * std::log(3.0 * (1.0 - t) / t) - 0.5 * std::log((3.0 - 2.0 * t) / t) -
              3.0 * lnsinh(w) + lncosh(w);
  return std::exp(ln);
}

OffspringLaw::OffspringLaw(double t) : t_(t) {
  if (t <= 0.0 || t > 1.0) throw std::domain_error("OffspringLaw: t in (0,1]");
  extend_locked(64);
}

void OffspringLaw::extend_locked(int k) const {
  int start = static_cast<int>(theta_.size());
  if (k < start) return;
  theta_.reserve(k + 1);
  cdf_.reserve(k + 1);
  for (int i = start; i <= k; ++i) {
    double th;
    if (t_ == 1.0) {
      // theta(i+1)/theta(i) = (2i+1)/(2(i+3))
      th = i == 0 ? 0.75 : theta_.back() * (2.0 * (i - 1) + 1.0) / (2.0 * ((i - 1) + 3.0));
    } else {
      th = theta_t_d(t_, i);
    }
    theta_.push_back(th);
    cdf_.push_back((cdf_.empty() ? 0.0 : cdf_.back()) + th);
  }
}

double OffspringLaw::theta(int k) const {
  std::lock_guard lk(mu_);
  if (k >= static_cast<int>(theta_.size())) extend_locked(std::max(k, 2 * static_cast<int>(theta_.size())));
  return theta_[k];
}

double OffspringLaw::cdf(int k) const {
  std::lock_guard lk(mu_);
  if (k >= static_cast<int>(cdf_.size())) extend_locked(std::max(k, 2 * static_cast<int>(cdf_.size())));
  return cdf_[k];
}

int OffspringLaw::support_size() const {
  std::lock_guard lk(mu_);
  return static_cast<int>(theta_.size());
}

int OffspringLaw::quantile(double u) const {
  std::lock_guard lk(mu_);
  for (;;) {
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it != cdf_.end()) return static_cast<int>(it - cdf_.begin());
    if (1.0 - cdf_.back() < 1e-15) return static_cast<int>(cdf_.size()) - 1;  // double precision exhausted
    extend_locked(2 * static_cast<int>(cdf_.size()));
  }
}

}  // namespace uipt::skeleton
