#include <uipt/enumeration.hpp>

#include <cmath>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>

namespace uipt::enumeration {

namespace {

constexpr double kLn3 = 1.0986122886681098;
constexpr double kLn8 = 2.0794415416798357;
// ln rho = -ln(12 sqrt3)
const double kLnRho = -std::log(12.0 * std::sqrt(3.0));

double lbinom(double top, double low) {
  // binom(top, low) with integer low >= 0 and top - low > -1
  return std::lgamma(top + 1.0) - std::lgamma(low + 1.0) - std::lgamma(top - low + 1.0);
}

// generalized binomial binom(a, k) for half-integer a, exact
Rat rat_binom(const Rat& a, int k) {
  Rat acc(1);
  for (int j = 0; j < k; ++j) acc *= (a - j) / Rat(j + 1);
  return acc;
}

}  // namespace

Series<double> h_scaled_series(int order) {
  return h_series_from_base(scale(Series<double>::identity(order), rho_d()));
}

double h_at_rho_estimate(int terms) {
  Series<double> h = h_scaled_series(terms);
  double sum = 0.0;
  for (int n = 0; n <= terms; ++n) sum += h[n];
  // fit c in h_n rho^n ~ c n^{-3/2} over the top half of the range
  double c = 0.0;
  int cnt = 0;
  int step = std::max(1, terms / 256);
  for (int n = terms / 2; n <= terms; n += step) {
    c += h[n] * std::pow(static_cast<double>(n), 1.5);
    ++cnt;
  }
  c /= cnt;
  // Euler-Maclaurin tail of sum_{n > terms} n^{-3/2}
  double tail = 2.0 / std::sqrt(terms + 0.5);
  return sum + c * tail;
}

Series<double> t_disk_scaled_series(int order) {
  // T(rho z, 0) = (6 H^2 + rho z - H) / (2 rho z) with H = h(rho z)
  Series<double> h = h_scaled_series(order + 1);
  Series<double> base = scale(Series<double>::identity(order + 1), rho_d());
  Series<double> num = add(scale(mul(h, h), 6.0), sub(base, h));
  return scale(shift_down(num, 1), 0.5 / rho_d());
}

void TriangulationCounts::warm(int pmax, int order) {
  std::unique_lock lk(mu_);
  ensure_locked(pmax, order);
}

void TriangulationCounts::ensure_locked(int pmax, int order) {
  int need_master = order + pmax - 1;
  if (need_master > master_order_) {
    // order growth invalidates the ladder; restart from the disk series
    master_order_ = std::max(need_master, master_order_ > 0 ? 2 * master_order_ : 16);
    a_.clear();
  }
  if (a_.empty()) a_.push_back(t_disk_series<Rat>(master_order_));
  // p growth is incremental: each new boundary series reuses the ladder
  while (static_cast<int>(a_.size()) < pmax) {
    int k = static_cast<int>(a_.size()) - 1;
    Series<Rat> s(a_[k].order());  // S_k = sum_{i+j=k} a_i a_j, using symmetry
    for (int i = 0; 2 * i <= k; ++i) {
      Series<Rat> prod = mul(a_[i], a_[k - i]);
      s = 2 * i == k ? add(s, prod) : add(s, scale(prod, Rat(2)));
    }
    Series<Rat> num = sub(a_[k].truncated(s.order()), s);
    if (k == 1) num = add_const(num, Rat(-1));
    a_.push_back(shift_down(num, 1));  // exact division by x, checked
  }
}

Series<Rat> TriangulationCounts::boundary_series(int p, int order) {
  if (p < 1 || order < 0) throw std::invalid_argument("boundary_series: need p >= 1, order >= 0");
  {
    std::shared_lock lk(mu_);
    if (static_cast<int>(a_.size()) >= p && a_[p - 1].order() >= order)
      return a_[p - 1].truncated(order);
  }
  std::unique_lock lk(mu_);
  ensure_locked(p, order);
  return a_[p - 1].truncated(order);
}

mpz_class TriangulationCounts::count(int n, int p) {
  if (n < 0 || p < 1) throw std::invalid_argument("count: need n >= 0, p >= 1");
  Rat c = boundary_series(p, n).coeff(n);
  if (c.get_den() != 1) throw std::logic_error("count: non-integer coefficient");
  return c.get_num();
}

void TriangulationCounts::export_csv(std::ostream& out, int nmax, int pmax) {
  out << "n,p,count\n";
  for (int p = 1; p <= pmax; ++p) {
    Series<Rat> tp = boundary_series(p, nmax);
    for (int n = 0; n <= nmax; ++n) out << n << "," << p << "," << tp[n].get_num().get_str() << "\n";
  }
}

std::vector<Series<double>> boundary_scaled_series(int pmax, int order) {
  int m = order + pmax - 1;
  std::vector<Series<double>> a;
  a.reserve(pmax);
  a.push_back(t_disk_scaled_series(m));
  const double inv_rho = 1.0 / rho_d();
  for (int k = 0; k + 1 < pmax; ++k) {
    Series<double> s(a[k].order());
    for (int i = 0; 2 * i <= k; ++i) {
      Series<double> prod = mul(a[i], a[k - i]);
      s = 2 * i == k ? add(s, prod) : add(s, scale(prod, 2.0));
    }
    Series<double> num = sub(a[k].truncated(s.order()), s);
    if (k == 1) num = add_const(num, -1.0);
    a.push_back(scale(shift_down(num, 1), inv_rho));
  }
  return a;
}

Sqrt3 t_p_at_rho(int p) {
  if (p < 1) throw std::invalid_argument("t_p_at_rho: p >= 1");
  // [y^p] (alpha - y)^{3/2} = binom(3/2, p) (-1)^p alpha^{3/2 - p},
  // with alpha^{3/2} = sqrt3 / 72.
  Rat coef = rat_binom(rat_of(3, 2), p);
  if (p % 2 == 1) coef = -coef;
  Rat alpha_pow(1);
  for (int i = 0; i < p; ++i) alpha_pow *= 12;  // alpha^{-p}
  Sqrt3 val = Sqrt3{0, rat_of(1, 72)} * Sqrt3{coef * alpha_pow};
  if (p == 1) val += Sqrt3{rat_of(1, 2)};
  return val;
}

double t_p_at_rho_d(int p) {
  if (p == 1) return t_p_at_rho(1).to_double();
  // T_p(rho) = 3^{p-1/2} (2p-4)! / (2p (p-1)! (p-2)!)
  double ln = (p - 0.5) * kLn3 + std::lgamma(2.0 * p - 3.0) - std::log(2.0 * p) -
              std::lgamma(static_cast<double>(p)) - std::lgamma(p - 1.0);
  return std::exp(ln);
}

double t_rho_alpha_partial(int pmax) {
  double acc = t_p_at_rho(1).to_double();
  double ln_alpha = -std::log(12.0);
  for (int p = 2; p <= pmax; ++p) {
    double ln = (p - 0.5) * kLn3 + std::lgamma(2.0 * p - 3.0) - std::log(2.0 * p) -
                std::lgamma(static_cast<double>(p)) - std::lgamma(p - 1.0) + (p - 1) * ln_alpha;
    acc += std::exp(ln);
  }
  return acc;
}

CConstant c_constant(int p) {
  if (p < 1) throw std::invalid_argument("c_constant: p >= 1");
  // rational part 3^{p-2} p (2p)! / (4 (p!)^2)
  mpz_class f2p, fp;
  mpz_fac_ui(f2p.get_mpz_t(), 2 * p);
  mpz_fac_ui(fp.get_mpz_t(), p);
  Rat r = Rat(f2p) * p / (Rat(4) * fp * fp);
  Rat three_pow(1);
  for (int i = 0; i < std::abs(p - 2); ++i) three_pow *= 3;
  if (p >= 2)
    r *= three_pow;
  else
    r /= three_pow;
  const double two_pi = 2.0 * std::acos(-1.0);
  return {r, r.get_d() / std::sqrt(two_pi)};
}

Rat count_closed_form(int n, int p) {
  if (n < 0 || p < 1) throw std::invalid_argument("count_closed_form: need n >= 0, p >= 1");
  Rat out;
  if (p == 1) {
    if (n == 0) return Rat(0);
    // 2 * 8^{n-1} binom((3n-3)/2, n-1) / (n (n+1))
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), 8, n - 1);
    out = Rat(2) * Rat(pw) * rat_binom(rat_of(3 * n - 3, 2), n - 1) / (Rat(n) * Rat(n + 1));
  } else if (n == 0) {
    mpz_class num, d1, d2;
    mpz_fac_ui(num.get_mpz_t(), 2 * p - 4);
    mpz_fac_ui(d1.get_mpz_t(), p - 1);
    mpz_fac_ui(d2.get_mpz_t(), p - 2);
    out = Rat(num) / (Rat(d1) * Rat(d2));
  } else {
    // 8^{n-1} 4 (2p-1)(2p-3)(2p-4)! / (n (n+2p-1) (p-1)! (p-2)!) * binom(3n/2+p-5/2, n-1)
    mpz_class pw, f, d1, d2;
    mpz_ui_pow_ui(pw.get_mpz_t(), 8, n - 1);
    mpz_fac_ui(f.get_mpz_t(), 2 * p - 4);
    mpz_fac_ui(d1.get_mpz_t(), p - 1);
    mpz_fac_ui(d2.get_mpz_t(), p - 2);
    out = Rat(pw) * 4 * (2 * p - 1) * (2 * p - 3) * Rat(f) * rat_binom(rat_of(3 * n + 2 * p - 5, 2), n - 1) /
          (Rat(n) * Rat(n + 2 * p - 1) * Rat(d1) * Rat(d2));
  }
  if (out.get_den() != 1 || sgn(out) < 0) throw std::logic_error("count_closed_form: not a nonnegative integer");
  return out;
}

double slot_log_prob(int p, long n) {
  if (n < 0) return -std::numeric_limits<double>::infinity();
  if (p == 1) {
    if (n == 0) return -std::numeric_limits<double>::infinity();
    // ln |T_{n,1}| = ln2 + (n-1) ln8 + lnbinom((3n-3)/2, n-1) - ln n - ln(n+1)
    double lt = std::log(2.0) + (n - 1) * kLn8 + lbinom(1.5 * n - 1.5, n - 1.0) - std::log(static_cast<double>(n)) -
                std::log(n + 1.0);
    return lt + n * kLnRho - std::log(t_p_at_rho(1).to_double());
  }
  if (n == 0) {
    // q_0 = 2 p 3^{1/2 - p}
    return std::log(2.0 * p) + (0.5 - p) * kLn3;
  }
  double lt = (n - 1) * kLn8 + std::log(4.0) + std::log(2.0 * p - 1.0) + std::log(2.0 * p - 3.0) +
              std::lgamma(2.0 * p - 3.0) - std::log(static_cast<double>(n)) - std::log(static_cast<double>(n) + 2.0 * p - 1.0) -
              std::lgamma(static_cast<double>(p)) - std::lgamma(p - 1.0) + lbinom(1.5 * n + p - 2.5, n - 1.0);
  double ln_tp = (p - 0.5) * kLn3 + std::lgamma(2.0 * p - 3.0) - std::log(2.0 * p) -
                 std::lgamma(static_cast<double>(p)) - std::lgamma(p - 1.0);
  return lt + n * kLnRho - ln_tp;
}

double h_at_x_d(double x) {
  if (x < 0 || x > rho_d() * (1 + 1e-12)) throw std::domain_error("h_at_x_d: x outside [0, rho]");
  if (x == 0) return 0.0;
  // solve h^2 (1 - 8h) = x^2 on [0, alpha], monotone there
  double lo = 0.0, hi = alpha_d(), target = x * x;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (mid * mid * (1 - 8 * mid) < target ? lo : hi) = mid;
  }
  double h = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {
    double f = h * h * (1 - 8 * h) - target;
    double fp = 2 * h - 24 * h * h;
    if (fp != 0) h -= f / fp;
    if (h < 0) h = 0;
    if (h > alpha_d()) h = alpha_d();
  }
  return h;
}

double t_p_at_x_d(int p, double x) {
  double h = h_at_x_d(x);
  if (p == 1) return x == 0 ? 0.0 : (6 * h * h + x - h) / (2 * x);
  // T_p(x) = B_p (1-8h)^{1/2-p} (1 - (12 - 6/p) h),  B_p = (2p-4)!/((p-1)!(p-2)!)
  double ln_bp = std::lgamma(2.0 * p - 3.0) - std::lgamma(static_cast<double>(p)) - std::lgamma(p - 1.0);
  double ln = ln_bp + (0.5 - p) * std::log1p(-8 * h) + std::log1p(-(12.0 - 6.0 / p) * h);
  return std::exp(ln);
}

double slot_gf(int p, double s) {
  if (s < 0 || s > 1) throw std::domain_error("slot_gf: s in [0,1]");
  if (s == 1) return 1.0;
  if (p == 1) return t_p_at_x_d(1, rho_d() * s) / t_p_at_rho(1).to_double();
  double h = h_at_x_d(rho_d() * s);
  double ln = (0.5 - p) * (std::log1p(-8 * h) - std::log1p(-8 * alpha_d())) +
              std::log1p(-(12.0 - 6.0 / p) * h) - std::log1p(-(12.0 - 6.0 / p) * alpha_d());
  return std::exp(ln);
}

SlotPmf boltzmann_slot_pmf(int p, long nmax, double tail_eps) {
  if (p < 1) throw std::invalid_argument("boltzmann_slot_pmf: p >= 1");
  constexpr long kHardCap = 1L << 22;
  SlotPmf out;
  out.p = p;
  bool adaptive = nmax < 0;
  long cap = adaptive ? 1024 : nmax;
  double cdf = 0.0;
  long n = 0;
  for (;;) {
    for (; n <= cap; ++n) {
      double q = std::exp(slot_log_prob(p, n));
      out.probs.push_back(q);
      cdf += q;
    }
    out.tail = std::max(0.0, 1.0 - cdf);
    if (!adaptive || out.tail <= tail_eps || cap >= kHardCap) break;
    cap = std::min(kHardCap, cap * 4);
  }
  out.tail_ok = out.tail <= tail_eps;
  return out;
}

}  // namespace uipt::enumeration
