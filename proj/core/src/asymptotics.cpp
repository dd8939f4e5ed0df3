#include <uipt/asymptotics.hpp>

#include <uipt/skeleton.hpp>

#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace uipt::asymptotics {

namespace {

// 15-point Gauss-Kronrod pair on [-1, 1]
constexpr double kKronrodX[8] = {0.0,
                                 0.2077849550078985,
                                 0.4058451513773972,
                                 0.5860872354676911,
                                 0.7415311855993945,
                                 0.8648644233597691,
                                 0.9491079123427585,
                                 0.9914553711208126};
constexpr double kKronrodW[8] = {0.2094821410847278, 0.2044329400752989, 0.1903505780647854,
                                 0.1690047266392679, 0.1406532597155259, 0.1047900103222502,
                                 0.0630920926299786, 0.0229353220105292};
constexpr double kGaussW[4] = {0.4179591836734694, 0.3818300505051189, 0.2797053914892767,
                               0.1294849661688697};

struct GkEstimate {
  double value;
  double error;
};

GkEstimate gk15(const std::function<double(double)>& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fc = f(c);
  double kron = kKronrodW[0] * fc;
  double gauss = kGaussW[0] * fc;
  for (int i = 1; i < 8; ++i) {
    double x = h * kKronrodX[i];
    double fsum = f(c - x) + f(c + x);
    kron += kKronrodW[i] * fsum;
    if (i % 2 == 0) gauss += kGaussW[i / 2] * fsum;
  }
  return {kron * h, std::abs((kron - gauss) * h)};
}

double adaptive_gk(const std::function<double(double)>& f, double a, double b, double tol, int depth = 0) {
  GkEstimate e = gk15(f, a, b);
  if (e.error < tol || depth > 24) {
    if (depth > 24 && e.error > 1000 * tol) throw std::runtime_error("quadrature did not converge");
    return e.value;
  }
  double m = 0.5 * (a + b);
  return adaptive_gk(f, a, m, tol / 2, depth + 1) + adaptive_gk(f, m, b, tol / 2, depth + 1);
}

}  // namespace

double hull_limit(double lambda, double x) {
  if (lambda < 0.0 || x < 0.0) throw std::domain_error("hull_limit: lambda, x >= 0");
  if (lambda == 0.0 || x == 0.0) return 1.0;
  double w = std::pow(6.0 * lambda, 0.25) * x;
  if (w > 30.0) {
    double lc = w + std::log1p(std::exp(-2.0 * w)) - std::log(2.0);
    return std::exp(1.5 * std::log(3.0) + lc - 1.5 * (2.0 * lc + std::log1p(2.0 * std::exp(-2.0 * lc))));
  }
  double c = std::cosh(w);
  return std::pow(3.0, 1.5) * c / std::pow(c * c + 2.0, 1.5);
}

double hull_cond_limit(double lambda, double x, double ell) {
  if (lambda <= 0.0 || x <= 0.0 || ell <= 0.0) throw std::domain_error("hull_cond_limit: positive arguments");
  double w = std::pow(6.0 * lambda, 0.25) * x;
  double pref = x * x * x * std::pow(6.0 * lambda, 0.75) * std::cosh(w) / std::pow(std::sinh(w), 3.0);
  double coth = 1.0 / std::tanh(w);
  double expo = -ell * (std::sqrt(6.0 * lambda) * (coth * coth - 2.0 / 3.0) - 1.0 / (x * x));
  return pref * std::exp(expo);
}

double slice_limit(double x, double ell, const std::vector<double>& ells, const std::vector<double>& lambdas) {
  if (ells.size() != lambdas.size() || ells.empty()) throw std::invalid_argument("slice_limit: arc mismatch");
  double total = 0.0;
  for (double e : ells) total += e;
  if (std::abs(total - ell) > 1e-9 * std::max(1.0, ell)) throw std::invalid_argument("slice_limit: arcs must sum to ell");
  double sum = 0.0, expo = 0.0;
  for (size_t i = 0; i < ells.size(); ++i) {
    double w = std::pow(6.0 * lambdas[i], 0.25) * x;
    sum += (ells[i] / ell) * x * x * x * std::pow(6.0 * lambdas[i], 0.75) * std::cosh(w) /
           std::pow(std::sinh(w), 3.0);
    double coth = 1.0 / std::tanh(w);
    expo += -ells[i] * (std::sqrt(6.0 * lambdas[i]) * (coth * coth - 2.0 / 3.0) - 1.0 / (x * x));
  }
  return sum * std::exp(expo);
}

XiLaplace xi_laplace(double lambda, double abs_tol) {
  if (lambda <= 0.0) throw std::domain_error("xi_laplace: lambda > 0");
  // substitution u = 1/x then u = v^2: integral of
  // (2/sqrt(2 pi)) v^2 exp(-v^2/2 - lambda/v^2) dv over (0, inf);
  // the second substitution removes the sqrt endpoint singularity.
  const double pref = 2.0 / std::sqrt(2.0 * std::acos(-1.0));
  auto f = [&](double v) {
    return v <= 0.0 ? 0.0 : pref * v * v * std::exp(-0.5 * v * v - lambda / (v * v));
  };
  double upper = std::sqrt(2.0 * (-2.0 * std::log(abs_tol) + 10.0));
  XiLaplace out;
  out.quadrature = adaptive_gk(f, 0.0, upper, abs_tol);
  double sq = std::sqrt(2.0 * lambda);
  out.cand_sqrt = (1.0 + sq) * std::exp(-sq);
  out.cand_printed = (1.0 + sq) * std::exp(-2.0 * lambda);
  out.dev_sqrt = std::abs(out.quadrature - out.cand_sqrt);
  out.dev_printed = std::abs(out.quadrature - out.cand_printed);
  return out;
}

double hulldiff_limit(double lambda, double delta) {
  if (lambda <= 0.0 || delta <= 0.0) throw std::domain_error("hulldiff_limit: positive arguments");
  double z = (2.0 / 3.0) * delta * std::sqrt(6.0 * lambda);
  return std::exp(-z) * (z + 1.0);
}

HullDiffCheck hulldiff_finite_check(double ell, double delta, double lambda, int n) {
  if (!(ell > delta && delta > 0.0) || lambda <= 0.0 || n < 2)
    throw std::invalid_argument("hulldiff_finite_check: need ell > delta > 0, lambda > 0, n >= 2");
  long p = static_cast<long>(ell * n * n);
  long q = static_cast<long>((ell - delta) * n * n);
  if (p > 10000) throw std::invalid_argument("hulldiff_finite_check: series order beyond envelope");
  if (q < 1) throw std::invalid_argument("hulldiff_finite_check: delta too close to ell");
  double s = std::exp(-lambda / (static_cast<double>(n) * n * n * n));
  double t = skeleton::t_from_s(s);
  Series<double> ft = add_const(negate(skeleton::one_minus_iterate_series<double>(t, 1, static_cast<int>(p))), 1.0);
  Series<double> f1 = add_const(negate(skeleton::one_minus_iterate_series<double>(1.0, 1, static_cast<int>(p))), 1.0);
  double ct = powi(ft, q).coeff(p);
  double c1 = powi(f1, q).coeff(p);
  if (!(ct > 0.0) || !(c1 > 0.0)) throw std::overflow_error("hulldiff_finite_check: coefficient underflow");
  HullDiffCheck out;
  out.finite = std::exp((q - p) * std::log(t) + std::log(ct) - std::log(c1));
  out.limit = hulldiff_limit(lambda, delta);
  out.rel_gap = std::abs(out.finite - out.limit) / out.limit;
  return out;
}

void convergence_table_csv(std::ostream& out, const std::vector<long>& scales,
                           const std::vector<double>& finite, const std::vector<double>& limit) {
  out << "R,finite,limit,rel_gap\n";
  for (size_t i = 0; i < scales.size(); ++i) {
    double gap = std::abs(finite[i] - limit[i]) / std::abs(limit[i]);
    out << scales[i] << "," << double_to_string(finite[i]) << "," << double_to_string(limit[i]) << ","
        << double_to_string(gap) << "\n";
  }
}

}  // namespace uipt::asymptotics
