#pragma once

// Closed-form scaling-limit functionals of hull volumes, conditioned hulls,
// slices, and the hull-volume jump law, together with finite-size
// convergence diagnostics computed from the exact formulas.

#include <iosfwd>
#include <vector>

namespace uipt::asymptotics {

// lim_R E[exp(-lambda |B_{xR}| / R^4)] = 3^{3/2} cosh((6 lambda)^{1/4} x) / (cosh^2 + 2)^{3/2}
double hull_limit(double lambda, double x);

// conditioned on |dB_{xR}| = ell R^2 (Laplace transform of conditioned hull volume)
double hull_cond_limit(double lambda, double x, double ell);

// joint slice limit with arcs ell_1..ell_n and exponents lambda_1..lambda_n
double slice_limit(double x, double ell, const std::vector<double>& ells, const std::vector<double>& lambdas);

struct XiLaplace {
  double quadrature = 0.0;     // adaptive quadrature of the stated density
  double cand_sqrt = 0.0;      // (1 + sqrt(2 lambda)) exp(-sqrt(2 lambda))
  double cand_printed = 0.0;   // (1 + sqrt(2 lambda)) exp(-2 lambda), as printed
  double dev_sqrt = 0.0;       // |quadrature - cand_sqrt|
  double dev_printed = 0.0;    // |quadrature - cand_printed|
};

// E[e^{-lambda xi}] for the density (2 pi x^5)^{-1/2} e^{-1/(2x)}, by
// Gauss-Kronrod adaptive quadrature after the substitution u = 1/x; both
// closed-form candidates are reported so the data resolves the discrepancy.
XiLaplace xi_laplace(double lambda, double abs_tol = 1e-10);

// e^{-(2/3) delta sqrt(6 lambda)} ((2/3) delta sqrt(6 lambda) + 1); must equal
// the xi transform at lambda (4/3) delta^2.
double hulldiff_limit(double lambda, double delta);

struct HullDiffCheck {
  double finite = 0.0;
  double limit = 0.0;
  double rel_gap = 0.0;
};

// Finite-n jump-law ratio t^{q_n - p_n} [u^{p_n}] phi_t^{q_n} / [u^{p_n}] phi_1^{q_n}
// at s = e^{-lambda/n^4}, p_n = floor(ell n^2), q_n = floor((ell-delta) n^2),
// against the closed-form limit.
HullDiffCheck hulldiff_finite_check(double ell, double delta, double lambda, int n);

// CSV rows R,finite,limit,rel_gap for a ladder of scale parameters.
void convergence_table_csv(std::ostream& out, const std::vector<long>& scales,
                           const std::vector<double>& finite, const std::vector<double>& limit);

}  // namespace uipt::asymptotics
