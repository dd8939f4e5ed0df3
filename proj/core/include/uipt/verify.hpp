#pragma once

// Statistical machinery binding the sampler to the exact laws: generating
// function estimators with standard errors, chi-square goodness of fit.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace uipt::verify {

struct GfEstimate {
  double s = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  long trials = 0;
  uint64_t seed = 0;
};

// Mean and standard error of s^V over sampled volumes.
GfEstimate estimate_gf(const std::vector<long>& volumes, double s, uint64_t seed);

// Joint version: mean of prod_j s_j^{v_j} over sampled vectors.
GfEstimate estimate_joint_gf(const std::vector<std::vector<long>>& samples, const std::vector<double>& s,
                             uint64_t seed);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 0.0;
};

// Pearson chi-square of an empirical histogram against exact probabilities.
// Bins with expected count below min_bin are pooled; the leftover exact
// mass forms one final pooled bin.
ChiSquareResult chi_square_pmf(const std::vector<long>& histogram, const std::vector<double>& pmf,
                               double min_bin = 5.0);

// Regularized upper incomplete gamma Q(a, x); the chi-square tail is
// Q(dof/2, stat/2).
double gamma_q(double a, double x);

nlohmann::json verdict_json(const std::string& test, double statistic, double p, bool pass, uint64_t seed);

}  // namespace uipt::verify
