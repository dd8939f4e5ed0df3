#include <uipt/verify.hpp>

#include <cmath>
#include <stdexcept>

namespace uipt::verify {

GfEstimate estimate_gf(const std::vector<long>& volumes, double s, uint64_t seed) {
  if (volumes.empty()) throw std::invalid_argument("estimate_gf: empty sample");
  if (s < 0.0 || s > 1.0) throw std::domain_error("estimate_gf: s in [0,1]");
  double sum = 0.0, sumsq = 0.0;
  for (long v : volumes) {
    double w = std::pow(s, static_cast<double>(v));
    sum += w;
    sumsq += w * w;
  }
  long n = static_cast<long>(volumes.size());
  double mean = sum / n;
  double var = std::max(0.0, sumsq / n - mean * mean);
  return {s, mean, std::sqrt(var / n), n, seed};
}

GfEstimate estimate_joint_gf(const std::vector<std::vector<long>>& samples, const std::vector<double>& s,
                             uint64_t seed) {
  if (samples.empty()) throw std::invalid_argument("estimate_joint_gf: empty sample");
  double sum = 0.0, sumsq = 0.0;
  for (const auto& vec : samples) {
    if (vec.size() != s.size()) throw std::invalid_argument("estimate_joint_gf: arity mismatch");
    double w = 1.0;
    for (size_t j = 0; j < s.size(); ++j) w *= std::pow(s[j], static_cast<double>(vec[j]));
    sum += w;
    sumsq += w * w;
  }
  long n = static_cast<long>(samples.size());
  double mean = sum / n;
  double var = std::max(0.0, sumsq / n - mean * mean);
  return {s.empty() ? 0.0 : s[0], mean, std::sqrt(var / n), n, seed};
}

namespace {

// continued-fraction / series evaluation of the regularized gamma functions
double gamma_p_series(double a, double x) {
  double ap = a, sum = 1.0 / a, del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
  double b = x + 1.0 - a, c = 1e308, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::domain_error("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

ChiSquareResult chi_square_pmf(const std::vector<long>& histogram, const std::vector<double>& pmf,
                               double min_bin) {
  long n = 0;
  for (long h : histogram) n += h;
  if (n <= 0) throw std::invalid_argument("chi_square_pmf: empty histogram");

  double stat = 0.0;
  int bins = 0;
  double pooled_exp = 0.0;
  long pooled_obs = 0;
  double covered = 0.0;
  for (size_t k = 0; k < pmf.size(); ++k) {
    double e = n * pmf[k];
    long o = k < histogram.size() ? histogram[k] : 0;
    covered += pmf[k];
    if (e < min_bin) {
      pooled_exp += e;
      pooled_obs += o;
      continue;
    }
    stat += (o - e) * (o - e) / e;
    ++bins;
  }
  // observations and exact mass beyond the supplied pmf range join the pooled bin
  for (size_t k = pmf.size(); k < histogram.size(); ++k) pooled_obs += histogram[k];
  pooled_exp += n * std::max(0.0, 1.0 - covered);
  if (pooled_exp >= min_bin) {
    stat += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++bins;
  }
  int dof = bins - 1;
  if (dof < 1) throw std::domain_error("chi_square_pmf: degenerate degrees of freedom");
  return {stat, dof, gamma_q(dof / 2.0, stat / 2.0)};
}

nlohmann::json verdict_json(const std::string& test, double statistic, double p, bool pass, uint64_t seed) {
  nlohmann::json j;
  j["test"] = test;
  j["statistic"] = statistic;
  j["p"] = p;
  j["pass"] = pass;
  j["seed"] = seed;
  return j;
}

}  // namespace uipt::verify
