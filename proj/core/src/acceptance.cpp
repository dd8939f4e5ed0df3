#include <uipt/acceptance.hpp>

#include <uipt/asymptotics.hpp>
#include <uipt/enumeration.hpp>
#include <uipt/laws.hpp>
#include <uipt/sampler.hpp>
#include <uipt/skeleton.hpp>
#include <uipt/verify.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

namespace uipt::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << what;
    }
  }
  void note(const std::string& what) {
    if (detail.tellp() > 0) detail << "; ";
    detail << what;
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// ---- criterion 1: defining equations, exact -------------------------------

Check criterion_defining_equations() {
  Check c;
  {
    Series<Rat> h = enumeration::h_series<Rat>(200);
    Series<Rat> x2 = shift_up(Series<Rat>::constant(Rat(1), 198), 2);
    Series<Rat> resid = sub(x2, mul(mul(h, h), add_const(scale(h, Rat(-8)), Rat(1))));
    bool zero = true;
    for (int i = 0; i <= resid.order(); ++i) zero = zero && sgn(resid[i]) == 0;
    c.require(zero, "h residual not identically zero at order 200");
  }
  {
    enumeration::TriangulationCounts counts;
    counts.warm(22, 42);
    std::vector<Series<Rat>> a;
    for (int k = 0; k <= 20; ++k) a.push_back(counts.boundary_series(k + 1, 41));
    bool ok = true;
    for (int k = 0; k <= 19 && ok; ++k) {
      Series<Rat> rhs = shift_up(a[k + 1].truncated(40), 1);
      for (int i = 0; i <= k; ++i) rhs = add(rhs, mul(a[i], a[k - i]).truncated(rhs.order()));
      if (k == 1) rhs = add_const(rhs, Rat(1));
      Series<Rat> lhs = a[k].truncated(rhs.order());
      for (int n = 0; n <= std::min(40, rhs.order()); ++n) ok = ok && lhs[n] == rhs[n];
    }
    c.require(ok, "Tutte identity failed at orders (40,20)");
  }
  return c;
}

// ---- criterion 2: constants at the singularity ----------------------------

Check criterion_constants() {
  Check c;
  double h_rho = enumeration::h_at_rho_estimate(10000);
  c.require(std::abs(h_rho - 1.0 / 12.0) < 1e-4, "h(rho) = " + fmt(h_rho));
  double t_ra = enumeration::t_rho_alpha_partial(10000);
  double target = enumeration::t_rho_alpha_exact().to_double();
  c.require(std::abs(t_ra - target) < 1e-4, "T(rho,alpha) = " + fmt(t_ra));
  c.note("h(rho)-1/12 = " + fmt(h_rho - 1.0 / 12.0) + ", T(rho,alpha) gap = " + fmt(t_ra - target));
  return c;
}

// ---- criterion 3: offspring law, two exact routes -------------------------

Check criterion_offspring_routes() {
  Check c;
  Series<Rat> closed = skeleton::phi_series_closed<Rat>(100);
  Series<Rat> from_counts = skeleton::phi_series_from_counts(100);
  bool eq = true;
  for (int i = 0; i <= 100; ++i) eq = eq && closed[i] == from_counts[i];
  c.require(eq, "theta route disagreement within order 100");
  c.require(closed[0] == rat_of(3, 4), "theta(0) != 3/4");
  c.require(closed[1] == rat_of(1, 8), "theta(1) != 1/8");
  double prev = 0.0;
  bool monotone = true, below = true;
  for (int n : {10, 30, 60, 100}) {
    double mean = 0.0;
    for (int k = 1; k <= n; ++k) mean += k * RingOps<Rat>::to_double(closed[k]);
    monotone = monotone && mean > prev;
    below = below && mean < 1.0;
    prev = mean;
  }
  c.require(monotone && below, "partial means of theta not increasing toward 1");
  c.note("partial mean at 100 = " + fmt(prev));
  return c;
}

// ---- criterion 4: iterate closed form vs functional composition -----------

Check criterion_iterate_identity() {
  Check c;
  double worst = 0.0;
  for (double t : {0.3, 0.6, 0.9, 1.0}) {
    for (int r = 0; r <= 30; ++r) {
      for (int i = 0; i < 50; ++i) {
        double u = i / 50.0;
        double by_steps = u;
        for (int k = 0; k < r; ++k) by_steps = skeleton::phi_t_eval(t, by_steps);
        double closed = skeleton::iterate_closed(t, r, u);
        worst = std::max(worst, std::abs(by_steps - closed));
      }
    }
  }
  c.require(worst <= 1e-10, "max deviation " + fmt(worst));
  c.note("max |closed - composed| = " + fmt(worst));
  return c;
}

// ---- criterion 5: perimeter law -------------------------------------------

Check criterion_perimeter_law() {
  Check c;
  double worst = 0.0;
  for (long r = 1; r <= 20; ++r) {
    laws::PerimeterPmf pmf = laws::perimeter_pmf(r, -1, 1e-12);
    double total = 0.0;
    for (double p : pmf.probs) total += p;
    worst = std::max(worst, std::abs(total - 1.0));
  }
  c.require(worst <= 1e-10, "perimeter law normalization off by " + fmt(worst));

  bool exact_ok = true;
  for (int r = 1; r <= 6 && exact_ok; ++r) {
    Series<Rat> f = add_const(negate(skeleton::one_minus_iterate_series<Rat>(Rat(1), r, 1)), Rat(1));
    Rat rp1(r + 1);
    Rat closed_base = Rat(1) - Rat(1) / (rp1 * rp1);
    for (long q = 1; q <= 30 && exact_ok; ++q) {
      // coefficient route: (alpha^q C(q) / (alpha C(1))) (1/q) [u] (phi^{{r}})^q
      Rat coeff = powi(f, q).coeff(1);
      mpz_class bq;
      mpz_bin_uiui(bq.get_mpz_t(), 2 * q, q);
      Rat pref = Rat(bq) * Rat(q) / 2;  // alpha^{q-1} C(q)/C(1) = (1/4)^{q-1} binom(2q,q) q/2
      for (long i = 0; i < q - 1; ++i) pref /= 4;
      Rat route = pref / Rat(q) * coeff;
      // closed form: pref * closed_base^{q-1} / (r+1)^3
      Rat base_pow(1);
      for (long i = 0; i < q - 1; ++i) base_pow *= closed_base;
      Rat closed = pref * base_pow / (rp1 * rp1 * rp1);
      exact_ok = route == closed;
    }
  }
  c.require(exact_ok, "coefficient route != closed form (exact)");
  c.note("max |sum-1| over r<=20: " + fmt(worst));
  return c;
}

// ---- criterion 6: Theorem two-route identity -------------------------------

Check criterion_two_routes() {
  Check c;
  double worst = 0.0;
  for (int i = 1; i <= 20; ++i) {
    double s = i / 20.5;
    for (int r = 0; r < 20; ++r)
      worst = std::max(worst,
                       std::abs(laws::hull_volume_gf_closed(s, r) - laws::hull_volume_gf_iterate(s, r)));
  }
  c.require(worst <= 1e-12, "two-route gap " + fmt(worst));
  c.note("max gap = " + fmt(worst));
  return c;
}

// ---- criterion 7: Monte Carlo conformance ----------------------------------

Check criterion_monte_carlo(const Options& opt) {
  Check c;
  sampler::SamplerContext ctx;
  for (int r : {1, 2, 3, 4}) {
    struct TrialOut {
      long volume;
      long perim;
    };
    std::vector<TrialOut> outs = sampler::run_trials<TrialOut>(
        opt.mc_trials, opt.workers, opt.seed, [&](long, sampler::RngStream& rng) {
          sampler::HullSample h = sampler::sample_hull(ctx, r, rng);
          return TrialOut{h.volume, h.traj.p.back()};
        });
    std::vector<long> volumes(outs.size());
    for (size_t i = 0; i < outs.size(); ++i) volumes[i] = outs[i].volume;
    for (double s : {0.5, 0.9, 0.99}) {
      verify::GfEstimate est = verify::estimate_gf(volumes, s, opt.seed);
      double exact = laws::hull_volume_gf_closed(s, r);
      bool ok = std::abs(est.estimate - exact) <= 3.0 * est.std_error;
      c.require(ok, "r=" + std::to_string(r) + " s=" + fmt(s) + ": |" + fmt(est.estimate) + "-" + fmt(exact) +
                        "| > 3SE=" + fmt(3.0 * est.std_error));
    }
    if (r <= 3) {
      laws::PerimeterPmf pmf = laws::perimeter_pmf(r, -1, 1e-13);
      std::vector<long> hist;
      for (const auto& o : outs) {
        if (o.perim > static_cast<long>(hist.size())) hist.resize(o.perim, 0);
        ++hist[o.perim - 1];
      }
      std::vector<double> probs = pmf.probs;  // index q-1
      verify::ChiSquareResult chi = verify::chi_square_pmf(hist, probs);
      c.require(chi.p_value > 1e-3, "perimeter chi-square p=" + fmt(chi.p_value) + " at r=" + std::to_string(r));
      if (r == 3) c.note("chi2(r=3) p = " + fmt(chi.p_value));
    }
  }
  return c;
}

// ---- criterion 8: mixture and Chapman-Kolmogorov ---------------------------

Check criterion_mixture() {
  Check c;
  double worst = 0.0;
  for (int r : {1, 2, 3, 4}) {
    laws::PerimeterPmf pmf = laws::perimeter_pmf(r, -1, 1e-13);
    for (double s : {0.5, 0.9}) {
      double mix = 0.0;
      for (long q = 1; q <= static_cast<long>(pmf.probs.size()); ++q)
        mix += pmf.prob(q) * laws::layer_volume_gf(s, r, 1, q);
      worst = std::max(worst, std::abs(mix - laws::hull_volume_gf_closed(s, r)));
    }
  }
  c.require(worst <= 1e-8, "mixture identity off by " + fmt(worst));

  double worst_ck = 0.0;
  for (int p : {1, 2, 5}) {
    for (long q : {1L, 3L, 7L}) {
      double two = laws::perimeter_transition(p, q, 2);
      double sum = 0.0;
      double cum = 0.0;
      for (long m = 1; m <= 4096; ++m) {
        double step = laws::perimeter_transition(p, m, 1);
        cum += step;
        sum += step * laws::perimeter_transition(static_cast<int>(m), q, 1);
        if (1.0 - cum < 1e-12) break;
      }
      worst_ck = std::max(worst_ck, std::abs(two - sum));
    }
  }
  c.require(worst_ck <= 1e-8, "Chapman-Kolmogorov off by " + fmt(worst_ck));
  c.note("mixture gap " + fmt(worst) + ", CK gap " + fmt(worst_ck));
  return c;
}

// ---- criterion 9: slices ----------------------------------------------------

// Brute-force slice generating function for r = 1 from the skeleton measure:
// forests in F'(1,1,q) have exactly one root with one child; slots carry
// truncated Boltzmann weights with certified tails.
double slice_gf_bruteforce_r1(long q, const std::vector<long>& arcs, const std::vector<double>& s,
                              double* err_bound) {
  const int trunc = 420;
  // T_p(rho z) over doubles keeps the coefficients |T_{n,p}| rho^n bounded.
  static const std::vector<Series<double>> scaled = enumeration::boundary_scaled_series(3, trunc);
  // w_s(c) = rho s alpha^{c-1} T_{c+2}(rho s); remainder of the truncated
  // evaluation is bounded by s^trunc times the exact tail mass at rho.
  auto slot_weight = [&](int cc, double sv, double& rem) {
    const Series<double>& t = scaled[cc + 1];  // T_{c+2}(rho z)
    double acc = 0.0, zn = 1.0;
    double partial_at_rho = 0.0;
    for (int n = 0; n <= trunc; ++n) {
      acc += t[n] * zn;
      partial_at_rho += t[n];
      zn *= sv;
    }
    double full = enumeration::t_p_at_rho_d(cc + 2);
    double alpha_pow = std::pow(enumeration::alpha_d(), cc - 1);
    double rho = enumeration::rho_d();
    rem = rho * sv * alpha_pow * std::max(0.0, full - partial_at_rho) * std::pow(sv, trunc);
    return rho * sv * alpha_pow * acc;
  };
  // arc index of tree j (0-based) when blocks start at tree 1
  std::vector<int> arc_of(q);
  {
    long pos = 0;
    for (size_t j = 0; j < arcs.size(); ++j)
      for (long k = 0; k < arcs[j]; ++k) arc_of[pos++] = static_cast<int>(j);
  }
  double total = 0.0, err = 0.0;
  for (long kappa = 0; kappa < q; ++kappa) {  // which root carries the single child
    double w = 1.0, werr = 0.0;
    for (long j = 0; j < q; ++j) {
      double rem = 0.0;
      double wj = slot_weight(j == kappa ? 1 : 0, s[arc_of[j]], rem);
      werr += rem;  // all factors lie in (0,1], so remainders add up safely
      w *= wj;
    }
    total += w;
    err += werr;
  }
  // prefactor (alpha^q C(q) / (alpha C(1))) / q and normalization by P(|dB_1| = q)
  double lnpref = (1 - static_cast<double>(q)) * std::log(4.0) +
                  (std::lgamma(2.0 * q + 1.0) - 2.0 * std::lgamma(q + 1.0)) + std::log(q / 2.0) -
                  std::log(static_cast<double>(q));
  double norm = laws::perimeter_prob(1, q);
  if (err_bound) *err_bound = err * std::exp(lnpref) / norm;
  return total * std::exp(lnpref) / norm;
}

Check criterion_slices(const Options& opt) {
  Check c;
  // (a) n = 1 reduces to the conditioned hull generating function
  double worst = 0.0;
  for (long r : {1L, 2L, 5L}) {
    for (long q : {1L, 3L, 8L}) {
      for (double s : {0.5, 0.9, 0.99}) {
        double lhs = laws::slice_gf(r, q, {q}, {s}) * s;
        double rhs = laws::layer_volume_gf(s, static_cast<int>(r), 1, q);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  }
  c.require(worst <= 1e-12, "n=1 reduction gap " + fmt(worst));

  // (b) brute-force forest enumeration at r = 1, q <= 3
  double worst_bf = 0.0, bf_err = 0.0;
  for (long q = 1; q <= 3; ++q) {
    std::vector<std::vector<long>> arc_choices;
    if (q == 1) arc_choices = {{1}};
    if (q == 2) arc_choices = {{2}, {1, 1}};
    if (q == 3) arc_choices = {{3}, {1, 2}, {2, 1}};
    for (const auto& arcs : arc_choices) {
      std::vector<double> s;
      for (size_t j = 0; j < arcs.size(); ++j) s.push_back(j % 2 == 0 ? 0.8 : 0.9);
      double eb = 0.0;
      double bf = slice_gf_bruteforce_r1(q, arcs, s, &eb);
      double ex = laws::slice_gf(1, q, arcs, s);
      worst_bf = std::max(worst_bf, std::abs(bf - ex));
      bf_err = std::max(bf_err, eb);
    }
  }
  c.require(worst_bf <= 1e-8, "brute-force mismatch " + fmt(worst_bf));
  c.require(bf_err <= 1e-8, "brute-force truncation bound too large: " + fmt(bf_err));

  // (c) Monte Carlo joint slice GF at r=2, q=4, arcs (1,3)
  sampler::SamplerContext ctx;
  const std::vector<long> arcs = {1, 3};
  const std::vector<double> svals = {0.8, 0.9};
  std::vector<std::vector<long>> stats = sampler::run_trials<std::vector<long>>(
      opt.mc_trials, opt.workers, opt.seed, [&](long, sampler::RngStream& rng) {
        return sampler::sample_slices(ctx, 2, 4, arcs, rng).stats;
      });
  verify::GfEstimate est = verify::estimate_joint_gf(stats, svals, opt.seed);
  double exact = laws::slice_gf(2, 4, arcs, svals);
  c.require(std::abs(est.estimate - exact) <= 3.0 * est.std_error,
            "slice MC |" + fmt(est.estimate) + "-" + fmt(exact) + "| > 3SE=" + fmt(3.0 * est.std_error));
  c.note("slice MC gap " + fmt(est.estimate - exact) + " (3SE " + fmt(3 * est.std_error) + ")");
  return c;
}

// ---- criterion 10: scaling-limit ladders -----------------------------------

Check criterion_scaling_ladders() {
  Check c;
  const std::vector<long> ladder = {25, 50, 100, 200};
  auto check_ladder = [&](const std::string& name, const std::function<double(long)>& finite, double limit) {
    double prev = 1e300;
    double final_gap = 0.0;
    bool monotone = true;
    for (long R : ladder) {
      double gap = std::abs(finite(R) - limit) / std::abs(limit);
      monotone = monotone && gap < prev;
      prev = gap;
      final_gap = gap;
    }
    c.require(monotone, name + ": gaps not decreasing along the ladder");
    c.require(final_gap < 0.05, name + ": final gap " + fmt(final_gap));
    c.note(name + " final gap " + fmt(final_gap));
  };

  const double lambda = 1.0, x = 1.0, ell = 1.0;
  check_ladder("hull",
               [&](long R) {
                 double s = std::exp(-lambda / (static_cast<double>(R) * R * R * R));
                 return laws::hull_volume_gf_closed(s, static_cast<long>(x * R));
               },
               asymptotics::hull_limit(lambda, x));
  check_ladder("hull-cond",
               [&](long R) {
                 double s = std::exp(-lambda / (static_cast<double>(R) * R * R * R));
                 return laws::layer_volume_gf(s, static_cast<int>(x * R), 1, static_cast<long>(ell * R * R));
               },
               asymptotics::hull_cond_limit(lambda, x, ell));
  const std::vector<double> ells = {0.5, 0.5};
  const std::vector<double> lambdas = {1.0, 2.0};
  check_ladder("slice",
               [&](long R) {
                 std::vector<long> arcs = {static_cast<long>(ells[0] * R * R), static_cast<long>(ells[1] * R * R)};
                 std::vector<double> svals = {std::exp(-lambdas[0] / (static_cast<double>(R) * R * R * R)),
                                              std::exp(-lambdas[1] / (static_cast<double>(R) * R * R * R))};
                 return laws::slice_gf(static_cast<long>(x * R), arcs[0] + arcs[1], arcs, svals);
               },
               asymptotics::slice_limit(x, 1.0, ells, lambdas));
  return c;
}

// ---- criterion 11: jump law, finite size ------------------------------------

Check criterion_hulldiff() {
  Check c;
  double prev = 1e300;
  bool monotone = true;
  double final_gap = 0.0;
  for (int n : {20, 40, 60}) {
    asymptotics::HullDiffCheck chk = asymptotics::hulldiff_finite_check(1.0, 0.3, 1.0, n);
    monotone = monotone && chk.rel_gap < prev;
    prev = chk.rel_gap;
    final_gap = chk.rel_gap;
  }
  c.require(monotone, "gaps not decreasing along n in {20,40,60}");
  c.require(final_gap < 0.05, "gap at n=60 is " + fmt(final_gap));
  c.note("gap at n=60: " + fmt(final_gap));
  return c;
}

// ---- criterion 12: xi transform resolution ----------------------------------

Check criterion_xi() {
  Check c;
  for (double lambda : {0.25, 1.0, 4.0}) {
    asymptotics::XiLaplace xi = asymptotics::xi_laplace(lambda);
    bool sqrt_match = xi.dev_sqrt <= 1e-6;
    bool printed_match = xi.dev_printed <= 1e-6;
    c.require(sqrt_match != printed_match,
              "lambda=" + fmt(lambda) + ": candidates not resolved (dev " + fmt(xi.dev_sqrt) + " vs " +
                  fmt(xi.dev_printed) + ")");
    c.require(sqrt_match, "lambda=" + fmt(lambda) + ": quadrature does not match (1+sqrt(2l))e^{-sqrt(2l)}");
  }
  c.note("quadrature matches (1+sqrt(2l))e^{-sqrt(2l)}; the printed e^{-2l} exponent does not fit");
  double worst = 0.0;
  for (auto [lambda, delta] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {0.5, 0.7}, {2.0, 0.3}}) {
    double lhs = asymptotics::hulldiff_limit(lambda, delta);
    double rhs = asymptotics::xi_laplace(lambda * (4.0 / 3.0) * delta * delta).quadrature;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  c.require(worst <= 1e-6, "hulldiff_limit vs xi transform gap " + fmt(worst));
  return c;
}

// ---- criterion 13: determinism ----------------------------------------------

Check criterion_determinism(const Options& opt) {
  Check c;
  auto run = [&](int workers) {
    sampler::SamplerContext ctx;
    return sampler::run_trials<long>(2000, workers, 7, [&](long, sampler::RngStream& rng) {
      return sampler::sample_hull(ctx, 3, rng).volume;
    });
  };
  std::vector<long> a = run(1);
  std::vector<long> b = run(std::max(3, opt.workers));
  std::vector<long> a2 = run(1);
  c.require(a == b, "results depend on worker count");
  c.require(a == a2, "results not reproducible across runs");
  return c;
}

}  // namespace

std::vector<CriterionResult> run_all(std::ostream& out, const Options& opt) {
  std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
      {"defining equations exact (h, Tutte)", [] { return criterion_defining_equations(); }},
      {"constants h(rho), T(rho,alpha)", [] { return criterion_constants(); }},
      {"offspring law two routes, theta(0), theta(1)", [] { return criterion_offspring_routes(); }},
      {"iterate closed form vs composition", [] { return criterion_iterate_identity(); }},
      {"perimeter law normalization + exact coefficient route", [] { return criterion_perimeter_law(); }},
      {"hull GF two-route identity", [] { return criterion_two_routes(); }},
      {"Monte Carlo conformance (seed 42)", [&] { return criterion_monte_carlo(opt); }},
      {"mixture identity + Chapman-Kolmogorov", [] { return criterion_mixture(); }},
      {"slices: reduction, brute force, MC", [&] { return criterion_slices(opt); }},
      {"scaling-limit ladders", [] { return criterion_scaling_ladders(); }},
      {"jump law finite-size check", [] { return criterion_hulldiff(); }},
      {"xi transform resolution", [] { return criterion_xi(); }},
      {"sampler determinism", [&] { return criterion_determinism(opt); }},
  };

  std::vector<CriterionResult> results;
  results.reserve(criteria.size());
  for (size_t i = 0; i < criteria.size(); ++i) {
    auto start = Clock::now();
    CriterionResult r;
    r.index = static_cast<int>(i) + 1;
    r.name = criteria[i].first;
    try {
      Check c = criteria[i].second();
      r.pass = c.pass;
      r.detail = c.detail.str();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    out << "[" << (r.index < 10 ? " " : "") << r.index << "/13] " << (r.pass ? "PASS" : "FAIL") << "  "
        << r.name;
    if (!r.detail.empty()) out << "  (" << r.detail << ")";
    out << "  [" << fmt(r.seconds) << "s]\n";
    out.flush();
    results.push_back(std::move(r));
  }
  int nfail = failures(results);
  out << (nfail == 0 ? "ALL CRITERIA PASSED" : "FAILURES: " + std::to_string(nfail)) << "\n";
  return results;
}

}  // namespace uipt::acceptance
