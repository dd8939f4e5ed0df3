// uipt-lab: batch interface over the exact laws, the skeleton sampler and
// the scaling-limit diagnostics. Results go to stdout as JSON or CSV;
// diagnostics go to stderr. Exit codes: 0 success, 1 computation failure,
// 2 usage error.

#include <uipt/acceptance.hpp>
#include <uipt/asymptotics.hpp>
#include <uipt/cache.hpp>
#include <uipt/enumeration.hpp>
#include <uipt/laws.hpp>
#include <uipt/sampler.hpp>
#include <uipt/skeleton.hpp>
#include <uipt/verify.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;
using namespace uipt;

constexpr const char* kSchema = "uipt-lab/1";

struct CommonOpts {
  std::string format = "json";
  std::string precision = "exact";
  double tail_eps = 1e-9;
  long trials = 10000;
  unsigned long long seed = 42;
  int workers = 1;
};

void emit(const std::string& op, const json& params, json result) {
  result["schema"] = kSchema;
  result["op"] = op;
  result["params"] = params;
  std::cout << result.dump() << "\n";
}

void emit_pmf_csv(const std::vector<double>& probs, long first_index, const char* key) {
  std::cout << key << ",probability\n";
  for (size_t i = 0; i < probs.size(); ++i)
    std::cout << first_index + static_cast<long>(i) << "," << double_to_string(probs[i]) << "\n";
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::vector<long> parse_long_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stol(item));
  return out;
}

const char* cache_dir() { return std::getenv("UIPT_LAB_CACHE_DIR"); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact UIPT hull/layer/slice laws and their skeleton sampler"};
  app.require_subcommand(1);

  CommonOpts common;

  // ---- gf theta --------------------------------------------------------
  auto* gf = app.add_subcommand("gf", "generating-function coefficient tables");
  gf->require_subcommand(1);
  auto* gf_theta = gf->add_subcommand("theta", "offspring law theta(0..N)");
  int theta_order = 32;
  gf_theta->add_option("--order", theta_order, "truncation order")->capture_default_str();
  gf_theta->add_option("--precision", common.precision, "exact | float")->capture_default_str();
  gf_theta->add_option("--format", common.format, "json | csv")->capture_default_str();

  // ---- law -------------------------------------------------------------
  auto* law = app.add_subcommand("law", "exact finite-size distributions");
  law->require_subcommand(1);

  auto* law_perim = law->add_subcommand("perimeter", "perimeter law of the hull boundary");
  long lp_r = 1, lp_qmax = -1;
  law_perim->add_option("--r", lp_r, "radius")->required();
  law_perim->add_option("--q-max", lp_qmax, "largest perimeter (-1: adaptive)")->capture_default_str();
  law_perim->add_option("--tail-eps", common.tail_eps, "tail target when adaptive")->capture_default_str();
  law_perim->add_option("--format", common.format, "json | csv")->capture_default_str();

  auto* law_hullgf = law->add_subcommand("hull-gf", "hull volume generating function");
  long hg_r = 1;
  double hg_s = 0.9;
  law_hullgf->add_option("--r", hg_r, "radius")->required();
  law_hullgf->add_option("--s", hg_s, "evaluation point in [0,1]")->required();

  auto* law_hullpmf = law->add_subcommand("hull-pmf", "hull volume probabilities");
  int hp_r = 1, hp_nmax = 40;
  law_hullpmf->add_option("--r", hp_r, "radius")->required();
  law_hullpmf->add_option("--n-max", hp_nmax, "largest volume")->capture_default_str();
  law_hullpmf->add_option("--precision", common.precision, "exact | float")->capture_default_str();
  law_hullpmf->add_option("--format", common.format, "json | csv")->capture_default_str();

  auto* law_layer = law->add_subcommand("layer-gf", "layer volume generating function");
  int ly_r = 1, ly_p = 1;
  long ly_q = 1;
  double ly_s = 0.9;
  law_layer->add_option("--s", ly_s)->required();
  law_layer->add_option("--r", ly_r)->required();
  law_layer->add_option("--p", ly_p)->required();
  law_layer->add_option("--q", ly_q)->required();

  auto* law_slice = law->add_subcommand("slice-gf", "joint geodesic-slice generating function");
  long sg_r = 1, sg_q = 1;
  std::string sg_arcs, sg_svals;
  law_slice->add_option("--r", sg_r)->required();
  law_slice->add_option("--q", sg_q)->required();
  law_slice->add_option("--arcs", sg_arcs, "comma list summing to q")->required();
  law_slice->add_option("--s", sg_svals, "comma list, one per arc")->required();

  // ---- sample ----------------------------------------------------------
  auto* sample = app.add_subcommand("sample", "skeleton-decomposition Monte Carlo");
  sample->require_subcommand(1);

  auto* sample_hull = sample->add_subcommand("hull", "unconditioned hull samples");
  int sh_r = 2;
  std::string sh_svals = "0.9";
  sample_hull->add_option("--r", sh_r)->required();
  sample_hull->add_option("--trials", common.trials)->capture_default_str();
  sample_hull->add_option("--seed", common.seed)->capture_default_str();
  sample_hull->add_option("--workers", common.workers)->capture_default_str();
  sample_hull->add_option("--s", sh_svals, "estimate E[s^V] at these points")->capture_default_str();
  sample_hull->add_option("--format", common.format, "json summary | csv dump")->capture_default_str();

  auto* sample_slices = sample->add_subcommand("slices", "conditioned geodesic-slice samples");
  int ss_r = 2;
  long ss_q = 4;
  std::string ss_arcs = "1,3", ss_svals = "0.8,0.9";
  sample_slices->add_option("--r", ss_r)->required();
  sample_slices->add_option("--q", ss_q)->required();
  sample_slices->add_option("--arcs", ss_arcs)->required();
  sample_slices->add_option("--s", ss_svals, "estimate the joint gf at these points")->capture_default_str();
  sample_slices->add_option("--trials", common.trials)->capture_default_str();
  sample_slices->add_option("--seed", common.seed)->capture_default_str();
  sample_slices->add_option("--workers", common.workers)->capture_default_str();
  sample_slices->add_option("--format", common.format, "json summary | csv dump")->capture_default_str();

  // ---- asympt ----------------------------------------------------------
  auto* asympt = app.add_subcommand("asympt", "scaling-limit functionals and diagnostics");
  asympt->require_subcommand(1);

  auto* as_hull = asympt->add_subcommand("hull-limit", "limit Laplace transform of hull volumes");
  double ah_lambda = 1.0, ah_x = 1.0;
  as_hull->add_option("--lambda", ah_lambda)->required();
  as_hull->add_option("--x", ah_x)->required();

  auto* as_diff = asympt->add_subcommand("hulldiff", "jump law: finite-size check against the limit");
  double ad_ell = 1.0, ad_delta = 0.3, ad_lambda = 1.0;
  int ad_n = 40;
  as_diff->add_option("--ell", ad_ell)->capture_default_str();
  as_diff->add_option("--delta", ad_delta)->capture_default_str();
  as_diff->add_option("--lambda", ad_lambda)->capture_default_str();
  as_diff->add_option("--n", ad_n)->capture_default_str();

  auto* as_xi = asympt->add_subcommand("xi", "Laplace transform of the jump variable xi");
  double ax_lambda = 1.0;
  as_xi->add_option("--lambda", ax_lambda)->required();

  // ---- verify ----------------------------------------------------------
  auto* verify_cmd = app.add_subcommand("verify", "acceptance suite");
  verify_cmd->require_subcommand(1);
  auto* verify_all = verify_cmd->add_subcommand("all", "run every acceptance criterion");
  long va_trials = 100000;
  int va_workers = 2;
  verify_all->add_option("--trials", va_trials)->capture_default_str();
  verify_all->add_option("--workers", va_workers)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gf_theta->parsed()) {
      json params{{"order", theta_order}, {"precision", common.precision}, {"format", common.format}};
      if (common.precision == "exact") {
        Series<Rat> theta = skeleton::phi_series_closed<Rat>(theta_order);
        if (common.format == "csv") {
          std::cout << "k,theta\n";
          for (int i = 0; i <= theta_order; ++i) std::cout << i << "," << rat_to_string(theta[i]) << "\n";
        } else {
          emit("gf theta", params, json{{"series", series_to_json(theta)}});
        }
      } else {
        std::vector<double> probs(theta_order + 1);
        for (int i = 0; i <= theta_order; ++i) probs[i] = skeleton::theta_d(i);
        if (common.format == "csv") {
          emit_pmf_csv(probs, 0, "k");
        } else {
          emit("gf theta", params, json{{"pmf", probs}});
        }
      }
    } else if (law_perim->parsed()) {
      laws::PerimeterPmf pmf = laws::perimeter_pmf(lp_r, lp_qmax, common.tail_eps);
      json params{{"r", lp_r}, {"q_max", lp_qmax}, {"tail_eps", common.tail_eps}, {"format", common.format}};
      if (common.format == "csv") {
        emit_pmf_csv(pmf.probs, 1, "q");
      } else {
        emit("law perimeter", params, json{{"pmf", pmf.probs}, {"tail", pmf.tail}});
      }
    } else if (law_hullgf->parsed()) {
      json params{{"r", hg_r}, {"s", hg_s}};
      emit("law hull-gf", params, json{{"value", laws::hull_volume_gf_closed(hg_s, hg_r)}});
    } else if (law_hullpmf->parsed()) {
      laws::HullVolumePmf pmf = laws::hull_volume_pmf(hp_r, hp_nmax, common.precision == "exact");
      json params{{"r", hp_r}, {"n_max", hp_nmax}, {"precision", common.precision}, {"format", common.format}};
      if (common.format == "csv") {
        emit_pmf_csv(pmf.probs, 0, "n");
      } else {
        emit("law hull-pmf", params, json{{"pmf", pmf.probs}});
      }
    } else if (law_layer->parsed()) {
      json params{{"s", ly_s}, {"r", ly_r}, {"p", ly_p}, {"q", ly_q}};
      emit("law layer-gf", params, json{{"value", laws::layer_volume_gf(ly_s, ly_r, ly_p, ly_q)}});
    } else if (law_slice->parsed()) {
      std::vector<long> arcs = parse_long_list(sg_arcs);
      std::vector<double> svals = parse_double_list(sg_svals);
      json params{{"r", sg_r}, {"q", sg_q}, {"arcs", arcs}, {"s", svals}};
      emit("law slice-gf", params, json{{"value", laws::slice_gf(sg_r, sg_q, arcs, svals)}});
    } else if (sample_hull->parsed()) {
      sampler::SamplerContext ctx;
      if (cache_dir()) ctx.load_cache(cache_dir());
      struct Out {
        long perim;
        long volume;
      };
      std::vector<Out> outs = sampler::run_trials<Out>(
          common.trials, common.workers, common.seed, [&](long, sampler::RngStream& rng) {
            sampler::HullSample h = sampler::sample_hull(ctx, sh_r, rng);
            return Out{h.traj.p.back(), h.volume};
          });
      if (cache_dir()) ctx.save_cache(cache_dir());
      json params{{"r", sh_r}, {"trials", common.trials}, {"seed", common.seed},
                  {"s", sh_svals}, {"format", common.format}};
      if (common.format == "csv") {
        std::cout << "trial,r,P_r,V\n";
        for (size_t i = 0; i < outs.size(); ++i)
          std::cout << i << "," << sh_r << "," << outs[i].perim << "," << outs[i].volume << "\n";
      } else {
        std::vector<long> volumes(outs.size());
        for (size_t i = 0; i < outs.size(); ++i) volumes[i] = outs[i].volume;
        json estimates = json::array();
        for (double s : parse_double_list(sh_svals)) {
          verify::GfEstimate est = verify::estimate_gf(volumes, s, common.seed);
          estimates.push_back(json{{"s", s},
                                   {"estimate", est.estimate},
                                   {"std_error", est.std_error},
                                   {"exact", laws::hull_volume_gf_closed(s, sh_r)}});
        }
        emit("sample hull", params,
             json{{"estimates", estimates}, {"trials", common.trials}, {"seed", common.seed}});
      }
    } else if (sample_slices->parsed()) {
      sampler::SamplerContext ctx;
      if (cache_dir()) ctx.load_cache(cache_dir());
      std::vector<long> arcs = parse_long_list(ss_arcs);
      std::vector<double> svals = parse_double_list(ss_svals);
      struct Out {
        long perim;
        long volume;
        std::vector<long> stats;
      };
      std::vector<Out> outs = sampler::run_trials<Out>(
          common.trials, common.workers, common.seed, [&](long, sampler::RngStream& rng) {
            sampler::SliceSample s = sampler::sample_slices(ctx, ss_r, ss_q, arcs, rng);
            return Out{s.hull.traj.p.back(), s.hull.volume, s.stats};
          });
      if (cache_dir()) ctx.save_cache(cache_dir());
      json params{{"r", ss_r}, {"q", ss_q},       {"arcs", arcs},          {"s", svals},
                  {"trials", common.trials}, {"seed", common.seed}, {"format", common.format}};
      if (common.format == "csv") {
        std::cout << "trial,r,P_r,V";
        for (size_t j = 0; j < arcs.size(); ++j) std::cout << ",slice_" << j + 1;
        std::cout << "\n";
        for (size_t i = 0; i < outs.size(); ++i) {
          std::cout << i << "," << ss_r << "," << outs[i].perim << "," << outs[i].volume;
          for (long s : outs[i].stats) std::cout << "," << s;
          std::cout << "\n";
        }
      } else {
        std::vector<std::vector<long>> stats(outs.size());
        for (size_t i = 0; i < outs.size(); ++i) stats[i] = outs[i].stats;
        verify::GfEstimate est = verify::estimate_joint_gf(stats, svals, common.seed);
        emit("sample slices", params,
             json{{"estimate", est.estimate},
                  {"std_error", est.std_error},
                  {"exact", laws::slice_gf(ss_r, ss_q, arcs, svals)},
                  {"trials", common.trials},
                  {"seed", common.seed}});
      }
    } else if (as_hull->parsed()) {
      json params{{"lambda", ah_lambda}, {"x", ah_x}};
      emit("asympt hull-limit", params, json{{"value", asymptotics::hull_limit(ah_lambda, ah_x)}});
    } else if (as_diff->parsed()) {
      asymptotics::HullDiffCheck chk = asymptotics::hulldiff_finite_check(ad_ell, ad_delta, ad_lambda, ad_n);
      json params{{"ell", ad_ell}, {"delta", ad_delta}, {"lambda", ad_lambda}, {"n", ad_n}};
      emit("asympt hulldiff", params,
           json{{"finite", chk.finite}, {"limit", chk.limit}, {"rel_gap", chk.rel_gap}});
    } else if (as_xi->parsed()) {
      asymptotics::XiLaplace xi = asymptotics::xi_laplace(ax_lambda);
      json params{{"lambda", ax_lambda}};
      emit("asympt xi", params,
           json{{"quadrature", xi.quadrature},
                {"candidate_sqrt_exponent", xi.cand_sqrt},
                {"candidate_printed_exponent", xi.cand_printed},
                {"dev_sqrt", xi.dev_sqrt},
                {"dev_printed", xi.dev_printed}});
    } else if (verify_all->parsed()) {
      acceptance::Options opt;
      opt.mc_trials = va_trials;
      opt.workers = va_workers;
      auto results = acceptance::run_all(std::cerr, opt);
      json lines = json::array();
      for (const auto& r : results)
        lines.push_back(json{{"index", r.index}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
      emit("verify all", json{{"trials", va_trials}}, json{{"criteria", lines},
                                                           {"failures", acceptance::failures(results)}});
      return acceptance::failures(results) == 0 ? 0 : 1;
    }
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
