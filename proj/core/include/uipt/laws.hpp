#pragma once

// Exact finite-size distributions for the UIPT: the perimeter law of hull
// boundaries, the perimeter transition kernel, hull-volume generating
// functions (closed form and iterate form), the hull-volume pmf via exact
// series reversion, layer-volume and geodesic-slice generating functions.

#include <uipt/enumeration.hpp>
#include <uipt/series.hpp>
#include <uipt/skeleton.hpp>

#include <vector>

namespace uipt::laws {

struct PerimeterPmf {
  long r = 0;
  std::vector<double> probs;  // probs[q-1] = P(|dB_r| = q), q = 1..qmax
  double tail = 0.0;          // certified bound on the mass beyond qmax
  double prob(long q) const { return q >= 1 && q <= static_cast<long>(probs.size()) ? probs[q - 1] : 0.0; }
};

// P(|dB_r| = q) = (alpha^q C(q) / (alpha C(1))) (1 - (r+1)^{-2})^{q-1} (r+1)^{-3}
double perimeter_prob(long r, long q);
// qmax < 0: extend until the certified tail drops below tail_eps.
PerimeterPmf perimeter_pmf(long r, long qmax, double tail_eps = 1e-12);

// P(|dB_{r'+r}| = q | |dB_{r'}| = p) = (alpha^q C(q)/(alpha^p C(p))) (p/q) [u^p] (phi^{{r}})^q
double perimeter_transition(int p, long q, int r);
Rat perimeter_transition_exact(int p, long q, int r);

// Theorem-level hull volume generating functions.
double hull_volume_gf_closed(double s, long r);
double hull_volume_gf_iterate(double s, long r);

// E[s^{V_r}] as a truncated series in s: all ingredients are series in t
// over the ring (sqrt3 extension for exact work), composed with the
// reversion of s(t) = sqrt3 t sqrt(1 - 2t/3).
template <class R>
Series<R> hull_volume_gf_series(int r, int order);

struct HullVolumePmf {
  long r = 0;
  std::vector<double> probs;  // probs[n] = P(V = n), n = 0..nmax
};
HullVolumePmf hull_volume_pmf(int r, int nmax, bool exact = true);

// E[s^{|L|} | outer perimeter q, inner perimeter p] = s^p t^{q-p}
//   [u^p](phi_t^{{r}})^q / [u^p](phi_1^{{r}})^q
double layer_volume_gf(double s, int r, int p, long q);

// Joint slice-volume generating function of Theorem-type slices.
double slice_gf(long r, long q, const std::vector<long>& arcs, const std::vector<double>& s);

// The map s -> E[s^V] under the spec'd conditioning modes.
struct VolumeGf {
  enum class Method { closed, iterate };
  long r = 0;
  Method method = Method::closed;
  bool conditioned = false;
  long q = 0;  // perimeter when conditioned
  double operator()(double s) const;
  static VolumeGf hull(long r, Method m = Method::closed) { return {r, m, false, 0}; }
  static VolumeGf conditioned_hull(long r, long q) { return {r, Method::closed, true, q}; }
};

}  // namespace uipt::laws
