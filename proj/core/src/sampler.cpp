#include <uipt/sampler.hpp>

#include <algorithm>
#include <cmath>
#include <mutex>

namespace uipt::sampler {

namespace {

uint64_t splitmix64(uint64_t& x) {
  uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

double ln_transition_prefactor(int p, long q) {
  // alpha^{q-p} C(q)/C(p) * (p/q): the q/p inside C(q)/C(p) cancels the p/q,
  // leaving (1/4)^{q-p} binom(2q,q)/binom(2p,p)
  auto lb = [](long m) { return std::lgamma(2.0 * m + 1.0) - 2.0 * std::lgamma(m + 1.0); };
  return (p - q) * std::log(4.0) + lb(q) - lb(p);
}

}  // namespace

RngStream RngStream::for_trial(uint64_t master_seed, uint64_t stream_index) {
  RngStream r;
  uint64_t x = master_seed ^ (stream_index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
  for (auto& s : r.s_) s = splitmix64(x);
  return r;
}

uint64_t RngStream::next_u64() {
  uint64_t result = rotl(s_[1] * 5, 7) * 9;
  uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double PhiPowerTable::coeff(int k, int m) {
  {
    std::shared_lock lk(mu_);
    if (k < static_cast<int>(rows_.size()) && m <= mmax_) return rows_[k][m];
  }
  std::unique_lock lk(mu_);
  ensure_locked(k, m);
  return rows_[k][m];
}

void PhiPowerTable::ensure_locked(int k, int m) {
  int want_m = std::max(m, mmax_);
  int want_k = std::max<int>(k, static_cast<int>(rows_.size()) - 1);
  if (m > mmax_) {
    // column growth invalidates every row; rebuild at geometric size
    want_m = std::max(m, mmax_ <= 0 ? 64 : mmax_ + mmax_ / 2);
    rows_.clear();
  }
  if (rows_.empty()) {
    theta_.resize(want_m + 1);
    for (int j = 0; j <= want_m; ++j) theta_[j] = skeleton::theta_d(j);
    rows_.emplace_back(want_m + 1, 0.0);
    rows_[0][0] = 1.0;
    mmax_ = want_m;
  }
  while (static_cast<int>(rows_.size()) <= want_k) {
    const std::vector<double>& prev = rows_.back();
    std::vector<double> next(mmax_ + 1, 0.0);
    for (int mm = 0; mm <= mmax_; ++mm) {
      double acc = 0.0;
      for (int j = 0; j <= mm; ++j) acc += theta_[j] * prev[mm - j];
      next[mm] = acc;
    }
    rows_.push_back(std::move(next));
  }
}

nlohmann::json PhiPowerTable::to_json() const {
  std::shared_lock lk(mu_);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : rows_) rows.push_back(series_to_json(Series<double>(row)));
  return nlohmann::json{{"mmax", mmax_}, {"rows", rows}};
}

bool PhiPowerTable::from_json(const nlohmann::json& j) {
  try {
    int mmax = j.at("mmax").get<int>();
    std::vector<std::vector<double>> rows;
    for (const auto& rj : j.at("rows")) {
      Series<double> s = series_from_json<double>(rj);
      if (s.order() != mmax) return false;
      rows.push_back(s.coeffs());
    }
    if (rows.empty() || rows[0][0] != 1.0) return false;
    std::unique_lock lk(mu_);
    mmax_ = mmax;
    rows_ = std::move(rows);
    theta_.resize(mmax_ + 1);
    for (int i = 0; i <= mmax_; ++i) theta_[i] = skeleton::theta_d(i);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

void SamplerContext::save_cache(const std::string& dir) const {
  cache::save_json(dir, "phi_powers.json", table_.to_json());
}

void SamplerContext::load_cache(const std::string& dir) {
  auto j = cache::load_json(dir, "phi_powers.json");
  if (j) table_.from_json(*j);
}

const std::vector<double>& SamplerContext::kernel_cdf(int p) {
  {
    std::shared_lock lk(kernel_mu_);
    if (p < static_cast<int>(kernel_rows_.size()) && !kernel_rows_[p].empty()) return kernel_rows_[p];
  }
  // build outside the kernel lock; phi table has its own lock
  std::vector<double> cdf;
  double cum = 0.0;
  long q = 1;
  while (cum < 1.0 - kernel_residual_ && q < (1L << 22)) {
    double v = table_.coeff(static_cast<int>(q), p);
    double prob = v > 0.0 ? std::exp(ln_transition_prefactor(p, q) + std::log(v)) : 0.0;
    cum += prob;
    cdf.push_back(cum);
    ++q;
    // double-precision saturation: the exact row sums to 1, accept the float floor
    if (q > p + 64 && prob < 1e-18 * std::max(cum, 1e-300)) break;
  }
  std::unique_lock lk(kernel_mu_);
  if (p >= static_cast<int>(kernel_rows_.size())) kernel_rows_.resize(p + 1);
  if (kernel_rows_[p].empty()) kernel_rows_[p] = std::move(cdf);
  return kernel_rows_[p];
}

void SamplerContext::extend_slot_locked(int p, long nmin, double umin) {
  if (p >= static_cast<int>(slots_.size())) slots_.resize(p + 1);
  SlotTable& st = slots_[p];
  long start = static_cast<long>(st.cdf.size());
  long target = std::max<long>(nmin + 1, start == 0 ? std::max<long>(1024, std::min<long>(16L * p * p, 1L << 20)) : 2 * start);
  constexpr long kHardCap = 1L << 26;
  for (;;) {
    target = std::min(target, kHardCap);
    st.cdf.reserve(target);
    double cum = start == 0 ? 0.0 : st.cdf.back();
    for (long n = start; n < target; ++n) {
      cum += std::exp(enumeration::slot_log_prob(p, n));
      st.cdf.push_back(cum);
    }
    start = target;
    if (umin < 0 || st.cdf.back() >= umin || target >= kHardCap) break;
    target *= 2;
  }
  if (umin >= 0 && st.cdf.back() < umin) {
    if (1.0 - st.cdf.back() > 1e-12)
      throw std::runtime_error("slot sampler: cutoff exhausted at tail mass " +
                               std::to_string(1.0 - st.cdf.back()));
  }
}

double SamplerContext::slot_cdf_at(int p, long n) {
  {
    std::shared_lock lk(slot_mu_);
    if (p < static_cast<int>(slots_.size()) && n < static_cast<long>(slots_[p].cdf.size()))
      return slots_[p].cdf[n];
  }
  std::unique_lock lk(slot_mu_);
  extend_slot_locked(p, n, -1.0);
  return slots_[p].cdf[n];
}

long SamplerContext::slot_quantile(int p, double u) {
  {
    std::shared_lock lk(slot_mu_);
    if (p < static_cast<int>(slots_.size()) && !slots_[p].cdf.empty() && slots_[p].cdf.back() >= u) {
      const auto& cdf = slots_[p].cdf;
      return std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    }
  }
  std::unique_lock lk(slot_mu_);
  extend_slot_locked(p, 0, u);
  const auto& cdf = slots_[p].cdf;
  auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;  // double-precision saturation, ~1e-15 mass
  return it - cdf.begin();
}

int sample_offspring(const skeleton::OffspringLaw& law, RngStream& rng) {
  return law.quantile(rng.uniform());
}

PerimeterTrajectory sample_perimeter_chain(SamplerContext& ctx, int r, RngStream& rng) {
  if (r < 1) throw std::invalid_argument("sample_perimeter_chain: r >= 1");
  PerimeterTrajectory traj;
  traj.p.reserve(r + 1);
  traj.p.push_back(1);
  for (int i = 0; i < r; ++i) {
    const std::vector<double>& cdf = ctx.kernel_cdf(static_cast<int>(traj.p.back()));
    double u = rng.uniform();
    auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;  // residual below kernel_residual by construction
    traj.p.push_back(static_cast<long>(it - cdf.begin()) + 1);
  }
  return traj;
}

std::vector<int> sample_layer_offspring(SamplerContext& ctx, int parents, int children_total, RngStream& rng) {
  if (parents < 1 || children_total < 0) throw std::invalid_argument("sample_layer_offspring: bad sizes");
  std::vector<int> c(parents, 0);
  int remaining = children_total;
  for (int i = 0; i < parents; ++i) {
    int left = parents - i - 1;  // parents after this one
    if (left == 0) {
      c[i] = remaining;
      break;
    }
    if (remaining == 0) break;
    double norm = ctx.phi_powers().coeff(left + 1, remaining);
    if (norm <= 0.0) throw std::logic_error("sample_layer_offspring: zero-probability state");
    double target = rng.uniform() * norm;
    double acc = 0.0;
    int pick = remaining;
    for (int cc = 0; cc <= remaining; ++cc) {
      acc += skeleton::theta_d(cc) * ctx.phi_powers().coeff(left, remaining - cc);
      if (acc >= target) {
        pick = cc;
        break;
      }
    }
    c[i] = pick;
    remaining -= pick;
  }
  return c;
}

long sample_slot_volume(SamplerContext& ctx, int c, RngStream& rng) {
  return ctx.slot_quantile(c + 2, rng.uniform());
}

namespace {

void fill_layers(SamplerContext& ctx, HullSample& h, RngStream& rng) {
  int r = static_cast<int>(h.traj.radius());
  h.skel.offspring.assign(r, {});
  h.slot_volumes.assign(r, {});
  long vol = 1;
  // level i = 1..r: parents are the P_i level-i vertices, children sum to P_{i-1}
  for (int i = 1; i <= r; ++i) {
    std::vector<int> off = sample_layer_offspring(ctx, static_cast<int>(h.traj.p[i]),
                                                  static_cast<int>(h.traj.p[i - 1]), rng);
    std::vector<long> vols(off.size());
    for (size_t j = 0; j < off.size(); ++j) {
      vols[j] = sample_slot_volume(ctx, off[j], rng);
      vol += vols[j] + 1;
    }
    h.skel.offspring[i - 1] = std::move(off);
    h.slot_volumes[i - 1] = std::move(vols);
  }
  h.volume = vol;
}

}  // namespace

HullSample sample_hull(SamplerContext& ctx, int r, RngStream& rng) {
  HullSample h;
  h.traj = sample_perimeter_chain(ctx, r, rng);
  fill_layers(ctx, h, rng);
  return h;
}

HullSample sample_hull_conditioned(SamplerContext& ctx, int r, long q, RngStream& rng) {
  if (r < 1 || q < 1) throw std::invalid_argument("sample_hull_conditioned: r, q >= 1");
  HullSample h;
  h.traj.p.assign(r + 1, 0);
  h.traj.p[0] = 1;
  h.traj.p[r] = q;
  // backward pass: P(P_i = m | P_{i+1} = v) = pmf_i(m) T(m -> v) / pmf_{i+1}(v)
  for (int i = r - 1; i >= 1; --i) {
    long v = h.traj.p[i + 1];
    double norm = laws::perimeter_prob(i + 1, v);
    if (!(norm > 0.0)) throw std::domain_error("sample_hull_conditioned: unreachable perimeter");
    double target = rng.uniform() * norm;
    double acc = 0.0;
    long m = 1, pick = -1;
    double residual_floor = norm * 1e-15;
    for (;;) {
      double fw = laws::perimeter_prob(i, m);
      double tv = ctx.phi_powers().coeff(static_cast<int>(v), static_cast<int>(m));
      double w = tv > 0.0 ? fw * std::exp(ln_transition_prefactor(static_cast<int>(m), v) + std::log(tv)) : 0.0;
      acc += w;
      if (acc >= target) {
        pick = m;
        break;
      }
      ++m;
      if (m > (1L << 22)) break;
      if (m > v + 64 && w < residual_floor && norm - acc < residual_floor) break;
    }
    if (pick < 0) pick = m - 1;  // saturation at float residual
    h.traj.p[i] = pick;
  }
  fill_layers(ctx, h, rng);
  return h;
}

SliceSample sample_slices(SamplerContext& ctx, int r, long q, const std::vector<long>& arcs, RngStream& rng) {
  long total = 0;
  for (long a : arcs) {
    if (a < 1) throw std::invalid_argument("sample_slices: degenerate arcs are rejected");
    total += a;
  }
  if (total != q) throw std::invalid_argument("sample_slices: arcs must sum to q");
  SliceSample out;
  out.hull = sample_hull_conditioned(ctx, r, q, rng);
  out.rotation = static_cast<long>(rng.uniform() * static_cast<double>(q));
  if (out.rotation >= q) out.rotation = q - 1;

  // propagate tree ids from the level-r roots down to level 1
  const HullSample& h = out.hull;
  std::vector<std::vector<long>> tree_of(r + 1);
  tree_of[r].resize(q);
  for (long j = 0; j < q; ++j) tree_of[r][j] = j;
  for (int i = r; i >= 2; --i) {
    const std::vector<int>& off = h.skel.offspring[i - 1];
    std::vector<long>& child_tree = tree_of[i - 1];
    child_tree.reserve(h.traj.p[i - 1]);
    for (size_t j = 0; j < off.size(); ++j)
      for (int k = 0; k < off[j]; ++k) child_tree.push_back(tree_of[i][j]);
  }

  // arc of a tree index, after rotating so arcs start at the rotation point
  std::vector<int> arc_of_tree(q);
  {
    long pos = out.rotation;
    for (size_t j = 0; j < arcs.size(); ++j)
      for (long k = 0; k < arcs[j]; ++k) arc_of_tree[(pos++) % q] = static_cast<int>(j);
  }

  out.stats.assign(arcs.size(), 0);
  for (int i = 1; i <= r; ++i) {
    const std::vector<long>& vols = h.slot_volumes[i - 1];
    for (size_t j = 0; j < vols.size(); ++j) out.stats[arc_of_tree[tree_of[i][j]]] += vols[j] + 1;
  }
  return out;
}

}  // namespace uipt::sampler
