#pragma once

// Monte Carlo simulation of UIPT hulls, layers and geodesic slices through
// the skeleton decomposition: perimeter chain outward, exact conditional
// offspring by dynamic programming, Boltzmann slot volumes by inverse CDF.

#include <uipt/cache.hpp>
#include <uipt/laws.hpp>
#include <uipt/skeleton.hpp>

#include <cstdint>
#include <deque>
#include <functional>
#include <shared_mutex>
#include <thread>
#include <vector>

namespace uipt::sampler {

// Counter-seeded xoshiro256**: (seed, stream) fully determines the output,
// so trial results cannot depend on worker scheduling.
class RngStream {
 public:
  static RngStream for_trial(uint64_t master_seed, uint64_t stream_index);
  uint64_t next_u64();
  double uniform();  // in [0, 1)

 private:
  uint64_t s_[4];
};

struct PerimeterTrajectory {
  std::vector<long> p;  // p[0] = 1, ..., p[r]
  long radius() const { return static_cast<long>(p.size()) - 1; }
};

struct LayerSkeleton {
  // offspring[i-1][j] = children of the j-th vertex at level i (i = 1..r);
  // the level-i vertices are parents of the level-(i-1) edges.
  std::vector<std::vector<int>> offspring;
};

struct HullSample {
  PerimeterTrajectory traj;
  LayerSkeleton skel;
  std::vector<std::vector<long>> slot_volumes;  // aligned with skel.offspring
  long volume = 0;                              // V = 1 + sum (n_v + 1)
};

struct SliceSample {
  HullSample hull;
  long rotation = 0;
  std::vector<long> stats;  // per-arc sum of (n_v + 1)
};

// [u^m] phi^k over doubles, extended on demand; rows are rebuilt wholesale
// when the coefficient range grows, so values never depend on access order.
class PhiPowerTable {
 public:
  double coeff(int k, int m);
  // rows serialized through the float64 series schema
  nlohmann::json to_json() const;
  bool from_json(const nlohmann::json& j);

 private:
  void ensure_locked(int k, int m);
  mutable std::shared_mutex mu_;
  std::vector<std::vector<double>> rows_;
  std::vector<double> theta_;
  int mmax_ = -1;
};

// Shared read-mostly caches for one sampling campaign.
class SamplerContext {
 public:
  explicit SamplerContext(double kernel_residual = 1e-12) : kernel_residual_(kernel_residual) {}

  PhiPowerTable& phi_powers() { return table_; }
  const skeleton::OffspringLaw& offspring_law() const { return law_; }
  double kernel_residual() const { return kernel_residual_; }

  // cumulative one-step kernel from perimeter p, covering >= 1 - residual
  const std::vector<double>& kernel_cdf(int p);
  // cumulative Boltzmann slot law for the p-gon; grows on demand
  double slot_cdf_at(int p, long n);
  long slot_quantile(int p, double u);

  // warm-cache persistence of the phi-power table (series-module schema)
  void save_cache(const std::string& dir) const;
  void load_cache(const std::string& dir);

 private:
  struct SlotTable {
    std::vector<double> cdf;
  };
  double kernel_residual_;
  PhiPowerTable table_;
  skeleton::OffspringLaw law_;
  std::shared_mutex kernel_mu_;
  std::deque<std::vector<double>> kernel_rows_;  // deque: row addresses stay valid under growth
  std::shared_mutex slot_mu_;
  std::vector<SlotTable> slots_;
  void extend_slot_locked(int p, long nmin, double umin);
};

int sample_offspring(const skeleton::OffspringLaw& law, RngStream& rng);
PerimeterTrajectory sample_perimeter_chain(SamplerContext& ctx, int r, RngStream& rng);
std::vector<int> sample_layer_offspring(SamplerContext& ctx, int parents, int children_total, RngStream& rng);
long sample_slot_volume(SamplerContext& ctx, int c, RngStream& rng);
HullSample sample_hull(SamplerContext& ctx, int r, RngStream& rng);
HullSample sample_hull_conditioned(SamplerContext& ctx, int r, long q, RngStream& rng);
SliceSample sample_slices(SamplerContext& ctx, int r, long q, const std::vector<long>& arcs, RngStream& rng);

// Deterministic parallel map over trial indices: results identical for any
// worker count because streams derive from (seed, trial) alone.
template <class T, class Fn>
std::vector<T> run_trials(long trials, int workers, uint64_t seed, Fn&& fn) {
  std::vector<T> out(trials);
  if (workers <= 1) {
    for (long i = 0; i < trials; ++i) {
      RngStream rng = RngStream::for_trial(seed, static_cast<uint64_t>(i));
      out[i] = fn(i, rng);
    }
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (long i = w; i < trials; i += workers) {
        RngStream rng = RngStream::for_trial(seed, static_cast<uint64_t>(i));
        out[i] = fn(i, rng);
      }
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace uipt::sampler
