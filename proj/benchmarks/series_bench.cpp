#include <benchmark/benchmark.h>

#include <uipt/enumeration.hpp>
#include <uipt/laws.hpp>
#include <uipt/sampler.hpp>
#include <uipt/skeleton.hpp>

#include <random>

namespace {

using namespace uipt;

Series<Rat> random_rat_series(int order, uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> num(-99, 99);
  std::uniform_int_distribution<int> den(1, 30);
  Series<Rat> s(order);
  for (int i = 0; i <= order; ++i) s.at(i) = rat_of(num(gen), den(gen));
  return s;
}

void BM_series_mul_rat(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  Series<Rat> a = random_rat_series(n, 1), b = random_rat_series(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(mul(a, b));
  state.SetComplexityN(n);
}
BENCHMARK(BM_series_mul_rat)->Arg(64)->Arg(128)->Arg(256)->Complexity(benchmark::oNSquared);

void BM_series_mul_double(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  Series<double> a(n), b(n);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i <= n; ++i) {
    a.at(i) = U(gen);
    b.at(i) = U(gen);
  }
  for (auto _ : state) benchmark::DoNotOptimize(mul(a, b));
  state.SetComplexityN(n);
}
BENCHMARK(BM_series_mul_double)->Arg(512)->Arg(1024)->Arg(2048)->Complexity(benchmark::oNSquared);

void BM_h_series_exact(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumeration::h_series<Rat>(n));
}
BENCHMARK(BM_h_series_exact)->Arg(100)->Arg(200);

void BM_iterate_series_double(benchmark::State& state) {
  int r = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(skeleton::one_minus_iterate_series<double>(0.9, r, 200));
}
BENCHMARK(BM_iterate_series_double)->Arg(10)->Arg(50);

void BM_hulldiff_powering(benchmark::State& state) {
  // the jump-law kernel: order-p series raised to the q-th power
  int n = static_cast<int>(state.range(0));
  long p = n * n;
  long q = static_cast<long>(0.7 * n * n);
  double s = std::exp(-1.0 / (static_cast<double>(n) * n * n * n));
  double t = skeleton::t_from_s(s);
  Series<double> f = add_const(negate(skeleton::one_minus_iterate_series<double>(t, 1, static_cast<int>(p))), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(powi(f, q).coeff(p));
}
BENCHMARK(BM_hulldiff_powering)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_hull_pmf_exact(benchmark::State& state) {
  int nmax = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(laws::hull_volume_gf_series<Sqrt3>(2, nmax));
  state.SetComplexityN(nmax);
}
BENCHMARK(BM_hull_pmf_exact)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_sample_hull(benchmark::State& state) {
  sampler::SamplerContext ctx;
  int r = static_cast<int>(state.range(0));
  {
    // warm the kernel and slot tables outside the timed region
    sampler::RngStream rng = sampler::RngStream::for_trial(1, 0);
    for (int i = 0; i < 200; ++i) benchmark::DoNotOptimize(sampler::sample_hull(ctx, r, rng));
  }
  uint64_t trial = 0;
  for (auto _ : state) {
    sampler::RngStream rng = sampler::RngStream::for_trial(42, trial++);
    benchmark::DoNotOptimize(sampler::sample_hull(ctx, r, rng).volume);
  }
}
BENCHMARK(BM_sample_hull)->Arg(1)->Arg(3)->Arg(5);

void BM_slot_log_prob(benchmark::State& state) {
  long n = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumeration::slot_log_prob(5, 1000 + (n++ % 1000)));
  }
}
BENCHMARK(BM_slot_log_prob);

}  // namespace

BENCHMARK_MAIN();
