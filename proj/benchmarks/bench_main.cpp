// Microbenchmarks for the hot paths: windowed sieving, local factor
// evaluation (both routes), series summation, the delay-equation table,
// weight tables, the constant quadratures, and windowed counting.
#include <benchmark/benchmark.h>

#include "psq/arith.hpp"
#include "psq/buchstab.hpp"
#include "psq/constants.hpp"
#include "psq/decomp.hpp"
#include "psq/reps.hpp"
#include "psq/singular.hpp"

namespace {

void BM_sieve_window(benchmark::State& state) {
  const std::uint64_t lo = 1'000'000'000ull;
  const std::uint64_t len = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    auto w = psq::arith::sieve_range(lo, lo + len);
    benchmark::DoNotOptimize(w.bits.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(len));
}
BENCHMARK(BM_sieve_window)->Arg(100000)->Arg(1000000);

void BM_local_factor_row(benchmark::State& state) {
  const std::uint64_t q = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    auto row = psq::singular::local_factor_row(2, q);
    benchmark::DoNotOptimize(row.data());
  }
}
BENCHMARK(BM_local_factor_row)->Arg(120)->Arg(1009)->Arg(9973);

void BM_local_factor_value(benchmark::State& state) {
  std::uint64_t q = 2;
  double acc = 0.0;
  for (auto _ : state) {
    acc += psq::singular::local_factor_value(2, 1000002, q);
    if (++q > 10000) q = 2;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_local_factor_value);

void BM_singular_series(benchmark::State& state) {
  const double cutoff = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto s = psq::singular::singular_series(2, 1000002, cutoff);
    benchmark::DoNotOptimize(s.value);
  }
}
BENCHMARK(BM_singular_series)->Arg(100)->Arg(1000);

void BM_buchstab_table(benchmark::State& state) {
  for (auto _ : state) {
    auto tab = psq::buchstab::build_table(10.0, 1e-4);
    benchmark::DoNotOptimize(tab.values.data());
  }
}
BENCHMARK(BM_buchstab_table);

void BM_weight_table(benchmark::State& state) {
  const auto cfg = psq::decomp::derive_config(1000000, 0.95, 0.59, 0.02, 0.0, 1.5);
  for (auto _ : state) {
    auto t = psq::decomp::build_weight_table(cfg, psq::decomp::WeightKind::lambda0);
    benchmark::DoNotOptimize(t.values.data());
  }
}
BENCHMARK(BM_weight_table);

void BM_sigma_minus_grid(benchmark::State& state) {
  const std::uint64_t res = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    auto c = psq::constants::sigma2_minus(0.6, 0.0,
                                          psq::constants::Method::grid, res);
    benchmark::DoNotOptimize(c.value);
  }
}
BENCHMARK(BM_sigma_minus_grid)->Arg(250)->Arg(1000);

void BM_sigma_minus_mc(benchmark::State& state) {
  const std::uint64_t samples = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    auto c = psq::constants::sigma2_minus(
        0.6, 0.0, psq::constants::Method::monte_carlo, samples, 1);
    benchmark::DoNotOptimize(c.value);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>((samples + 63) / 64 * 64));
}
BENCHMARK(BM_sigma_minus_mc)->Arg(100000)->Arg(1000000);

void BM_count_window(benchmark::State& state) {
  const auto cfg = psq::decomp::derive_config(1000000, 0.95, 0.6, 0.0, 1.0);
  const auto ctx = psq::reps::make_context(cfg);
  std::uint64_t n = 1000002;
  std::int64_t acc = 0;
  for (auto _ : state) {
    acc += psq::reps::count_r2(n, ctx);
    n += 2;
    if (n > 1010000) n = 1000002;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_count_window);

}  // namespace

BENCHMARK_MAIN();
