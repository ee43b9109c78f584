// Serial reference kernels against their OpenMP counterparts, plus a whole
// trajectory evolved either way.
#include <benchmark/benchmark.h>

#include <random>

#include "qtl/kernels.hpp"
#include "qtl/linalg.hpp"
#include "qtl/propagation.hpp"

namespace {

qtl::ComplexMatrix random_matrix(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    qtl::ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = {d(rng), d(rng)};
    return m;
}

template <auto Kernel>
void bm_gemm(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_matrix(n, 1);
    const auto b = random_matrix(n, 2);
    qtl::ComplexMatrix c(n, n);
    for (auto _ : state) {
        Kernel({a.data(), n, n}, {b.data(), n, n}, {c.data(), n, n});
        benchmark::DoNotOptimize(c.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n * n));
}

void bm_evolve(benchmark::State& state) {
    qtl::ModelConfig cfg;
    cfg.t_max = 20.0;
    qtl::EvolveOptions options;
    options.parallel = state.range(0) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(qtl::evolve(cfg, options).size());
}

} // namespace

BENCHMARK(bm_gemm<qtl::kernels::serial::gemm>)->Name("gemm/serial")->Arg(72)->Arg(128)->Arg(256);
BENCHMARK(bm_gemm<qtl::kernels::parallel::gemm>)->Name("gemm/parallel")->Arg(72)->Arg(128)->Arg(256);
BENCHMARK(bm_evolve)->Name("evolve_jc_t20/serial")->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_evolve)->Name("evolve_jc_t20/parallel")->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
