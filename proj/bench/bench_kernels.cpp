#include "chaotun/kernels.hpp"
#include "chaotun/spectrum.hpp"
#include "chaotun/tridiagonal.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

using namespace chaotun;

namespace {

std::vector<cplx> state(std::size_t n)
{
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    std::vector<cplx> v(n);
    for (auto& x : v) {
        x = {g(rng), g(rng)};
    }
    return v;
}

std::vector<double> diagonal(std::size_t n)
{
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = 2e4 + std::sin(0.01 * static_cast<double>(i));
    }
    return d;
}

template <auto Fn>
void cn_rhs(benchmark::State& st)
{
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto psi = state(n);
    const auto diag = diagonal(n);
    std::vector<cplx> out(n);
    for (auto _ : st) {
        Fn(diag, {-1e4, 0.1}, {-1e4, -0.1}, 0.0025, psi, out);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <auto Fn>
void norm(benchmark::State& st)
{
    const auto psi = state(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) {
        benchmark::DoNotOptimize(Fn(psi));
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <auto Fn>
void project(benchmark::State& st)
{
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto psi = state(n);
    std::vector<double> basis(6 * n);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        basis[i] = std::cos(0.37 * static_cast<double>(i));
    }
    std::vector<cplx> out(6);
    for (auto _ : st) {
        Fn(basis, psi, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <auto Fn>
void pairs(benchmark::State& st)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<kernels::Point3> pts(static_cast<std::size_t>(st.range(0)));
    for (auto& p : pts) {
        p = {u(rng), u(rng), u(rng)};
    }
    const std::vector<double> radii{0.01, 0.02, 0.04, 0.08};
    for (auto _ : st) {
        benchmark::DoNotOptimize(Fn(pts, radii, 0));
    }
}

template <auto Fn>
void eigenvalues(benchmark::State& st)
{
    const Grid g = Grid::centered(60.0, 0.01);
    const SymTridiagonal h = assemble_h0(g, DoubleWell::centered(2.337, 13.82, 0.876, 2.045, 11.91));
    for (auto _ : st) {
        benchmark::DoNotOptimize(Fn(h, 6));
    }
}

void thomas(benchmark::State& st)
{
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto rhs = state(n);
    std::vector<cplx> diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        diag[i] = {1.0, 0.0025 * (2e4 + std::sin(0.01 * static_cast<double>(i)))};
    }
    std::vector<cplx> x(n);
    std::vector<cplx> scratch(n);
    for (auto _ : st) {
        x = rhs;
        thomas_solve<cplx>({0.0, -25.0}, diag, {0.0, -25.0}, x, scratch);
        benchmark::DoNotOptimize(x.data());
    }
}

void thomas_bidirectional(benchmark::State& st)
{
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto rhs = state(n);
    std::vector<cplx> diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        diag[i] = {1.0, 0.0025 * (2e4 + std::sin(0.01 * static_cast<double>(i)))};
    }
    std::vector<cplx> x(n);
    std::vector<cplx> scratch(n);
    for (auto _ : st) {
        x = rhs;
        thomas_solve_bidirectional({0.0, -25.0}, diag, {0.0, -25.0}, x, scratch);
        benchmark::DoNotOptimize(x.data());
    }
}

} // namespace

BENCHMARK(cn_rhs<kernels::serial::cn_rhs>)->Name("cn_rhs/serial")->Arg(6000)->Arg(1 << 17);
BENCHMARK(cn_rhs<kernels::omp::cn_rhs>)->Name("cn_rhs/omp")->Arg(6000)->Arg(1 << 17);
BENCHMARK(norm<kernels::serial::norm_squared>)->Name("norm/serial")->Arg(6000)->Arg(1 << 17);
BENCHMARK(norm<kernels::omp::norm_squared>)->Name("norm/omp")->Arg(6000)->Arg(1 << 17);
BENCHMARK(project<kernels::serial::project>)->Name("project/serial")->Arg(6000)->Arg(1 << 17);
BENCHMARK(project<kernels::omp::project>)->Name("project/omp")->Arg(6000)->Arg(1 << 17);
BENCHMARK(pairs<kernels::serial::count_pairs_within>)->Name("pairs/serial")->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(pairs<kernels::omp::count_pairs_within>)->Name("pairs/omp")->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(eigenvalues<kernels::serial::lowest_eigenvalues>)->Name("eigenvalues/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(eigenvalues<kernels::omp::lowest_eigenvalues>)->Name("eigenvalues/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(thomas)->Name("thomas/forward")->Arg(6000);
BENCHMARK(thomas_bidirectional)->Name("thomas/bidirectional")->Arg(6000);

BENCHMARK_MAIN();
