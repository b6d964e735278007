#include "chaotun/kernels.hpp"
#include "chaotun/spectrum.hpp"
#include "chaotun/tridiagonal.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace chaotun;

namespace {

std::vector<cplx> random_state(std::size_t n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<cplx> v(n);
    for (auto& x : v) {
        x = {g(rng), g(rng)};
    }
    return v;
}

} // namespace

TEST_CASE("serial and parallel kernels agree")
{
    const std::size_t n = 40000;
    const auto psi = random_state(n, 1);
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        diag[i] = std::sin(0.001 * i);
    }
    std::vector<cplx> a(n);
    std::vector<cplx> b(n);
    kernels::serial::cn_rhs(diag, {-0.5, 0.1}, {-0.5, -0.1}, 0.0025, psi, a);
    kernels::omp::cn_rhs(diag, {-0.5, 0.1}, {-0.5, -0.1}, 0.0025, psi, b);
    CHECK(a == b);
    std::vector<double> potential(n);
    for (std::size_t i = 0; i < n; ++i) {
        potential[i] = diag[i] - 1.0;
    }
    kernels::serial::cn_residual(potential, -0.5, 0.1, 0.0025, psi, a, b);
    std::vector<cplx> c(n);
    kernels::omp::cn_residual(potential, -0.5, 0.1, 0.0025, psi, a, c);
    CHECK(b == c);

    const double s = kernels::serial::norm_squared(psi);
    CHECK(kernels::omp::norm_squared(psi) == doctest::Approx(s).epsilon(1e-13));

    std::vector<double> basis(3 * n);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        basis[i] = std::cos(0.37 * i);
    }
    std::vector<cplx> p1(3);
    std::vector<cplx> p2(3);
    kernels::serial::project(basis, psi, p1);
    kernels::omp::project(basis, psi, p2);
    for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(p1[k] - p2[k]) < 1e-9 * std::abs(p1[k]) + 1e-9);
    }

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<kernels::Point3> pts(3000);
    for (auto& p : pts) {
        p = {u(rng), u(rng), u(rng)};
    }
    const std::vector<double> radii{0.05, 0.1, 0.2};
    CHECK(kernels::serial::count_pairs_within(pts, radii, 5) ==
          kernels::omp::count_pairs_within(pts, radii, 5));

    SymTridiagonal t;
    t.diag.assign(2000, 0.0);
    t.off.assign(1999, -1.0);
    for (std::size_t i = 0; i < t.diag.size(); ++i) {
        t.diag[i] = 2.0 + 0.01 * std::sin(0.1 * i);
    }
    CHECK(kernels::serial::lowest_eigenvalues(t, 6) == kernels::omp::lowest_eigenvalues(t, 6));
}

TEST_CASE("pair counts match brute force")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<kernels::Point3> pts(300);
    for (auto& p : pts) {
        p = {u(rng), u(rng), u(rng)};
    }
    const std::vector<double> radii{0.1, 0.3};
    std::vector<std::uint64_t> brute(2, 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 3; j < pts.size(); ++j) {
            const double d = std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1], pts[i][2] - pts[j][2]);
            for (int k = 0; k < 2; ++k) {
                brute[k] += d < radii[k];
            }
        }
    }
    CHECK(kernels::serial::count_pairs_within(pts, radii, 2) == brute);
}

TEST_CASE("Thomas solvers match the pivoted solver")
{
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 8u, 9u, 1000u, 1001u}) {
        const auto rhs = random_state(n, static_cast<unsigned>(n));
        std::vector<cplx> diag(n);
        for (std::size_t i = 0; i < n; ++i) {
            diag[i] = {1.0 + 0.1 * std::cos(double(i)), 0.3};
        }
        const cplx lower{-0.2, 0.05};
        const cplx upper{-0.2, -0.05};
        std::vector<cplx> x1 = rhs;
        std::vector<cplx> x2 = rhs;
        std::vector<cplx> scratch(n);
        thomas_solve<cplx>(lower, diag, upper, x1, scratch);
        thomas_solve_bidirectional(lower, diag, upper, x2, scratch);
        for (std::size_t i = 0; i < n; ++i) {
            cplx r = diag[i] * x1[i];
            if (i > 0) {
                r += lower * x1[i - 1];
            }
            if (i + 1 < n) {
                r += upper * x1[i + 1];
            }
            CHECK(std::abs(r - rhs[i]) < 1e-12);
            CHECK(std::abs(x1[i] - x2[i]) < 1e-12);
        }
    }
    std::vector<double> lo{0.0, 1.0, 1.0};
    std::vector<double> d{0.0, 1.0, 1.0};
    std::vector<double> up{1.0, 1.0};
    std::vector<double> x{1.0, 2.0, 3.0};
    solve_tridiagonal_pivoted(lo, d, up, x);
    CHECK(x[1] == doctest::Approx(1.0));
}

TEST_CASE("residual of the CN operator")
{
    const std::size_t n = 7;
    const auto x = random_state(n, 11);
    const auto b = random_state(n, 12);
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        diag[i] = 0.3 * double(i) - 1.0;
    }
    const double off = -0.8;
    const double mom = 0.25;
    const double half_dt = 0.01;
    std::vector<double> potential(n);
    for (std::size_t i = 0; i < n; ++i) {
        potential[i] = diag[i] + 2.0 * off;
    }
    std::vector<cplx> res(n);
    kernels::serial::cn_residual(potential, off, mom, half_dt, b, x, res);
    const cplx upper{off, -mom};
    const cplx lower{off, mom};
    const cplx ih{0.0, half_dt};
    for (std::size_t i = 0; i < n; ++i) {
        cplx h = diag[i] * x[i];
        if (i > 0) {
            h += lower * x[i - 1];
        }
        if (i + 1 < n) {
            h += upper * x[i + 1];
        }
        CHECK(std::abs(res[i] - (b[i] - x[i] - ih * h)) < 1e-13);
    }
}

TEST_CASE("a factorization solves repeated right-hand sides")
{
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 8u, 9u, 1000u, 1001u}) {
        std::vector<cplx> diag(n);
        for (std::size_t i = 0; i < n; ++i) {
            diag[i] = {1.0 + 0.1 * std::cos(double(i)), 0.3};
        }
        const cplx lower{-0.2, 0.05};
        const cplx upper{-0.2, -0.05};
        TridiagonalFactorization f;
        f.factor(lower, diag, upper);
        CHECK(f.size() == n);
        std::vector<cplx> scratch(n);
        for (unsigned seed : {1u, 2u}) {
            auto expect = random_state(n, seed + 100 * static_cast<unsigned>(n));
            auto x = expect;
            thomas_solve<cplx>(lower, diag, upper, expect, scratch);
            f.solve(x);
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(std::abs(x[i] - expect[i]) < 1e-12);
            }
        }
    }
    std::vector<cplx> singular{0.0, 0.0};
    TridiagonalFactorization f;
    CHECK_THROWS_AS(f.factor(1.0, singular, 1.0), SolverBreakdown);
}
