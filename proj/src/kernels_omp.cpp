#include "chaotun/kernels.hpp"

#include <algorithm>

#include <omp.h>

namespace chaotun::kernels::omp {

namespace {
// Below this many points the fork/join overhead dominates.
constexpr std::ptrdiff_t parallel_threshold = 1 << 14;
} // namespace

void cn_rhs(std::span<const double> diag, cplx h_upper, cplx h_lower, double half_dt,
            std::span<const cplx> psi, std::span<cplx> rhs)
{
    const auto n = static_cast<std::ptrdiff_t>(diag.size());
    if (n < 2) {
        serial::cn_rhs(diag, h_upper, h_lower, half_dt, psi, rhs);
        return;
    }
    const cplx minus_i_half_dt{0.0, -half_dt};
    rhs[0] = psi[0] + minus_i_half_dt * (diag[0] * psi[0] + h_upper * psi[1]);
#pragma omp parallel for schedule(static) if (n > parallel_threshold)
    for (std::ptrdiff_t i = 1; i < n - 1; ++i) {
        const cplx h = diag[i] * psi[i] + h_lower * psi[i - 1] + h_upper * psi[i + 1];
        rhs[i] = psi[i] + minus_i_half_dt * h;
    }
    rhs[n - 1] = psi[n - 1] + minus_i_half_dt * (diag[n - 1] * psi[n - 1] + h_lower * psi[n - 2]);
}

void cn_residual(std::span<const double> potential, double off, double mom, double half_dt,
                 std::span<const cplx> b, std::span<const cplx> x, std::span<cplx> res)
{
    const auto n = static_cast<std::ptrdiff_t>(potential.size());
    if (n < 3) {
        serial::cn_residual(potential, off, mom, half_dt, b, x, res);
        return;
    }
    const cplx i_half_dt{0.0, half_dt};
    const cplx i_mom{0.0, mom};
    auto row = [&](std::ptrdiff_t i, cplx left, cplx right) {
        const cplx h = off * ((left - x[i]) + (right - x[i])) + potential[i] * x[i] +
                       i_mom * (left - right);
        res[i] = b[i] - (x[i] + i_half_dt * h);
    };
    row(0, cplx{}, x[1]);
#pragma omp parallel for schedule(static) if (n > parallel_threshold)
    for (std::ptrdiff_t i = 1; i < n - 1; ++i) {
        row(i, x[i - 1], x[i + 1]);
    }
    row(n - 1, x[n - 2], cplx{});
}

double norm_squared(std::span<const cplx> psi)
{
    const auto n = static_cast<std::ptrdiff_t>(psi.size());
    double s = 0.0;
#pragma omp parallel for reduction(+ : s) schedule(static) if (n > parallel_threshold)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        s += std::norm(psi[i]);
    }
    return s;
}

void project(std::span<const double> basis, std::span<const cplx> psi, std::span<cplx> out)
{
    const auto n = static_cast<std::ptrdiff_t>(psi.size());
    const auto states = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static) if (n * states > parallel_threshold)
    for (std::ptrdiff_t k = 0; k < states; ++k) {
        const double* row = basis.data() + k * n;
        double re = 0.0;
        double im = 0.0;
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            re += row[i] * psi[i].real();
            im += row[i] * psi[i].imag();
        }
        out[k] = {re, im};
    }
}

std::vector<std::uint64_t> count_pairs_within(std::span<const Point3> points,
                                              std::span<const double> radii,
                                              std::size_t theiler)
{
    std::vector<double> r2(radii.size());
    std::transform(radii.begin(), radii.end(), r2.begin(), [](double r) { return r * r; });
    const std::size_t bins = radii.size() + 1;
    std::vector<std::uint64_t> hist(bins, 0);
    std::uint64_t* h = hist.data();
    const auto n = static_cast<std::ptrdiff_t>(points.size());
    const auto gap = static_cast<std::ptrdiff_t>(theiler);
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : h[:bins])
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const Point3 p = points[i];
        for (std::ptrdiff_t k = i + 1 + gap; k < n; ++k) {
            const double dx = p[0] - points[k][0];
            const double dy = p[1] - points[k][1];
            const double dz = p[2] - points[k][2];
            const double d2 = dx * dx + dy * dy + dz * dz;
            const auto j = std::upper_bound(r2.begin(), r2.end(), d2) - r2.begin();
            ++h[j];
        }
    }
    std::vector<std::uint64_t> counts(radii.size());
    std::uint64_t running = 0;
    for (std::size_t j = 0; j < radii.size(); ++j) {
        running += hist[j];
        counts[j] = running;
    }
    return counts;
}

std::vector<double> lowest_eigenvalues(const SymTridiagonal& t, std::size_t count)
{
    const auto [lo, hi] = gershgorin_bounds(t);
    std::vector<double> values(count);
    const auto m = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t k = 0; k < m; ++k) {
        values[static_cast<std::size_t>(k)] =
            bisect_eigenvalue(t, static_cast<std::size_t>(k), lo, hi);
    }
    return values;
}

int max_threads() { return omp_get_max_threads(); }

} // namespace chaotun::kernels::omp
