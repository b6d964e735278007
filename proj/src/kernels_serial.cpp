#include "chaotun/kernels.hpp"

#include <algorithm>

namespace chaotun::kernels::serial {

void cn_rhs(std::span<const double> diag, cplx h_upper, cplx h_lower, double half_dt,
            std::span<const cplx> psi, std::span<cplx> rhs)
{
    const std::size_t n = diag.size();
    const cplx minus_i_half_dt{0.0, -half_dt};
    for (std::size_t i = 0; i < n; ++i) {
        cplx h = diag[i] * psi[i];
        if (i > 0) {
            h += h_lower * psi[i - 1];
        }
        if (i + 1 < n) {
            h += h_upper * psi[i + 1];
        }
        rhs[i] = psi[i] + minus_i_half_dt * h;
    }
}

void cn_residual(std::span<const double> potential, double off, double mom, double half_dt,
                 std::span<const cplx> b, std::span<const cplx> x, std::span<cplx> res)
{
    const std::size_t n = potential.size();
    const cplx i_half_dt{0.0, half_dt};
    const cplx i_mom{0.0, mom};
    for (std::size_t i = 0; i < n; ++i) {
        const cplx left = i > 0 ? x[i - 1] : cplx{};
        const cplx right = i + 1 < n ? x[i + 1] : cplx{};
        const cplx h = off * ((left - x[i]) + (right - x[i])) + potential[i] * x[i] +
                       i_mom * (left - right);
        res[i] = b[i] - (x[i] + i_half_dt * h);
    }
}

double norm_squared(std::span<const cplx> psi)
{
    double s = 0.0;
    for (const cplx& z : psi) {
        s += std::norm(z);
    }
    return s;
}

void project(std::span<const double> basis, std::span<const cplx> psi, std::span<cplx> out)
{
    const std::size_t n = psi.size();
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double* row = basis.data() + k * n;
        double re = 0.0;
        double im = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
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
    std::vector<std::uint64_t> hist(radii.size() + 1, 0);
    const std::size_t n = points.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1 + theiler; k < n; ++k) {
            const double dx = points[i][0] - points[k][0];
            const double dy = points[i][1] - points[k][1];
            const double dz = points[i][2] - points[k][2];
            const double d2 = dx * dx + dy * dy + dz * dz;
            // first radius with d < r
            const auto j = std::upper_bound(r2.begin(), r2.end(), d2) - r2.begin();
            ++hist[static_cast<std::size_t>(j)];
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
    for (std::size_t k = 0; k < count; ++k) {
        values[k] = bisect_eigenvalue(t, k, lo, hi);
    }
    return values;
}

} // namespace chaotun::kernels::serial
