#include "chaotun/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace chaotun {

void multiply(const SymTridiagonal& t, std::span<const double> x, std::span<double> y)
{
    const std::size_t n = t.size();
    for (std::size_t i = 0; i < n; ++i) {
        double s = t.diag[i] * x[i];
        if (i > 0) {
            s += t.off[i - 1] * x[i - 1];
        }
        if (i + 1 < n) {
            s += t.off[i] * x[i + 1];
        }
        y[i] = s;
    }
}

std::size_t sturm_count(const SymTridiagonal& t, double shift) noexcept
{
    constexpr double tiny = std::numeric_limits<double>::min();
    std::size_t count = 0;
    double q = t.diag[0] - shift;
    for (std::size_t i = 0;; ++i) {
        if (q == 0.0) {
            q = -tiny;
        }
        if (q < 0.0) {
            ++count;
        }
        if (i + 1 == t.size()) {
            break;
        }
        q = (t.diag[i + 1] - shift) - t.off[i] * t.off[i] / q;
    }
    return count;
}

std::pair<double, double> gershgorin_bounds(const SymTridiagonal& t) noexcept
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    const std::size_t n = t.size();
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) {
            r += std::abs(t.off[i - 1]);
        }
        if (i + 1 < n) {
            r += std::abs(t.off[i]);
        }
        lo = std::min(lo, t.diag[i] - r);
        hi = std::max(hi, t.diag[i] + r);
    }
    return {lo, hi};
}

double bisect_eigenvalue(const SymTridiagonal& t, std::size_t k, double lo, double hi)
{
    if (k >= t.size()) {
        throw std::out_of_range("eigenvalue index " + std::to_string(k) + " exceeds matrix size");
    }
    // Invariant: count(lo) <= k < count(hi).
    for (int iter = 0; iter < 2000; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (sturm_count(t, mid) > k) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void solve_tridiagonal_pivoted(std::span<const double> lower, std::span<const double> diag,
                               std::span<const double> upper, std::span<double> x)
{
    const std::size_t n = diag.size();
    if (n == 0) {
        return;
    }
    if (n == 1) {
        if (diag[0] == 0.0) {
            throw SolverBreakdown("singular tridiagonal system", 0);
        }
        x[0] /= diag[0];
        return;
    }
    // sub[i] = A(i+1, i); after elimination it holds the second superdiagonal.
    std::vector<double> d(diag.begin(), diag.end());
    std::vector<double> du(upper.begin(), upper.begin() + static_cast<std::ptrdiff_t>(n - 1));
    std::vector<double> sub(lower.begin() + 1, lower.end());

    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(sub[i])) {
            if (d[i] == 0.0) {
                throw SolverBreakdown("singular tridiagonal system", i);
            }
            const double fact = sub[i] / d[i];
            d[i + 1] -= fact * du[i];
            x[i + 1] -= fact * x[i];
            sub[i] = 0.0;
        } else {
            const double fact = d[i] / sub[i];
            d[i] = sub[i];
            const double temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if (i + 2 < n) {
                sub[i] = du[i + 1];
                du[i + 1] = -fact * sub[i];
            } else {
                sub[i] = 0.0;
            }
            du[i] = temp;
            const double b = x[i];
            x[i] = x[i + 1];
            x[i + 1] = b - fact * x[i + 1];
        }
    }
    if (d[n - 1] == 0.0) {
        throw SolverBreakdown("singular tridiagonal system", n - 1);
    }
    x[n - 1] /= d[n - 1];
    x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    for (std::size_t i = n - 2; i-- > 0;) {
        x[i] = (x[i] - du[i] * x[i + 1] - sub[i] * x[i + 2]) / d[i];
    }
}

namespace {

double dot(std::span<const double> a, std::span<const double> b)
{
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void normalize(std::vector<double>& v)
{
    const double n = std::sqrt(dot(v, v));
    for (double& e : v) {
        e /= n;
    }
}

} // namespace

std::vector<double> inverse_iteration(const SymTridiagonal& t, double eigenvalue,
                                      std::span<const std::vector<double>> previous)
{
    const std::size_t n = t.size();
    const auto [glo, ghi] = gershgorin_bounds(t);
    const double scale = std::max(std::abs(glo), std::abs(ghi));
    double perturb = 4.0 * std::numeric_limits<double>::epsilon() * scale;

    std::vector<double> lower(n, 0.0);
    std::vector<double> upper(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        upper[i] = t.off[i];
        lower[i + 1] = t.off[i];
    }

    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 0.3);
    }
    normalize(v);

    std::vector<double> shifted(n);
    std::vector<double> next;
    for (int iter = 0; iter < 8; ++iter) {
        const double sigma = eigenvalue + perturb;
        for (std::size_t i = 0; i < n; ++i) {
            shifted[i] = t.diag[i] - sigma;
        }
        next = v;
        try {
            solve_tridiagonal_pivoted(lower, shifted, upper, next);
        } catch (const SolverBreakdown&) {
            perturb *= 16.0;
            continue;
        }
        for (const auto& p : previous) {
            const double c = dot(p, next);
            for (std::size_t i = 0; i < n; ++i) {
                next[i] -= c * p[i];
            }
        }
        normalize(next);
        const double change = std::abs(std::abs(dot(next, v)) - 1.0);
        v.swap(next);
        if (iter >= 2 && change < 1e-15) {
            break;
        }
    }
    return v;
}

} // namespace chaotun

namespace chaotun {

void thomas_solve_bidirectional(cplx lower, std::span<const cplx> diag, cplx upper,
                                std::span<cplx> x, std::span<cplx> scratch)
{
    const std::size_t n = diag.size();
    if (n < 4) {
        thomas_solve<cplx>(lower, diag, upper, x, scratch);
        return;
    }
    // Rows [0, m) are eliminated downwards (scratch holds upper / pivot),
    // rows (n-1-m, n) upwards (scratch holds lower / pivot).
    const std::size_t m = n / 2;
    const double lr = lower.real();
    const double li = lower.imag();
    const double ur = upper.real();
    const double ui = upper.imag();
    double cr = 0.0, ci = 0.0, xr = 0.0, xi = 0.0;
    double er = 0.0, ei = 0.0, yr = 0.0, yi = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t i = k;
        const std::size_t j = n - 1 - k;
        const double pr = diag[i].real() - (lr * cr - li * ci);
        const double pi = diag[i].imag() - (lr * ci + li * cr);
        const double qr = diag[j].real() - (ur * er - ui * ei);
        const double qi = diag[j].imag() - (ur * ei + ui * er);
        const double pn = pr * pr + pi * pi;
        const double qn = qr * qr + qi * qi;
        if (pn == 0.0) {
            throw SolverBreakdown("zero pivot in Thomas elimination", i);
        }
        if (qn == 0.0) {
            throw SolverBreakdown("zero pivot in Thomas elimination", j);
        }
        const double s = 1.0 / pn;
        const double t = 1.0 / qn;
        const double ir = pr * s, ii = -pi * s;
        const double jr = qr * t, ji = -qi * t;
        const double br = x[i].real() - (lr * xr - li * xi);
        const double bi = x[i].imag() - (lr * xi + li * xr);
        const double dr = x[j].real() - (ur * yr - ui * yi);
        const double di = x[j].imag() - (ur * yi + ui * yr);
        cr = ur * ir - ui * ii;
        ci = ur * ii + ui * ir;
        xr = br * ir - bi * ii;
        xi = br * ii + bi * ir;
        er = lr * jr - li * ji;
        ei = lr * ji + li * jr;
        yr = dr * jr - di * ji;
        yi = dr * ji + di * jr;
        scratch[i] = {cr, ci};
        x[i] = {xr, xi};
        scratch[j] = {er, ei};
        x[j] = {yr, yi};
    }

    std::size_t down_from;
    std::size_t up_from;
    if (n % 2 == 1) {
        // Row m couples to the last downward row m-1 and the last upward row m+1.
        const cplx pivot = diag[m] - lower * scratch[m - 1] - upper * scratch[m + 1];
        if (pivot == cplx{}) {
            throw SolverBreakdown("zero pivot in Thomas elimination", m);
        }
        x[m] = (x[m] - lower * x[m - 1] - upper * x[m + 1]) / pivot;
        down_from = m;
        up_from = m;
    } else {
        // x[m-1] = X - C x[m] and x[m] = Y - E x[m-1].
        const cplx c = scratch[m - 1];
        const cplx e = scratch[m];
        const cplx det = 1.0 - e * c;
        if (det == cplx{}) {
            throw SolverBreakdown("zero pivot in Thomas elimination", m);
        }
        const cplx xm = (x[m] - e * x[m - 1]) / det;
        x[m - 1] -= c * xm;
        x[m] = xm;
        down_from = m - 1;
        up_from = m;
    }
    for (std::size_t i = down_from; i-- > 0;) {
        x[i] -= scratch[i] * x[i + 1];
    }
    for (std::size_t j = up_from + 1; j < n; ++j) {
        x[j] -= scratch[j] * x[j - 1];
    }
}

void TridiagonalFactorization::factor(cplx lower, std::span<const cplx> diag, cplx upper)
{
    const std::size_t n = diag.size();
    lower_ = lower;
    upper_ = upper;
    inv_pivot_.resize(n);
    mult_.resize(n);
    // Short systems are eliminated downwards only (half_ = 0).
    half_ = n < 4 ? 0 : n / 2;
    auto invert = [](cplx p, std::size_t row) {
        if (p == cplx{}) {
            throw SolverBreakdown("zero pivot in Thomas elimination", row);
        }
        return 1.0 / p;
    };
    if (half_ == 0) {
        for (std::size_t i = 0; i < n; ++i) {
            const cplx p = i == 0 ? diag[0] : diag[i] - lower * mult_[i - 1];
            inv_pivot_[i] = invert(p, i);
            mult_[i] = upper * inv_pivot_[i];
        }
        return;
    }
    const std::size_t m = half_;
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t i = k;
        const std::size_t j = n - 1 - k;
        const cplx p = k == 0 ? diag[i] : diag[i] - lower * mult_[i - 1];
        const cplx q = k == 0 ? diag[j] : diag[j] - upper * mult_[j + 1];
        inv_pivot_[i] = invert(p, i);
        inv_pivot_[j] = invert(q, j);
        mult_[i] = upper * inv_pivot_[i];
        mult_[j] = lower * inv_pivot_[j];
    }
    if (n % 2 == 1) {
        middle_ = invert(diag[m] - lower * mult_[m - 1] - upper * mult_[m + 1], m);
    } else {
        middle_ = invert(1.0 - mult_[m] * mult_[m - 1], m);
    }
}

void TridiagonalFactorization::solve(std::span<cplx> x) const
{
    const std::size_t n = inv_pivot_.size();
    if (n == 0) {
        return;
    }
    if (half_ == 0) {
        x[0] *= inv_pivot_[0];
        for (std::size_t i = 1; i < n; ++i) {
            x[i] = (x[i] - lower_ * x[i - 1]) * inv_pivot_[i];
        }
        for (std::size_t i = n - 1; i-- > 0;) {
            x[i] -= mult_[i] * x[i + 1];
        }
        return;
    }
    const std::size_t m = half_;
    x[0] *= inv_pivot_[0];
    x[n - 1] *= inv_pivot_[n - 1];
    for (std::size_t k = 1; k < m; ++k) {
        const std::size_t i = k;
        const std::size_t j = n - 1 - k;
        x[i] = (x[i] - lower_ * x[i - 1]) * inv_pivot_[i];
        x[j] = (x[j] - upper_ * x[j + 1]) * inv_pivot_[j];
    }
    std::size_t down_from;
    std::size_t up_from;
    if (n % 2 == 1) {
        x[m] = (x[m] - lower_ * x[m - 1] - upper_ * x[m + 1]) * middle_;
        down_from = m;
        up_from = m;
    } else {
        const cplx xm = (x[m] - mult_[m] * x[m - 1]) * middle_;
        x[m - 1] -= mult_[m - 1] * xm;
        x[m] = xm;
        down_from = m - 1;
        up_from = m;
    }
    for (std::size_t i = down_from; i-- > 0;) {
        x[i] -= mult_[i] * x[i + 1];
    }
    for (std::size_t j = up_from + 1; j < n; ++j) {
        x[j] -= mult_[j] * x[j - 1];
    }
}

} // namespace chaotun
