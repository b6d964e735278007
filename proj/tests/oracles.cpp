#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace oracle {

namespace {

struct Piece {
    double lo;
    double hi;
    double u;
};

std::vector<Piece> pieces(const chaotun::DoubleWell& w, double x_min, double x_max)
{
    return {{x_min, w.a, 0.0},
            {w.a, w.b, -w.u_left},
            {w.b, w.c, 0.0},
            {w.c, w.d, -w.u_right},
            {w.d, x_max, 0.0}};
}

// Carries (psi, psi') across a segment of length h where psi'' = q psi.
void advance(double q, double h, double& f, double& g)
{
    if (h == 0.0) {
        return;
    }
    double c;
    double s_over;
    double s_times;
    if (q > 0.0) {
        const double k = std::sqrt(q);
        c = std::cosh(k * h);
        s_over = std::sinh(k * h) / k;
        s_times = std::sinh(k * h) * k;
    } else if (q < 0.0) {
        const double k = std::sqrt(-q);
        c = std::cos(k * h);
        s_over = std::sin(k * h) / k;
        s_times = -std::sin(k * h) * k;
    } else {
        c = 1.0;
        s_over = h;
        s_times = 0.0;
    }
    const double nf = c * f + s_over * g;
    const double ng = s_times * f + c * g;
    const double scale = std::max(std::abs(nf), std::abs(ng));
    f = nf / scale;
    g = ng / scale;
}

double wronskian(const std::vector<Piece>& ps, double kinetic, double e, double x_match)
{
    double fl = 0.0;
    double gl = 1.0;
    for (const auto& p : ps) {
        const double end = std::min(p.hi, x_match);
        if (end > p.lo) {
            advance((p.u - e) / kinetic, end - p.lo, fl, gl);
        }
    }
    double fr = 0.0;
    double gr = -1.0;
    for (auto it = ps.rbegin(); it != ps.rend(); ++it) {
        const double start = std::max(it->lo, x_match);
        if (it->hi > start) {
            // Integrating leftwards: psi'' = q psi is invariant under x -> -x
            // once the derivative changes sign.
            double f = fr;
            double g = -gr;
            advance((it->u - e) / kinetic, it->hi - start, f, g);
            fr = f;
            gr = -g;
        }
    }
    return fl * gr - gl * fr;
}

} // namespace

std::vector<double> shooting_energies(const chaotun::DoubleWell& well, double x_min,
                                      double x_max, double kinetic, std::size_t count)
{
    const auto ps = pieces(well, x_min, x_max);
    const double x_match = 0.5 * (well.b + well.c);
    const double bottom = -std::max(well.u_left, well.u_right);
    const int n_scan = 200000;
    std::vector<double> roots;
    double e_prev = bottom + 1e-12;
    double w_prev = wronskian(ps, kinetic, e_prev, x_match);
    for (int i = 1; i <= n_scan && roots.size() < count; ++i) {
        const double e = bottom + (0.0 - bottom) * i / n_scan;
        const double w = wronskian(ps, kinetic, e, x_match);
        if ((w < 0.0) != (w_prev < 0.0)) {
            double lo = e_prev;
            double hi = e;
            double wlo = w_prev;
            for (int k = 0; k < 200 && hi - lo > 1e-15 * std::abs(lo); ++k) {
                const double mid = 0.5 * (lo + hi);
                const double wm = wronskian(ps, kinetic, mid, x_match);
                if ((wm < 0.0) == (wlo < 0.0)) {
                    lo = mid;
                    wlo = wm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        e_prev = e;
        w_prev = w;
    }
    return roots;
}

double arcsine_mass(double lo, double hi)
{
    auto cdf = [](double x) {
        return 2.0 / std::numbers::pi * std::asin(std::sqrt(std::clamp(x, 0.0, 1.0)));
    };
    return cdf(hi) - cdf(lo);
}

double rwa_first_return(double rabi, double dt)
{
    using c = std::complex<double>;
    const c mi(0.0, -0.5 * rabi);
    std::array<c, 2> y{c(1.0), c(0.0)};
    auto f = [&](const std::array<c, 2>& v) { return std::array<c, 2>{mi * v[1], mi * v[0]}; };
    auto n0 = [](const std::array<c, 2>& v) { return std::norm(v[0]); };
    double t = 0.0;
    bool dipped = false;
    double prev = 1.0;
    double prev_prev = 1.0;
    for (long s = 0; s < 100000000L; ++s) {
        auto k1 = f(y);
        std::array<c, 2> tmp{y[0] + 0.5 * dt * k1[0], y[1] + 0.5 * dt * k1[1]};
        auto k2 = f(tmp);
        tmp = {y[0] + 0.5 * dt * k2[0], y[1] + 0.5 * dt * k2[1]};
        auto k3 = f(tmp);
        tmp = {y[0] + dt * k3[0], y[1] + dt * k3[1]};
        auto k4 = f(tmp);
        for (int i = 0; i < 2; ++i) {
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += dt;
        const double now = n0(y);
        if (now < 0.5) {
            dipped = true;
        }
        if (dipped && prev > now && prev >= prev_prev) {
            // Parabolic refinement of the maximum through the last three samples.
            const double denom = prev_prev - 2.0 * prev + now;
            const double shift = denom != 0.0 ? 0.5 * (prev_prev - now) / denom : 0.0;
            return t - dt + shift * dt;
        }
        prev_prev = prev;
        prev = now;
    }
    throw std::runtime_error("no return found");
}

} // namespace oracle
