#include "chaotun/spectrum.hpp"

#include "chaotun/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chaotun {

double Spectrum::max_level_spacing() const noexcept
{
    double gap = 0.0;
    for (std::size_t k = 1; k < states.size(); ++k) {
        gap = std::max(gap, states[k].energy - states[k - 1].energy);
    }
    return gap;
}

SymTridiagonal assemble_h0(const Grid& grid, const DoubleWell& well, double mass)
{
    const std::size_t n = grid.n_interior;
    const double dx = grid.dx();
    const double kinetic = 0.5 / mass / (dx * dx);
    SymTridiagonal h;
    h.diag.resize(n);
    h.off.assign(n > 0 ? n - 1 : 0, -kinetic);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.x(i);
        h.diag[i] = 2.0 * kinetic + cell_average_potential(well, x - 0.5 * dx, x + 0.5 * dx);
    }
    return h;
}

Spectrum solve_bound_states(const SymTridiagonal& h0, const Grid& grid, std::size_t max_states)
{
    const std::size_t negative = sturm_count(h0, 0.0);
    if (negative < 2) {
        throw SpectrumError("found " + std::to_string(negative) +
                            " negative-energy state(s); a tunneling doublet needs at least 2");
    }
    const std::size_t count = std::min(negative, max_states);
    const double dx = grid.dx();
    const std::vector<double> energies = kernels::omp::lowest_eigenvalues(h0, count);

    Spectrum s;
    s.bound_count = negative;
    s.dx = dx;
    std::vector<std::vector<double>> unit;
    for (std::size_t k = 0; k < count; ++k) {
        // Orthogonalise only against numerically close levels.
        std::vector<std::vector<double>> close;
        for (std::size_t j = 0; j < k; ++j) {
            if (std::abs(energies[k] - energies[j]) < 1e-6 * (1.0 + std::abs(energies[k]))) {
                close.push_back(unit[j]);
            }
        }
        std::vector<double> v = inverse_iteration(h0, energies[k], close);
        const auto big = std::max_element(v.begin(), v.end(), [](double a, double b) {
            return std::abs(a) < std::abs(b);
        });
        const double sign = *big < 0.0 ? -1.0 : 1.0;
        unit.push_back(v);
        const double scale = sign / std::sqrt(dx);
        for (double& e : v) {
            e *= scale;
        }
        s.states.push_back({k, energies[k], std::move(v)});
    }
    s.omega_carrier = s.states[1].energy - s.states[0].energy;
    s.kappa = momentum_matrix_element(s.states[0], s.states[1], grid);
    return s;
}

double momentum_matrix_element(const BoundState& s0, const BoundState& s1,
                               [[maybe_unused]] const Grid& grid)
{
    const auto& a = s0.amplitudes;
    const auto& b = s1.amplitudes;
    const std::size_t n = a.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double next = i + 1 < n ? b[i + 1] : 0.0;
        const double prev = i > 0 ? b[i - 1] : 0.0;
        sum += a[i] * (next - prev);
    }
    // (.../(2 dx)) * dx
    return std::abs(0.5 * sum);
}

double probability_in(const BoundState& state, const Grid& grid, double lo, double hi)
{
    double p = 0.0;
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
        const double x = grid.x(i);
        if (x >= lo && x <= hi) {
            p += state.amplitudes[i] * state.amplitudes[i];
        }
    }
    return p * grid.dx();
}

double left_fraction(const BoundState& state, const Grid& grid, const DoubleWell& well)
{
    return probability_in(state, grid, grid.x_min, 0.5 * (well.b + well.c));
}

Spectrum compute_spectrum(const SimulationConfig& cfg)
{
    return solve_bound_states(assemble_h0(cfg.grid, cfg.well, cfg.mass), cfg.grid,
                              cfg.max_states);
}

} // namespace chaotun
