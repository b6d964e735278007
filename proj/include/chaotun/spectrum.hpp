#pragma once

// Bound states of the unperturbed Hamiltonian H0 = p^2/(2m) + U(x) on the
// hard-wall grid, the carrier frequency E1 - E0 and kappa = |<0|p|1>|.

#include "chaotun/model.hpp"
#include "chaotun/tridiagonal.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace chaotun {

/// Normalised so that sum(amplitude^2) * dx = 1, with the amplitude of
/// largest magnitude positive.
struct BoundState {
    std::size_t index = 0;
    double energy = 0.0;
    std::vector<double> amplitudes;
};

struct Spectrum {
    std::vector<BoundState> states;
    /// Eigenvalues below zero, including any beyond max_states.
    std::size_t bound_count = 0;
    double omega_carrier = 0.0;
    double kappa = 0.0;
    double dx = 0.0;

    /// Largest gap between consecutive computed levels.
    [[nodiscard]] double max_level_spacing() const noexcept;
};

class SpectrumError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Three-point kinetic stencil with Dirichlet walls; the diagonal carries the
/// exact cell average of U over [x_i - dx/2, x_i + dx/2] so that shaft edges
/// falling between mesh points do not cost an order of accuracy.
[[nodiscard]] SymTridiagonal assemble_h0(const Grid& grid, const DoubleWell& well,
                                         double mass = 0.5);

/// Lowest negative-energy eigenpairs (at most max_states) in increasing order.
/// Throws SpectrumError when fewer than two bound states exist.
[[nodiscard]] Spectrum solve_bound_states(const SymTridiagonal& h0, const Grid& grid,
                                          std::size_t max_states);

/// |sum_i psi0_i (psi1_{i+1} - psi1_{i-1}) / (2 dx) dx|, walls taken as zero.
[[nodiscard]] double momentum_matrix_element(const BoundState& s0, const BoundState& s1,
                                             const Grid& grid);

/// Probability of `state` on the mesh points inside [lo, hi].
[[nodiscard]] double probability_in(const BoundState& state, const Grid& grid, double lo,
                                    double hi);

/// Fraction of the state's probability on the left side of the gap midpoint.
[[nodiscard]] double left_fraction(const BoundState& state, const Grid& grid,
                                   const DoubleWell& well);

/// assemble_h0 + solve_bound_states for a validated configuration.
[[nodiscard]] Spectrum compute_spectrum(const SimulationConfig& cfg);

} // namespace chaotun
