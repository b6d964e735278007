#pragma once

// Independent reference computations used only by the tests.

#include "chaotun/model.hpp"

#include <cstddef>
#include <vector>

namespace oracle {

/// Bound-state energies of -k psi'' + U psi = E psi with psi = 0 on both
/// walls. Integrates the ODE exactly across each constant-potential piece
/// from both walls and bisects on the Wronskian at the gap midpoint.
std::vector<double> shooting_energies(const chaotun::DoubleWell& well, double x_min,
                                      double x_max, double kinetic, std::size_t count);

/// Probability mass of the arcsine law 1/(pi sqrt(N(1-N))) on [lo, hi].
double arcsine_mass(double lo, double hi);

/// First time after t = 0 at which N0 of the resonant two-level RWA model
/// returns to its maximum. RK4 on c0' = -i (w/2) c1, c1' = -i (w/2) c0.
double rwa_first_return(double rabi, double dt);

} // namespace oracle
