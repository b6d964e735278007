#pragma once

// Data-parallel hot loops. Every kernel exists twice: `serial` is the
// reference implementation kept for testing, `omp` is the OpenMP version
// used by the library. The two must agree to rounding.

#include "chaotun/tridiagonal.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace chaotun::kernels {

using Point3 = std::array<double, 3>;

namespace serial {

/// rhs = (I - i half_dt H) psi with H = diag + h_upper * shift(+1) + h_lower * shift(-1).
void cn_rhs(std::span<const double> diag, cplx h_upper, cplx h_lower, double half_dt,
            std::span<const cplx> psi, std::span<cplx> rhs);
/// res = b - (I + i half_dt H) x. H x is formed from neighbour differences:
/// off (x[i-1] - x[i]) + off (x[i+1] - x[i]) + potential[i] x[i] + i mom (x[i-1] - x[i+1]),
/// with potential = diag + 2 off.
void cn_residual(std::span<const double> potential, double off, double mom, double half_dt,
                 std::span<const cplx> b, std::span<const cplx> x, std::span<cplx> res);

/// sum |psi_i|^2 (no dx weight).
[[nodiscard]] double norm_squared(std::span<const cplx> psi);

/// out[k] = sum_i basis[k * n + i] * psi[i] for the row-major real basis.
void project(std::span<const double> basis, std::span<const cplx> psi, std::span<cplx> out);

/// counts[j] = number of pairs (i < k, k - i > theiler) with |p_i - p_k| < radii[j].
/// `radii` must be ascending.
[[nodiscard]] std::vector<std::uint64_t> count_pairs_within(std::span<const Point3> points,
                                                            std::span<const double> radii,
                                                            std::size_t theiler = 0);

/// The `count` lowest eigenvalues, ascending.
[[nodiscard]] std::vector<double> lowest_eigenvalues(const SymTridiagonal& t, std::size_t count);

} // namespace serial

namespace omp {

void cn_rhs(std::span<const double> diag, cplx h_upper, cplx h_lower, double half_dt,
            std::span<const cplx> psi, std::span<cplx> rhs);
void cn_residual(std::span<const double> potential, double off, double mom, double half_dt,
                 std::span<const cplx> b, std::span<const cplx> x, std::span<cplx> res);
[[nodiscard]] double norm_squared(std::span<const cplx> psi);
void project(std::span<const double> basis, std::span<const cplx> psi, std::span<cplx> out);
[[nodiscard]] std::vector<std::uint64_t> count_pairs_within(std::span<const Point3> points,
                                                            std::span<const double> radii,
                                                            std::size_t theiler = 0);
[[nodiscard]] std::vector<double> lowest_eigenvalues(const SymTridiagonal& t, std::size_t count);

/// Worker threads OpenMP will use for the parallel kernels.
[[nodiscard]] int max_threads();

} // namespace omp

} // namespace chaotun::kernels
