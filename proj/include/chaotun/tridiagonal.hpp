#pragma once

// Tridiagonal linear algebra: Sturm-sequence bisection and inverse iteration
// for real symmetric matrices, and Thomas elimination for the complex
// Crank-Nicolson systems.

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chaotun {

using cplx = std::complex<double>;

/// Real symmetric tridiagonal matrix; off[i] couples rows i and i+1.
struct SymTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;

    [[nodiscard]] std::size_t size() const noexcept { return diag.size(); }
};

/// y = T x.
void multiply(const SymTridiagonal& t, std::span<const double> x, std::span<double> y);

/// Number of eigenvalues strictly below `shift`.
[[nodiscard]] std::size_t sturm_count(const SymTridiagonal& t, double shift) noexcept;

/// Interval [lo, hi] containing the whole spectrum.
[[nodiscard]] std::pair<double, double> gershgorin_bounds(const SymTridiagonal& t) noexcept;

/// The k-th smallest eigenvalue (k = 0 is the lowest), bisected inside
/// [lo, hi] until the bracket stops shrinking in floating point.
[[nodiscard]] double bisect_eigenvalue(const SymTridiagonal& t, std::size_t k, double lo,
                                       double hi);

/// Unit-norm (Euclidean) eigenvector for an accurate eigenvalue, orthogonalised
/// against `previous` (already unit-norm) to separate close eigenvalues.
[[nodiscard]] std::vector<double>
inverse_iteration(const SymTridiagonal& t, double eigenvalue,
                  std::span<const std::vector<double>> previous = {});

/// Solves a general real tridiagonal system with partial pivoting.
/// lower[i] multiplies x[i-1] in row i; upper[i] multiplies x[i+1].
void solve_tridiagonal_pivoted(std::span<const double> lower, std::span<const double> diag,
                               std::span<const double> upper, std::span<double> x);

class SolverBreakdown : public std::runtime_error {
public:
    SolverBreakdown(const std::string& what, std::size_t row)
        : std::runtime_error(what + " at row " + std::to_string(row)), row_(row)
    {
    }
    [[nodiscard]] std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// Thomas algorithm for a tridiagonal system with constant off-diagonals,
/// solved in place in `x`. `scratch` must hold x.size() entries.
/// Throws SolverBreakdown on a zero pivot.
template <typename T>
void thomas_solve(T lower, std::span<const T> diag, T upper, std::span<T> x,
                  std::span<T> scratch)
{
    const std::size_t n = diag.size();
    if (n == 0) {
        return;
    }
    T pivot = diag[0];
    if (pivot == T{}) {
        throw SolverBreakdown("zero pivot in Thomas elimination", 0);
    }
    T inv = T{1} / pivot;
    scratch[0] = upper * inv;
    x[0] *= inv;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower * scratch[i - 1];
        if (pivot == T{}) {
            throw SolverBreakdown("zero pivot in Thomas elimination", i);
        }
        inv = T{1} / pivot;
        scratch[i] = upper * inv;
        x[i] = (x[i] - lower * x[i - 1]) * inv;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] -= scratch[i] * x[i + 1];
    }
}

/// Thomas elimination run from both ends at once, meeting in the middle.
/// Same system and contract as thomas_solve; the two independent
/// recurrences roughly halve the latency-bound sweep on one core.
void thomas_solve_bidirectional(cplx lower, std::span<const cplx> diag, cplx upper,
                                std::span<cplx> x, std::span<cplx> scratch);

/// Two-ended elimination of a constant-off-diagonal system, kept so that
/// further right-hand sides (e.g. residual corrections) cost only the
/// substitution sweeps.
class TridiagonalFactorization {
public:
    /// Throws SolverBreakdown on a zero pivot.
    void factor(cplx lower, std::span<const cplx> diag, cplx upper);
    /// Overwrites x with the solution for the factored matrix.
    void solve(std::span<cplx> x) const;
    [[nodiscard]] std::size_t size() const noexcept { return inv_pivot_.size(); }

private:
    cplx lower_;
    cplx upper_;
    std::size_t half_ = 0;
    std::vector<cplx> inv_pivot_;
    std::vector<cplx> mult_;
    cplx middle_;
};

} // namespace chaotun
