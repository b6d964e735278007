#pragma once

// Crank-Nicolson propagation of psi(x, t) under
//   H(t) = H0 + g(t) p,  g(t) = -A(t) sin(Omega t + phase),  p = -i d/dx,
// with p discretised by central differences so H(t) stays Hermitian and the
// scheme stays exactly norm preserving.

#include "chaotun/model.hpp"
#include "chaotun/series.hpp"
#include "chaotun/spectrum.hpp"
#include "chaotun/tridiagonal.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chaotun {

struct WaveFunction {
    std::vector<cplx> amplitudes;
    double t = 0.0;

    /// sum |psi_i|^2 dx
    [[nodiscard]] double norm(double dx) const;
};

[[nodiscard]] WaveFunction from_bound_state(const BoundState& state);

struct ObservableSample {
    double t = 0.0;
    /// N_k = |<k|psi>|^2 for every computed bound state.
    std::vector<double> occupations;
    double norm = 0.0;
    std::optional<double> interval_probability;
};

/// g(t) = -A(t) sin(Omega t + phase); V(t) acts on the grid as g(t) p.
[[nodiscard]] double drive_operator_coefficient(const Drive& drive, double t) noexcept;

/// One Crank-Nicolson stepper bound to a grid, H0 and drive. Stepping with a
/// negative dt exactly undoes the matching forward step.
///
/// `energy_reference` is subtracted from H0. It only changes the global phase
/// of psi, but the scheme's phase error grows like E^3 dt^2, so centring the
/// levels of interest near zero keeps their relative phase accurate.
class CrankNicolson {
public:
    CrankNicolson(const Grid& grid, const SymTridiagonal& h0, const Drive& drive,
                  double energy_reference = 0.0);

    /// Solves (I + i dt/2 H(t_mid)) psi' = (I - i dt/2 H(t_mid)) psi with
    /// t_mid = psi.t + dt/2, followed by one pass of iterative refinement.
    /// Throws SolverBreakdown on a zero pivot.
    void step(WaveFunction& psi, double dt);

    [[nodiscard]] const Drive& drive() const noexcept { return drive_; }

private:
    std::vector<double> h_diag_;
    std::vector<double> potential_;
    double h_off_;
    double inv_two_dx_;
    Drive drive_;
    std::vector<cplx> a_diag_;
    double a_diag_dt_ = 0.0;
    TridiagonalFactorization factorization_;
    std::vector<cplx> rhs_;
    std::vector<cplx> solution_;
    std::vector<cplx> residual_;
};

/// Samples emitted by propagate(), plus the state at the last completed step.
struct PropagationResult {
    std::vector<ObservableSample> samples;
    WaveFunction final_state;
    bool complete = true;
    std::string failure;

    /// Occupation series of bound state k.
    [[nodiscard]] OccupationSeries occupation(std::size_t k, double dt_sample) const;
};

using SampleSink = std::function<void(const ObservableSample&)>;
using SnapshotSink = std::function<void(const WaveFunction&)>;

/// Runs round(t_total / dt) steps from the configured bound state, emitting an
/// ObservableSample every sample_stride steps (including t = 0). The drive
/// carrier must already be resolved (see resolve_carrier). The stepper's
/// energy reference is (E0 + E1) / 2. A failing step
/// ends the run with complete = false and the samples gathered so far.
[[nodiscard]] PropagationResult propagate(const SimulationConfig& cfg, const Spectrum& spectrum,
                                          const SampleSink& sink = {},
                                          const SnapshotSink& snapshots = {});

/// Copy of cfg whose carrier equals E1 - E0 when cfg.resonant_carrier is set.
[[nodiscard]] SimulationConfig resolve_carrier(const SimulationConfig& cfg,
                                               const Spectrum& spectrum);

/// Exact integral over [lo, hi] of the piecewise-linear interpolant of a
/// density given on the interior mesh (zero on both walls).
[[nodiscard]] double integrate_density(const Grid& grid, std::span<const double> density,
                                       double lo, double hi);

struct DensitySnapshot {
    double t = 0.0;
    std::vector<double> density;
};

/// Finite-window dwell time: int_0^window dt int_lo^hi |psi(x, t)|^2 dx by
/// trapezoidal quadrature in both variables. Snapshots must be time ordered,
/// start at t = 0 and reach `window`.
[[nodiscard]] double dwell_time(std::span<const DensitySnapshot> snapshots, const Grid& grid,
                                double lo, double hi, double window);

/// Same quadrature in time over the interval probabilities already recorded
/// in the samples.
[[nodiscard]] double dwell_time(std::span<const ObservableSample> samples, double window);

/// Binary snapshot stream: 16-byte header ("PSI1", uint32 grid size,
/// float64 dx), then per snapshot a float64 time followed by grid-size
/// (re, im) float64 pairs. Little-endian throughout.
class SnapshotWriter {
public:
    SnapshotWriter(const std::filesystem::path& path, const Grid& grid);
    void write(const WaveFunction& psi);

private:
    std::ofstream out_;
    std::size_t n_;
};

struct SnapshotFile {
    std::uint32_t grid_size = 0;
    double dx = 0.0;
    std::vector<WaveFunction> snapshots;
};

[[nodiscard]] SnapshotFile read_snapshots(const std::filesystem::path& path);

} // namespace chaotun
