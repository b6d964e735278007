#pragma once

// Physical configuration of the driven double-well problem: hard-wall box,
// two-shaft rectangular potential and the amplitude-modulated laser drive.
//
// Units are dimensionless with hbar = 1. The kinetic prefactor is 1/(2m);
// the default mass m = 1/2 gives H0 = p^2 + U(x), the convention under
// which the reference geometry holds six bound states.

#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chaotun {

/// Uniform mesh of interior points inside the box [x_min, x_max].
/// The wave function vanishes on both walls, which are not stored.
struct Grid {
    double x_min = -30.0;
    double x_max = 30.0;
    std::size_t n_interior = 5999;

    [[nodiscard]] double dx() const noexcept
    {
        return (x_max - x_min) / static_cast<double>(n_interior + 1);
    }
    [[nodiscard]] double x(std::size_t i) const noexcept
    {
        return x_min + static_cast<double>(i + 1) * dx();
    }
    [[nodiscard]] double length() const noexcept { return x_max - x_min; }

    /// Grid over [-length/2, length/2] whose spacing is as close as
    /// possible to `target_dx`.
    static Grid centered(double length, double target_dx);
};

/// Two rectangular shafts: depth u_left on [a, b] and u_right on [c, d].
/// Depths are positive numbers; the potential inside a shaft is -depth.
struct DoubleWell {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
    double u_left = 0.0;
    double u_right = 0.0;

    [[nodiscard]] double left_width() const noexcept { return b - a; }
    [[nodiscard]] double right_width() const noexcept { return d - c; }
    [[nodiscard]] double gap() const noexcept { return c - b; }
    [[nodiscard]] double extent() const noexcept { return d - a; }

    /// Shafts of the given widths separated by `gap`, centred on x = 0.
    static DoubleWell centered(double left_width, double left_depth, double gap,
                               double right_width, double right_depth);
};

/// Reference geometry: D = 0.876, widths 2.337 / 2.045, depths 13.82 / 11.91.
DoubleWell reference_well();

/// Laser drive V(t) = -A(t) sin(Omega t + phase) p with the modulated
/// amplitude A(t) = a0 (1 - epsilon sin(omega_mod t)).
struct Drive {
    double a0 = 0.3;
    double epsilon = 0.0;
    double omega_mod = 0.0;
    double omega_carrier = 1.0;
    double carrier_phase = 0.0;
};

/// U(x). Shaft edges belong to the shaft; at b == c the point goes left.
[[nodiscard]] double evaluate_potential(const DoubleWell& well, double x) noexcept;

/// Exact mean of U over [lo, hi] (lo < hi).
[[nodiscard]] double cell_average_potential(const DoubleWell& well, double lo,
                                            double hi) noexcept;

/// A(t) = a0 (1 - epsilon sin(omega_mod t)).
[[nodiscard]] double drive_amplitude(const Drive& drive, double t) noexcept;

enum class InitialKind { ground, first_excited, index };

struct InitialState {
    InitialKind kind = InitialKind::ground;
    std::size_t index = 0;

    [[nodiscard]] std::size_t state_index() const noexcept
    {
        switch (kind) {
        case InitialKind::ground:
            return 0;
        case InitialKind::first_excited:
            return 1;
        case InitialKind::index:
            return index;
        }
        return 0;
    }
};

enum class BreakdownMetric { edge_mass, peak_height };

/// Parameters of the diagnostics that consume the occupation series.
struct AnalysisOptions {
    std::size_t n_bins = 100;
    double edge_fraction = 0.1;
    double lag_time = 330.0;
    /// When true, lag_time counts samples instead of time units.
    bool lag_in_samples = false;
    BreakdownMetric metric = BreakdownMetric::edge_mass;
};

struct SimulationConfig {
    Grid grid;
    DoubleWell well = reference_well();
    Drive drive;
    /// Particle mass; kinetic energy is p^2 / (2 mass).
    double mass = 0.5;
    /// Carrier is set to E1 - E0 once the spectrum is known.
    bool resonant_carrier = true;
    double margin_factor = 10.0;
    double dt = 0.005;
    double t_total = 2.0e4;
    std::size_t sample_stride = 200;
    InitialState initial_state;
    std::size_t max_states = 16;
    /// Steps between binary wave-function snapshots; 0 disables them.
    std::size_t snapshot_stride = 0;
    /// Optional interval whose probability is recorded with each sample.
    std::optional<std::pair<double, double>> dwell_interval;
    AnalysisOptions analysis;

    [[nodiscard]] double kinetic_prefactor() const noexcept { return 0.5 / mass; }
    [[nodiscard]] double sample_interval() const noexcept
    {
        return dt * static_cast<double>(sample_stride);
    }
    [[nodiscard]] std::size_t step_count() const noexcept;
};

struct Violation {
    std::string field;
    std::string message;
};

struct Validation {
    std::optional<SimulationConfig> config;
    std::vector<Violation> violations;
    std::vector<std::string> warnings;

    [[nodiscard]] bool ok() const noexcept { return config.has_value(); }
};

/// Checks every configuration invariant. On success the returned config has
/// its well re-centred in the box. `level_spacing`, when known, enables the
/// time-step resolution warning.
[[nodiscard]] Validation validate_config(const SimulationConfig& cfg,
                                         std::optional<double> level_spacing = {});

/// Thrown when a configuration cannot be used; carries every violation.
class ConfigError : public std::exception {
public:
    explicit ConfigError(std::vector<Violation> violations);
    [[nodiscard]] const char* what() const noexcept override { return message_.c_str(); }
    [[nodiscard]] const std::vector<Violation>& violations() const noexcept
    {
        return violations_;
    }

private:
    std::vector<Violation> violations_;
    std::string message_;
};

/// validate_config that throws ConfigError instead of returning violations.
[[nodiscard]] SimulationConfig require_valid(const SimulationConfig& cfg);

} // namespace chaotun
