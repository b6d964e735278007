#include "chaotun/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chaotun {

Grid Grid::centered(double length, double target_dx)
{
    Grid g;
    g.x_min = -0.5 * length;
    g.x_max = 0.5 * length;
    const double cells = std::round(length / target_dx);
    g.n_interior = cells > 1.0 ? static_cast<std::size_t>(cells) - 1 : 0;
    return g;
}

DoubleWell DoubleWell::centered(double left_width, double left_depth, double gap,
                                double right_width, double right_depth)
{
    DoubleWell w;
    const double extent = left_width + gap + right_width;
    w.a = -0.5 * extent;
    w.b = w.a + left_width;
    w.c = w.b + gap;
    w.d = w.c + right_width;
    w.u_left = left_depth;
    w.u_right = right_depth;
    return w;
}

DoubleWell reference_well()
{
    return DoubleWell::centered(2.337, 13.82, 0.876, 2.045, 11.91);
}

double evaluate_potential(const DoubleWell& well, double x) noexcept
{
    if (well.a <= x && x <= well.b) {
        return -well.u_left;
    }
    if (well.c <= x && x <= well.d) {
        return -well.u_right;
    }
    return 0.0;
}

namespace {

double overlap(double lo, double hi, double a, double b) noexcept
{
    return std::max(0.0, std::min(hi, b) - std::max(lo, a));
}

} // namespace

double cell_average_potential(const DoubleWell& well, double lo, double hi) noexcept
{
    const double left = overlap(lo, hi, well.a, well.b);
    const double right = overlap(lo, hi, well.c, well.d);
    return -(well.u_left * left + well.u_right * right) / (hi - lo);
}

double drive_amplitude(const Drive& drive, double t) noexcept
{
    return drive.a0 * (1.0 - drive.epsilon * std::sin(drive.omega_mod * t));
}

std::size_t SimulationConfig::step_count() const noexcept
{
    return static_cast<std::size_t>(std::llround(t_total / dt));
}

namespace {

class Checker {
public:
    void require(bool condition, std::string field, const std::string& what, double actual)
    {
        if (!condition) {
            std::ostringstream os;
            os.precision(17);
            os << what << " (actual " << actual << ")";
            violations.push_back({std::move(field), os.str()});
        }
    }
    std::vector<Violation> violations;
};

} // namespace

Validation validate_config(const SimulationConfig& cfg, std::optional<double> level_spacing)
{
    Checker check;
    const Grid& g = cfg.grid;
    const DoubleWell& w = cfg.well;

    check.require(g.x_min < g.x_max, "grid.x_min", "must be below grid.x_max", g.x_min);
    check.require(g.n_interior >= 3, "grid.n_interior", "must be at least 3",
                  static_cast<double>(g.n_interior));

    check.require(w.a < w.b, "well.a", "shaft edges must satisfy a < b", w.a);
    check.require(w.b <= w.c, "well.b", "shaft edges must satisfy b <= c", w.b);
    check.require(w.c < w.d, "well.c", "shaft edges must satisfy c < d", w.c);
    check.require(w.u_left > 0.0, "well.left_depth", "must be positive", w.u_left);
    check.require(w.u_right > 0.0, "well.right_depth", "must be positive", w.u_right);
    check.require(w.u_left != w.u_right, "well.right_depth",
                  "must differ from well.left_depth (unsymmetrical well)", w.u_right);
    check.require(cfg.mass > 0.0, "well.mass", "must be positive", cfg.mass);

    check.require(cfg.margin_factor >= 5.0, "grid.margin_factor", "must be at least 5",
                  cfg.margin_factor);
    const double extent = w.extent();
    check.require(g.length() >= cfg.margin_factor * extent, "grid.box_length",
                  "must exceed margin_factor times the well extent " +
                      std::to_string(cfg.margin_factor * extent),
                  g.length());

    const Drive& dr = cfg.drive;
    check.require(std::isfinite(dr.a0), "drive.a0", "must be finite", dr.a0);
    check.require(dr.epsilon >= 0.0 && dr.epsilon < 1.0, "drive.epsilon",
                  "must lie in [0, 1)", dr.epsilon);
    check.require(dr.omega_mod >= 0.0, "drive.omega_mod", "must be non-negative",
                  dr.omega_mod);
    if (!cfg.resonant_carrier) {
        check.require(dr.omega_carrier > 0.0, "drive.omega_carrier", "must be positive",
                      dr.omega_carrier);
    }

    check.require(cfg.dt > 0.0, "run.dt", "must be positive", cfg.dt);
    check.require(cfg.t_total == 0.0 || cfg.t_total >= cfg.dt, "run.t_total",
                  "must be zero or at least run.dt", cfg.t_total);
    check.require(cfg.sample_stride >= 1, "run.sample_stride", "must be at least 1",
                  static_cast<double>(cfg.sample_stride));
    check.require(cfg.max_states >= 2, "run.max_states", "must be at least 2",
                  static_cast<double>(cfg.max_states));

    const AnalysisOptions& an = cfg.analysis;
    check.require(an.n_bins >= 2, "run.bins", "must be at least 2",
                  static_cast<double>(an.n_bins));
    check.require(an.edge_fraction > 0.0 && an.edge_fraction < 0.5, "run.edge_fraction",
                  "must lie in (0, 0.5)", an.edge_fraction);
    check.require(an.lag_time > 0.0, "run.lag", "must be positive", an.lag_time);

    Validation out;
    if (check.violations.empty()) {
        // Recentre the well in the box; the checks above are translation invariant
        // except for the edges-inside-box condition, tested on the result.
        SimulationConfig norm = cfg;
        const double shift = 0.5 * (g.x_min + g.x_max) - 0.5 * (w.a + w.d);
        norm.well.a += shift;
        norm.well.b += shift;
        norm.well.c += shift;
        norm.well.d += shift;
        check.require(norm.well.a > g.x_min && norm.well.d < g.x_max, "well.extent",
                      "shaft edges must lie strictly inside the box", extent);
        if (cfg.dwell_interval) {
            const auto [lo, hi] = *cfg.dwell_interval;
            check.require(lo <= hi, "run.dwell_from", "must not exceed run.dwell_to", lo);
            check.require(lo >= g.x_min && hi <= g.x_max, "run.dwell_to",
                          "dwell interval must lie inside the box", hi);
        }
        if (check.violations.empty()) {
            out.config = norm;
        }
    }
    out.violations = std::move(check.violations);

    if (level_spacing && cfg.dt * *level_spacing >= 0.1) {
        std::ostringstream os;
        os << "run.dt * max level spacing = " << cfg.dt * *level_spacing
           << " >= 0.1; time step may under-resolve the bound-state dynamics";
        out.warnings.push_back(os.str());
    }
    return out;
}

namespace {

std::string join(const std::vector<Violation>& vs)
{
    std::string s = "invalid configuration:";
    for (const auto& v : vs) {
        s += " [" + v.field + ": " + v.message + "]";
    }
    return s;
}

} // namespace

ConfigError::ConfigError(std::vector<Violation> violations)
    : violations_(std::move(violations)), message_(join(violations_))
{
}

SimulationConfig require_valid(const SimulationConfig& cfg)
{
    Validation v = validate_config(cfg);
    if (!v.ok()) {
        throw ConfigError(std::move(v.violations));
    }
    return *v.config;
}

} // namespace chaotun
