#include "chaotun/cli.hpp"

#include "chaotun/analysis.hpp"
#include "chaotun/config_file.hpp"
#include "chaotun/io.hpp"
#include "chaotun/propagator.hpp"
#include "chaotun/spectrum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>

#ifndef CHAOTUN_PRESET_DIR
#define CHAOTUN_PRESET_DIR "configs"
#endif

namespace chaotun {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config;
    std::string out_dir = ".";
    std::string presets = CHAOTUN_PRESET_DIR;
    int workers = 0;
    std::optional<double> dt;
    std::optional<double> t_total;
    std::optional<double> lag;
    std::optional<std::size_t> bins;
    bool seedless = false;

    std::string series;
    bool dimension = false;
    double from_factor = 0.7;
    double to_factor = 1.3;
    std::size_t steps = 25;
    std::optional<double> omega_min;
    std::optional<double> omega_max;
    std::optional<double> duration;
    std::size_t samples = 1 << 16;
    std::string figure;
};

SimulationConfig load(const Options& o, const std::string& path)
{
    SimulationConfig cfg = path.empty() ? SimulationConfig{} : load_config(path);
    if (o.dt) {
        cfg.dt = *o.dt;
    }
    if (o.t_total) {
        cfg.t_total = *o.t_total;
    }
    if (o.lag) {
        cfg.analysis.lag_time = *o.lag;
        cfg.analysis.lag_in_samples = false;
    }
    if (o.bins) {
        cfg.analysis.n_bins = *o.bins;
    }
    return require_valid(cfg);
}

/// Spectrum plus carrier resolution; prints validation warnings.
Spectrum prepare(SimulationConfig& cfg, std::ostream& err)
{
    Spectrum spectrum = compute_spectrum(cfg);
    cfg = resolve_carrier(cfg, spectrum);
    for (const auto& w : validate_config(cfg, spectrum.max_level_spacing()).warnings) {
        err << "warning: " << w << '\n';
    }
    return spectrum;
}

OccupationSeries obtain_series(const Options& o, SimulationConfig& cfg, RunManifest& manifest,
                               std::ostream& out, std::ostream& err)
{
    if (!o.series.empty()) {
        return read_samples_csv(o.series, 0);
    }
    const Spectrum spectrum = prepare(cfg, err);
    const PropagationResult run = propagate(cfg, spectrum);
    const fs::path samples = fs::path(o.out_dir) / "samples.csv";
    write_samples_csv(samples, run.samples);
    manifest.add(samples);
    if (!run.complete) {
        throw std::runtime_error("propagation failed: " + run.failure);
    }
    out << "propagated " << run.samples.size() << " samples to t = "
        << format_double(run.final_state.t) << '\n';
    return run.occupation(0, cfg.sample_interval());
}

int cmd_spectrum(const Options& o, std::ostream& out, std::ostream& err)
{
    SimulationConfig cfg = load(o, o.config);
    RunManifest manifest("spectrum", o.out_dir);
    manifest.set_config(cfg);
    const Spectrum s = prepare(cfg, err);
    out << std::setw(6) << "index" << std::setw(24) << "energy" << std::setw(14) << "left"
        << std::setw(14) << "right" << '\n';
    for (const auto& state : s.states) {
        const double left = left_fraction(state, cfg.grid, cfg.well);
        out << std::setw(6) << state.index << std::setw(24) << format_double(state.energy)
            << std::setw(14) << std::fixed << std::setprecision(6) << left << std::setw(14)
            << 1.0 - left << std::defaultfloat << '\n';
    }
    out << "bound states: " << s.bound_count << '\n'
        << "Omega = E1 - E0 = " << format_double(s.omega_carrier) << '\n'
        << "kappa = |<0|p|1>| = " << format_double(s.kappa) << '\n'
        << "A0 * kappa = " << format_double(cfg.drive.a0 * s.kappa) << '\n';
    const fs::path csv = fs::path(o.out_dir) / "spectrum.csv";
    write_spectrum_csv(csv, s, cfg.grid, cfg.well);
    manifest.add(csv);
    manifest.finish();
    return exit_ok;
}

int cmd_propagate(const Options& o, std::ostream& out, std::ostream& err)
{
    SimulationConfig cfg = load(o, o.config);
    RunManifest manifest("propagate", o.out_dir);
    manifest.set_config(cfg);
    const Spectrum spectrum = prepare(cfg, err);

    std::optional<SnapshotWriter> writer;
    const fs::path psi = fs::path(o.out_dir) / "psi.bin";
    SnapshotSink snapshots;
    if (cfg.snapshot_stride > 0) {
        fs::create_directories(o.out_dir);
        writer.emplace(psi, cfg.grid);
        snapshots = [&writer](const WaveFunction& w) { writer->write(w); };
    }
    const PropagationResult run = propagate(cfg, spectrum, {}, snapshots);
    writer.reset();

    const fs::path csv = fs::path(o.out_dir) / "samples.csv";
    write_samples_csv(csv, run.samples);
    manifest.add(csv);
    if (cfg.snapshot_stride > 0) {
        manifest.add(psi);
    }
    double worst = 0.0;
    for (const auto& s : run.samples) {
        worst = std::max(worst, std::abs(s.norm - 1.0));
    }
    out << "samples: " << run.samples.size() << ", final t = " << format_double(run.final_state.t)
        << ", max |norm - 1| = " << format_double(worst) << '\n';
    if (cfg.dwell_interval && !run.samples.empty()) {
        out << "dwell time in [" << format_double(cfg.dwell_interval->first) << ", "
            << format_double(cfg.dwell_interval->second)
            << "] = " << format_double(dwell_time(run.samples, run.samples.back().t)) << '\n';
    }
    manifest.finish();
    if (!run.complete) {
        throw std::runtime_error("propagation failed: " + run.failure);
    }
    return exit_ok;
}

int cmd_density(const Options& o, std::ostream& out, std::ostream& err)
{
    SimulationConfig cfg = load(o, o.config);
    RunManifest manifest("density", o.out_dir);
    manifest.set_config(cfg);
    const OccupationSeries series = obtain_series(o, cfg, manifest, out, err);
    const VisitingDensity d = visiting_density(series, cfg.analysis.n_bins);
    const fs::path csv = fs::path(o.out_dir) / "density.csv";
    const fs::path plot = fs::path(o.out_dir) / "density.gp";
    write_density_csv(csv, d);
    write_density_plot(plot, {{csv, "xi(N0)", false}});
    manifest.add(csv);
    manifest.add(plot);
    out << "breakdown (edge_fraction " << format_double(cfg.analysis.edge_fraction)
        << ") = " << format_double(breakdown_metric(d, cfg.analysis)) << '\n';
    manifest.finish();
    return exit_ok;
}

std::vector<double> dimension_radii(const EmbeddedPath& path)
{
    const double diameter = bounding_diameter(path);
    return log_radii(0.01 * diameter, 0.1 * diameter, 8);
}

int cmd_embed(const Options& o, std::ostream& out, std::ostream& err)
{
    SimulationConfig cfg = load(o, o.config);
    RunManifest manifest("embed", o.out_dir);
    manifest.set_config(cfg);
    const OccupationSeries series = obtain_series(o, cfg, manifest, out, err);
    const std::size_t lag = lag_steps_for(series, cfg.analysis);
    const EmbeddedPath path = delay_embed(series, lag);
    const fs::path csv = fs::path(o.out_dir) / "embedding.csv";
    const fs::path plot = fs::path(o.out_dir) / "embedding.gp";
    write_embedding_csv(csv, path);
    write_embedding_plot(plot, {{csv, "lag " + std::to_string(lag) + " samples", false}});
    manifest.add(csv);
    manifest.add(plot);
    out << "embedded " << path.points.size() << " points with lag " << lag << " samples\n";
    if (o.dimension) {
        out << "correlation dimension = "
            << format_double(correlation_dimension_estimate(path, dimension_radii(path), lag))
            << '\n';
    }
    manifest.finish();
    return exit_ok;
}

int cmd_scan(const Options& o, std::ostream& out, std::ostream& err)
{
    SimulationConfig cfg = load(o, o.config);
    RunManifest manifest("scan", o.out_dir);
    manifest.set_config(cfg);
    const Spectrum spectrum = prepare(cfg, err);
    const double rwa = std::abs(cfg.drive.a0) * spectrum.kappa;
    const double lo = o.omega_min.value_or(o.from_factor * rwa);
    const double hi = o.omega_max.value_or(o.to_factor * rwa);
    const std::vector<double> grid = linear_grid(lo, hi, o.steps);
    const ScanResult scan =
        resonance_scan(cfg, grid, propagation_runner(spectrum), o.workers);
    const fs::path csv = fs::path(o.out_dir) / "scan.csv";
    const fs::path plot = fs::path(o.out_dir) / "scan.gp";
    write_scan_csv(csv, scan);
    write_scan_plot(plot, csv);
    manifest.add(csv);
    manifest.add(plot);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!scan.errors[k].empty()) {
            err << "warning: omega = " << format_double(grid[k]) << " failed: " << scan.errors[k]
                << '\n';
        }
    }
    out << "A0 * kappa = " << format_double(rwa) << '\n'
        << "omega_prm = " << format_double(scan.omega_prm) << " (breakdown "
        << format_double(*scan.breakdown[scan.best_index]) << ", "
        << format_double(100.0 * (scan.omega_prm / rwa - 1.0)) << " % from A0 * kappa)\n";
    manifest.finish();
    return exit_ok;
}

int cmd_triplet(const Options& o, std::ostream& out, std::ostream& err)
{
    SimulationConfig cfg = load(o, o.config);
    RunManifest manifest("triplet", o.out_dir);
    manifest.set_config(cfg);
    const Spectrum spectrum = prepare(cfg, err);
    const double periods = 20.0;
    const double duration =
        o.duration.value_or(cfg.drive.omega_mod > 0.0
                                ? periods * 2.0 * 3.141592653589793 / cfg.drive.omega_mod
                                : 2000.0);
    const TripletSpectrum t = triplet_spectrum(cfg.drive, spectrum.kappa, duration, o.samples);
    const fs::path csv = fs::path(o.out_dir) / "triplet.csv";
    write_triplet_csv(csv, t);
    manifest.add(csv);
    for (const auto& line : t.lines) {
        out << "line at " << format_double(line.frequency) << " amplitude "
            << format_double(line.amplitude) << '\n';
    }
    if (t.satellite_ratio) {
        out << "satellite / carrier = " << format_double(*t.satellite_ratio)
            << " (epsilon / 2 = " << format_double(0.5 * cfg.drive.epsilon) << ")\n";
    }
    manifest.finish();
    return exit_ok;
}

int cmd_reproduce(const Options& o, std::ostream& out, std::ostream& err)
{
    if (o.figure != "fig2" && o.figure != "fig3") {
        throw CLI::ValidationError("reproduce", "figure must be fig2 or fig3");
    }
    RunManifest manifest("reproduce " + o.figure, o.out_dir);
    const fs::path presets(o.presets);
    const std::array<std::pair<std::string, bool>, 2> runs{
        {{"unmodulated", true}, {"modulated", false}}};
    std::vector<PlotSeries> plots;
    for (const auto& [name, dashed] : runs) {
        SimulationConfig cfg = load(o, (presets / ("reference_" + name + ".ini")).string());
        if (name == "modulated") {
            manifest.set_config(cfg);
        }
        const Spectrum spectrum = prepare(cfg, err);
        const PropagationResult run = propagate(cfg, spectrum);
        if (!run.complete) {
            throw std::runtime_error(name + " propagation failed: " + run.failure);
        }
        const fs::path samples = fs::path(o.out_dir) / ("samples_" + name + ".csv");
        write_samples_csv(samples, run.samples);
        manifest.add(samples);
        const OccupationSeries series = run.occupation(0, cfg.sample_interval());
        if (o.figure == "fig2") {
            const std::size_t lag = lag_steps_for(series, cfg.analysis);
            const EmbeddedPath path = delay_embed(series, lag);
            const fs::path csv = fs::path(o.out_dir) / ("embedding_" + name + ".csv");
            write_embedding_csv(csv, path);
            manifest.add(csv);
            plots.push_back({csv, name, dashed});
            out << name << ": correlation dimension "
                << format_double(
                       correlation_dimension_estimate(path, dimension_radii(path), lag))
                << '\n';
        } else {
            const VisitingDensity d = visiting_density(series, cfg.analysis.n_bins);
            const fs::path csv = fs::path(o.out_dir) / ("density_" + name + ".csv");
            write_density_csv(csv, d);
            manifest.add(csv);
            plots.push_back({csv, name, dashed});
            out << name << ": breakdown " << format_double(breakdown_metric(d, cfg.analysis))
                << '\n';
        }
    }
    const fs::path script = fs::path(o.out_dir) / (o.figure + ".gp");
    if (o.figure == "fig2") {
        write_embedding_plot(script, plots);
    } else {
        write_density_plot(script, plots);
    }
    manifest.add(script);
    manifest.finish();
    return exit_ok;
}

void error_record(std::ostream& err, const std::string& kind, const std::string& message,
                  const std::vector<Violation>& violations = {})
{
    nlohmann::json j;
    j["error"] = kind;
    j["message"] = message;
    if (!violations.empty()) {
        j["violations"] = nlohmann::json::array();
        for (const auto& v : violations) {
            j["violations"].push_back({{"field", v.field}, {"message", v.message}});
        }
    }
    err << j.dump() << '\n';
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Driven tunneling in a rectangular double well", "chaotun"};
    app.require_subcommand(1);
    Options o;

    auto common = [&o](CLI::App* sub) {
        sub->add_option("--config", o.config, "Configuration file");
        sub->add_option("--out", o.out_dir, "Output directory");
        sub->add_option("--workers", o.workers, "Worker threads (default: all)");
        sub->add_option("--dt", o.dt, "Time step");
        sub->add_option("--t-total", o.t_total, "Simulated time");
        sub->add_option("--lag", o.lag, "Embedding lag in time units");
        sub->add_option("--bins", o.bins, "Density bins");
        sub->add_flag("--seedless", o.seedless, "Accepted for scripts; every run is deterministic");
    };
    auto with_series = [&o](CLI::App* sub) {
        sub->add_option("--series", o.series, "Read N0 from a samples CSV instead of propagating");
    };

    CLI::App* spectrum = app.add_subcommand("spectrum", "Bound states, Omega and kappa");
    common(spectrum);
    CLI::App* prop = app.add_subcommand("propagate", "Crank-Nicolson run to samples.csv");
    common(prop);
    CLI::App* density = app.add_subcommand("density", "Visiting-frequency density of N0");
    common(density);
    with_series(density);
    CLI::App* embed = app.add_subcommand("embed", "Delay embedding of N0");
    common(embed);
    with_series(embed);
    embed->add_flag("--dimension", o.dimension, "Also print the correlation dimension");
    CLI::App* scan = app.add_subcommand("scan", "Parametric resonance scan over omega");
    common(scan);
    scan->add_option("--from", o.from_factor, "Lowest omega as a multiple of A0 kappa");
    scan->add_option("--to", o.to_factor, "Highest omega as a multiple of A0 kappa");
    scan->add_option("--omega-min", o.omega_min, "Lowest omega (absolute)");
    scan->add_option("--omega-max", o.omega_max, "Highest omega (absolute)");
    scan->add_option("--steps", o.steps, "Number of frequencies")->check(CLI::PositiveNumber);
    CLI::App* triplet = app.add_subcommand("triplet", "Spectral lines of the modulated pulse");
    common(triplet);
    triplet->add_option("--duration", o.duration, "Sampled time span");
    triplet->add_option("--samples", o.samples, "Number of samples (power of two)");
    CLI::App* reproduce = app.add_subcommand("reproduce", "Regenerate a reference figure");
    common(reproduce);
    reproduce->add_option("figure", o.figure, "fig2 or fig3")->required();
    reproduce->add_option("--presets", o.presets, "Directory of preset configs");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << app.help() << '\n';
        error_record(err, "usage", e.what());
        return exit_usage;
    }

    try {
        if (spectrum->parsed()) {
            return cmd_spectrum(o, out, err);
        }
        if (prop->parsed()) {
            return cmd_propagate(o, out, err);
        }
        if (density->parsed()) {
            return cmd_density(o, out, err);
        }
        if (embed->parsed()) {
            return cmd_embed(o, out, err);
        }
        if (scan->parsed()) {
            return cmd_scan(o, out, err);
        }
        if (triplet->parsed()) {
            return cmd_triplet(o, out, err);
        }
        return cmd_reproduce(o, out, err);
    } catch (const ConfigError& e) {
        error_record(err, "config", e.what(), e.violations());
        return exit_config_error;
    } catch (const ConfigParseError& e) {
        error_record(err, "config", e.what());
        return exit_config_error;
    } catch (const CLI::ValidationError& e) {
        err << app.help() << '\n';
        error_record(err, "usage", e.what());
        return exit_usage;
    } catch (const std::exception& e) {
        error_record(err, "runtime", e.what());
        return exit_runtime_error;
    }
}

} // namespace chaotun
