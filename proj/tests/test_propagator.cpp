#include "chaotun/propagator.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

using namespace chaotun;

namespace {

// Coarse but converged enough for dynamics checks: box 30, dx 0.04.
SimulationConfig coarse()
{
    SimulationConfig cfg;
    cfg.margin_factor = 5.0;
    cfg.grid = Grid::centered(30.0, 0.04);
    cfg.dt = 0.02;
    cfg.sample_stride = 50;
    return require_valid(cfg);
}

cplx overlap(const WaveFunction& a, const WaveFunction& b, double dx)
{
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i) {
        s += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    }
    return s * dx;
}

} // namespace

TEST_CASE("drive coefficient")
{
    Drive d{0.3, 0.0, 0.0, 2.0, 0.0};
    CHECK(drive_operator_coefficient(d, 0.0) == 0.0);
    CHECK(drive_operator_coefficient(d, 0.25 * std::numbers::pi) == doctest::Approx(-0.3));
    Drive m{0.3, 0.1, 2.0, 2.0, 0.0};
    CHECK(drive_operator_coefficient(m, 0.25 * std::numbers::pi) == doctest::Approx(-0.27));
}

TEST_CASE("an eigenstate without drive stays put")
{
    SimulationConfig cfg = coarse();
    cfg.drive.a0 = 0.0;
    cfg.t_total = 200.0;
    const Spectrum s = compute_spectrum(cfg);
    const PropagationResult r = propagate(resolve_carrier(cfg, s), s);
    REQUIRE(r.complete);
    for (const auto& x : r.samples) {
        CHECK(std::abs(x.occupations[0] - 1.0) < 1e-9);
    }
}

TEST_CASE("zero duration yields one sample at N0 = 1")
{
    SimulationConfig cfg = coarse();
    cfg.t_total = 0.0;
    const Spectrum s = compute_spectrum(cfg);
    const PropagationResult r = propagate(resolve_carrier(cfg, s), s);
    REQUIRE(r.samples.size() == 1);
    CHECK(r.samples[0].t == 0.0);
    CHECK(r.samples[0].occupations[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("norm is preserved step by step and occupations stay in range")
{
    SimulationConfig cfg = coarse();
    cfg.t_total = 400.0;
    cfg.sample_stride = 1;
    cfg.drive.epsilon = 0.1;
    cfg.drive.omega_mod = 0.0175;
    const Spectrum s = compute_spectrum(cfg);
    const PropagationResult r = propagate(resolve_carrier(cfg, s), s);
    REQUIRE(r.complete);
    double prev = 1.0;
    for (const auto& x : r.samples) {
        CHECK(std::abs(x.norm - prev) < 1e-12);
        prev = x.norm;
        double sum = 0.0;
        for (double n : x.occupations) {
            CHECK(n >= 0.0);
            CHECK(n <= 1.0 + 1e-9);
            sum += n;
        }
        CHECK(sum <= 1.0 + 1e-9);
    }
}

TEST_CASE("the norm does not drift over many steps")
{
    SimulationConfig cfg = coarse();
    cfg.t_total = 2000.0;
    cfg.sample_stride = 100000;
    const Spectrum s = compute_spectrum(cfg);
    const PropagationResult r = propagate(resolve_carrier(cfg, s), s);
    REQUIRE(r.complete);
    CHECK(std::abs(r.samples.back().norm - r.samples.front().norm) < 1e-13);
}

TEST_CASE("stepping back with the reversed drive recovers the initial state")
{
    SimulationConfig cfg = coarse();
    cfg.drive.epsilon = 0.1;
    cfg.drive.omega_mod = 0.0175;
    const Spectrum s = compute_spectrum(cfg);
    cfg = resolve_carrier(cfg, s);
    CrankNicolson cn(cfg.grid, assemble_h0(cfg.grid, cfg.well, cfg.mass), cfg.drive);
    const WaveFunction start = from_bound_state(s.states[0]);
    WaveFunction psi = start;
    for (int i = 0; i < 1000; ++i) {
        cn.step(psi, cfg.dt);
    }
    CHECK(std::norm(overlap(start, psi, cfg.grid.dx())) < 0.999);
    for (int i = 0; i < 1000; ++i) {
        cn.step(psi, -cfg.dt);
    }
    CHECK(std::abs(psi.t) < 1e-9);
    CHECK(std::norm(overlap(start, psi, cfg.grid.dx())) > 1.0 - 1e-6);
}

TEST_CASE("flipping A0 together with a half-period carrier shift leaves N0 unchanged")
{
    SimulationConfig cfg = coarse();
    cfg.t_total = 500.0;
    cfg.drive.epsilon = 0.1;
    cfg.drive.omega_mod = 0.0175;
    const Spectrum s = compute_spectrum(cfg);
    cfg = resolve_carrier(cfg, s);
    SimulationConfig flipped = cfg;
    flipped.drive.a0 = -cfg.drive.a0;
    flipped.drive.carrier_phase = std::numbers::pi;
    const auto a = propagate(cfg, s);
    const auto b = propagate(flipped, s);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(std::abs(a.samples[i].occupations[0] - b.samples[i].occupations[0]) < 1e-8);
    }
}

TEST_CASE("resonant drive: N0 returns on the two-level Rabi period")
{
    SimulationConfig cfg = coarse();
    cfg.t_total = 600.0;
    cfg.sample_stride = 5;
    const Spectrum s = compute_spectrum(cfg);
    cfg = resolve_carrier(cfg, s);
    const double rabi = cfg.drive.a0 * s.kappa;
    const double expected = oracle::rwa_first_return(rabi, 0.05);
    CHECK(expected == doctest::Approx(2.0 * std::numbers::pi / rabi).epsilon(1e-4));

    const auto r = propagate(cfg, s);
    const auto series = r.occupation(0, cfg.sample_interval());
    bool dipped = false;
    double found = 0.0;
    for (std::size_t i = 1; i + 1 < series.values.size(); ++i) {
        dipped = dipped || series.values[i] < 0.5;
        if (dipped && series.values[i] > 0.9 && series.values[i] >= series.values[i - 1] &&
            series.values[i] > series.values[i + 1]) {
            found = static_cast<double>(i) * series.dt_sample;
            break;
        }
    }
    REQUIRE(found > 0.0);
    CHECK(std::abs(found - expected) / expected < 0.1);
}

TEST_CASE("time step convergence is second order")
{
    SimulationConfig cfg = coarse();
    cfg.t_total = 100.0;
    const Spectrum s = compute_spectrum(cfg);
    cfg = resolve_carrier(cfg, s);
    auto final_n0 = [&](double dt) {
        SimulationConfig c = cfg;
        c.dt = dt;
        c.sample_stride = static_cast<std::size_t>(std::llround(cfg.t_total / dt));
        return propagate(c, s).samples.back().occupations[0];
    };
    const double a = final_n0(0.02);
    const double b = final_n0(0.01);
    const double c = final_n0(0.005);
    const double order = std::log2(std::abs(a - b) / std::abs(b - c));
    CHECK(order > 1.7);
    CHECK(order < 2.3);
}

TEST_CASE("dwell time over the whole box equals the window")
{
    SimulationConfig cfg = coarse();
    cfg.t_total = 50.0;
    cfg.sample_stride = 25;
    cfg.dwell_interval = {{cfg.grid.x_min, cfg.grid.x_max}};
    const Spectrum s = compute_spectrum(cfg);
    const auto r = propagate(resolve_carrier(cfg, s), s);
    CHECK(dwell_time(r.samples, 50.0) == doctest::Approx(50.0).epsilon(1e-9));
    CHECK(dwell_time(r.samples, 30.0) == doctest::Approx(30.0).epsilon(1e-9));
}

TEST_CASE("dwell time from snapshots")
{
    SimulationConfig cfg = coarse();
    cfg.drive.a0 = 0.0;
    const Spectrum s = compute_spectrum(cfg);
    const BoundState& ground = s.states[0];
    std::vector<double> density(ground.amplitudes.size());
    for (std::size_t i = 0; i < density.size(); ++i) {
        density[i] = ground.amplitudes[i] * ground.amplitudes[i];
    }
    std::vector<DensitySnapshot> snaps;
    for (int k = 0; k <= 10; ++k) {
        snaps.push_back({10.0 * k, density});
    }
    const Grid& g = cfg.grid;
    const double deep_lo = cfg.well.u_left > cfg.well.u_right ? cfg.well.a - 1.0 : cfg.well.c;
    const double deep_hi = cfg.well.u_left > cfg.well.u_right ? 0.5 * (cfg.well.b + cfg.well.c)
                                                              : cfg.well.d + 1.0;
    CHECK(dwell_time(snaps, g, g.x_min, g.x_max, 100.0) == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(dwell_time(snaps, g, deep_lo, deep_hi, 100.0) >= 90.0);
    CHECK(dwell_time(snaps, g, 0.3, 0.3, 100.0) == 0.0);
    CHECK_THROWS((void)dwell_time(snaps, g, g.x_min - 1.0, 0.0, 100.0));
}

TEST_CASE("snapshot files round-trip")
{
    SimulationConfig cfg = coarse();
    cfg.t_total = 10.0;
    cfg.snapshot_stride = 100;
    const Spectrum s = compute_spectrum(cfg);
    const auto path = std::filesystem::temp_directory_path() / "chaotun_test_psi.bin";
    std::vector<WaveFunction> seen;
    {
        SnapshotWriter w(path, cfg.grid);
        const auto r = propagate(resolve_carrier(cfg, s), s, {}, [&](const WaveFunction& psi) {
            w.write(psi);
            seen.push_back(psi);
        });
        REQUIRE(r.complete);
    }
    const SnapshotFile f = read_snapshots(path);
    CHECK(f.grid_size == cfg.grid.n_interior);
    CHECK(f.dx == cfg.grid.dx());
    REQUIRE(f.snapshots.size() == seen.size());
    CHECK(seen.size() >= 2);
    for (std::size_t k = 0; k < seen.size(); ++k) {
        CHECK(f.snapshots[k].t == seen[k].t);
        CHECK(f.snapshots[k].amplitudes == seen[k].amplitudes);
    }
    std::filesystem::remove(path);
}
