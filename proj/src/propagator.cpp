#include "chaotun/propagator.hpp"

#include "chaotun/kernels.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <functional>
#include <stdexcept>

namespace chaotun {

double WaveFunction::norm(double dx) const
{
    return kernels::omp::norm_squared(amplitudes) * dx;
}

WaveFunction from_bound_state(const BoundState& state)
{
    WaveFunction psi;
    psi.amplitudes.assign(state.amplitudes.begin(), state.amplitudes.end());
    return psi;
}

double drive_operator_coefficient(const Drive& drive, double t) noexcept
{
    return -drive_amplitude(drive, t) * std::sin(drive.omega_carrier * t + drive.carrier_phase);
}

CrankNicolson::CrankNicolson(const Grid& grid, const SymTridiagonal& h0, const Drive& drive,
                             double energy_reference)
    : h_diag_(h0.diag),
      h_off_(h0.off.empty() ? 0.0 : h0.off.front()),
      inv_two_dx_(0.5 / grid.dx()),
      drive_(drive),
      rhs_(h0.size()),
      solution_(h0.size()),
      residual_(h0.size())
{
    // The kinetic stencil has a constant off-diagonal.
    for (double o : h0.off) {
        if (o != h_off_) {
            throw std::invalid_argument("CrankNicolson needs a constant off-diagonal in H0");
        }
    }
    potential_.reserve(h_diag_.size());
    for (double& d : h_diag_) {
        d -= energy_reference;
        potential_.push_back(d + 2.0 * h_off_);
    }
}

void CrankNicolson::step(WaveFunction& psi, double dt)
{
    const double half_dt = 0.5 * dt;
    if (a_diag_.size() != h_diag_.size() || a_diag_dt_ != dt) {
        a_diag_.resize(h_diag_.size());
        for (std::size_t i = 0; i < h_diag_.size(); ++i) {
            a_diag_[i] = cplx{1.0, half_dt * h_diag_[i]};
        }
        a_diag_dt_ = dt;
    }
    const double g = drive_operator_coefficient(drive_, psi.t + half_dt);
    // p couples i to i+1 with -i/(2dx) and to i-1 with +i/(2dx).
    const cplx h_upper{h_off_, -g * inv_two_dx_};
    const cplx h_lower{h_off_, g * inv_two_dx_};
    kernels::omp::cn_rhs(h_diag_, h_upper, h_lower, half_dt, psi.amplitudes, rhs_);

    const cplx i_half_dt{0.0, half_dt};
    factorization_.factor(i_half_dt * h_lower, a_diag_, i_half_dt * h_upper);
    std::copy(rhs_.begin(), rhs_.end(), solution_.begin());
    factorization_.solve(solution_);
    // Elimination roundoff is biased; without this the norm drifts ~5e-16 per step.
    kernels::omp::cn_residual(potential_, h_off_, g * inv_two_dx_, half_dt, rhs_, solution_,
                              residual_);
    factorization_.solve(residual_);
    std::transform(solution_.begin(), solution_.end(), residual_.begin(), solution_.begin(),
                   std::plus<>{});
    psi.amplitudes.swap(solution_);
    psi.t += dt;
}

OccupationSeries PropagationResult::occupation(std::size_t k, double dt_sample) const
{
    OccupationSeries s;
    s.dt_sample = dt_sample;
    s.values.reserve(samples.size());
    for (const auto& sample : samples) {
        s.values.push_back(sample.occupations.at(k));
    }
    return s;
}

SimulationConfig resolve_carrier(const SimulationConfig& cfg, const Spectrum& spectrum)
{
    SimulationConfig out = cfg;
    if (cfg.resonant_carrier) {
        out.drive.omega_carrier = spectrum.omega_carrier;
    }
    return out;
}

namespace {

ObservableSample observe(const WaveFunction& psi, std::span<const double> basis,
                         std::size_t n_states, const SimulationConfig& cfg,
                         std::vector<cplx>& overlaps, std::vector<double>& density)
{
    const double dx = cfg.grid.dx();
    ObservableSample s;
    s.t = psi.t;
    overlaps.resize(n_states);
    kernels::omp::project(basis, psi.amplitudes, overlaps);
    s.occupations.resize(n_states);
    for (std::size_t k = 0; k < n_states; ++k) {
        s.occupations[k] = std::norm(overlaps[k] * dx);
    }
    s.norm = psi.norm(dx);
    if (cfg.dwell_interval) {
        density.resize(psi.amplitudes.size());
        std::transform(psi.amplitudes.begin(), psi.amplitudes.end(), density.begin(),
                       [](const cplx& z) { return std::norm(z); });
        s.interval_probability = integrate_density(cfg.grid, density, cfg.dwell_interval->first,
                                                   cfg.dwell_interval->second);
    }
    return s;
}

} // namespace

PropagationResult propagate(const SimulationConfig& cfg, const Spectrum& spectrum,
                            const SampleSink& sink, const SnapshotSink& snapshots)
{
    const std::size_t start = cfg.initial_state.state_index();
    if (start >= spectrum.states.size()) {
        throw std::invalid_argument("initial state index " + std::to_string(start) +
                                    " exceeds the " + std::to_string(spectrum.states.size()) +
                                    " computed bound states");
    }
    const std::size_t n = cfg.grid.n_interior;
    const std::size_t n_states = spectrum.states.size();
    std::vector<double> basis(n_states * n);
    for (std::size_t k = 0; k < n_states; ++k) {
        std::copy(spectrum.states[k].amplitudes.begin(), spectrum.states[k].amplitudes.end(),
                  basis.begin() + static_cast<std::ptrdiff_t>(k * n));
    }

    const SymTridiagonal h0 = assemble_h0(cfg.grid, cfg.well, cfg.mass);
    const double reference = 0.5 * (spectrum.states[0].energy + spectrum.states[1].energy);
    CrankNicolson stepper(cfg.grid, h0, cfg.drive, reference);

    PropagationResult result;
    WaveFunction psi = from_bound_state(spectrum.states[start]);
    std::vector<cplx> overlaps;
    std::vector<double> density;

    auto emit = [&](const WaveFunction& state) {
        result.samples.push_back(observe(state, basis, n_states, cfg, overlaps, density));
        if (sink) {
            sink(result.samples.back());
        }
    };

    const std::size_t steps = cfg.step_count();
    emit(psi);
    if (snapshots && cfg.snapshot_stride > 0) {
        snapshots(psi);
    }
    for (std::size_t s = 1; s <= steps; ++s) {
        try {
            stepper.step(psi, cfg.dt);
            // Recompute t from the step index to avoid drift in long runs.
            psi.t = static_cast<double>(s) * cfg.dt;
        } catch (const SolverBreakdown& e) {
            result.complete = false;
            result.failure = std::string("step ") + std::to_string(s) + ": " + e.what();
            break;
        }
        if (s % cfg.sample_stride == 0) {
            emit(psi);
            if (!std::isfinite(result.samples.back().norm)) {
                result.complete = false;
                result.failure = "non-finite norm at t = " + std::to_string(psi.t);
                break;
            }
        }
        if (snapshots && cfg.snapshot_stride > 0 && s % cfg.snapshot_stride == 0) {
            snapshots(psi);
        }
    }
    result.final_state = std::move(psi);
    return result;
}

double integrate_density(const Grid& grid, std::span<const double> density, double lo,
                         double hi)
{
    if (lo < grid.x_min || hi > grid.x_max || lo > hi) {
        throw std::invalid_argument("integration interval [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "] must lie inside the box");
    }
    const double dx = grid.dx();
    const std::size_t cells = grid.n_interior + 1;
    // Node j in [0, cells] sits at x_min + j dx; walls carry zero.
    auto value = [&](std::size_t j) {
        return (j == 0 || j == cells) ? 0.0 : density[j - 1];
    };
    auto interpolate = [&](double x, std::size_t cell) {
        const double f = (x - (grid.x_min + static_cast<double>(cell) * dx)) / dx;
        return (1.0 - f) * value(cell) + f * value(cell + 1);
    };
    auto cell_of = [&](double x) {
        const auto c = static_cast<std::size_t>(std::floor((x - grid.x_min) / dx));
        return std::min(c, cells - 1);
    };

    double total = 0.0;
    const std::size_t first = cell_of(lo);
    const std::size_t last = cell_of(hi);
    for (std::size_t c = first; c <= last; ++c) {
        const double left = grid.x_min + static_cast<double>(c) * dx;
        const double a = std::max(lo, left);
        const double b = std::min(hi, left + dx);
        if (b > a) {
            total += 0.5 * (b - a) * (interpolate(a, c) + interpolate(b, c));
        }
    }
    return total;
}

namespace {

/// Trapezoid over (t, f) pairs on [0, window], interpolating at the window end.
double trapezoid_window(std::span<const double> t, std::span<const double> f, double window)
{
    if (t.empty() || t.front() != 0.0) {
        throw std::invalid_argument("dwell-time samples must start at t = 0");
    }
    if (t.back() < window) {
        throw std::invalid_argument("dwell-time samples end at t = " + std::to_string(t.back()) +
                                    ", before the window " + std::to_string(window));
    }
    double total = 0.0;
    for (std::size_t k = 1; k < t.size() && t[k - 1] < window; ++k) {
        const double t0 = t[k - 1];
        double t1 = t[k];
        double f1 = f[k];
        if (t1 > window) {
            f1 = f[k - 1] + (f[k] - f[k - 1]) * (window - t0) / (t1 - t0);
            t1 = window;
        }
        total += 0.5 * (t1 - t0) * (f[k - 1] + f1);
    }
    return total;
}

} // namespace

double dwell_time(std::span<const DensitySnapshot> snapshots, const Grid& grid, double lo,
                  double hi, double window)
{
    std::vector<double> t;
    std::vector<double> p;
    for (const auto& snap : snapshots) {
        t.push_back(snap.t);
        p.push_back(integrate_density(grid, snap.density, lo, hi));
    }
    return trapezoid_window(t, p, window);
}

double dwell_time(std::span<const ObservableSample> samples, double window)
{
    std::vector<double> t;
    std::vector<double> p;
    for (const auto& s : samples) {
        if (!s.interval_probability) {
            throw std::invalid_argument("samples carry no interval probability");
        }
        t.push_back(s.t);
        p.push_back(*s.interval_probability);
    }
    return trapezoid_window(t, p, window);
}

namespace {

template <typename T>
void put_le(std::ostream& out, T value)
{
    std::array<char, sizeof(T)> bytes{};
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in)
{
    std::array<char, sizeof(T)> bytes{};
    in.read(bytes.data(), bytes.size());
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

} // namespace

SnapshotWriter::SnapshotWriter(const std::filesystem::path& path, const Grid& grid)
    : out_(path, std::ios::binary), n_(grid.n_interior)
{
    if (!out_) {
        throw std::runtime_error("cannot open snapshot file " + path.string());
    }
    out_.write("PSI1", 4);
    put_le<std::uint32_t>(out_, static_cast<std::uint32_t>(n_));
    put_le<double>(out_, grid.dx());
}

void SnapshotWriter::write(const WaveFunction& psi)
{
    if (psi.amplitudes.size() != n_) {
        throw std::invalid_argument("snapshot size does not match the grid");
    }
    put_le<double>(out_, psi.t);
    for (const cplx& z : psi.amplitudes) {
        put_le<double>(out_, z.real());
        put_le<double>(out_, z.imag());
    }
}

SnapshotFile read_snapshots(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open snapshot file " + path.string());
    }
    std::array<char, 4> magic{};
    in.read(magic.data(), 4);
    if (!in || std::string(magic.data(), 4) != "PSI1") {
        throw std::runtime_error(path.string() + " is not a PSI1 snapshot file");
    }
    SnapshotFile file;
    file.grid_size = get_le<std::uint32_t>(in);
    file.dx = get_le<double>(in);
    while (in.peek() != std::char_traits<char>::eof()) {
        WaveFunction psi;
        psi.t = get_le<double>(in);
        psi.amplitudes.resize(file.grid_size);
        for (auto& z : psi.amplitudes) {
            const double re = get_le<double>(in);
            const double im = get_le<double>(in);
            z = {re, im};
        }
        if (!in) {
            throw std::runtime_error(path.string() + ": truncated snapshot record");
        }
        file.snapshots.push_back(std::move(psi));
    }
    return file;
}

} // namespace chaotun
