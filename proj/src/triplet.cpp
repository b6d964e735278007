#include "chaotun/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

namespace chaotun {

namespace {

// Periodic flat-top window; amplitude scalloping below 0.1 %, main lobe
// half-width five bins.
constexpr double flat_top[5] = {0.21557895, 0.41663158, 0.277263158, 0.083578947,
                                0.006947368};
constexpr std::size_t lobe_half_width = 5;

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

} // namespace

TripletSpectrum triplet_spectrum(const Drive& drive, double kappa, double duration,
                                 std::size_t n_samples)
{
    using std::numbers::pi;
    if (!is_power_of_two(n_samples) || n_samples < 64) {
        throw AnalysisError("triplet_spectrum: n_samples must be a power of two >= 64");
    }
    if (!(duration > 0.0)) {
        throw AnalysisError("triplet_spectrum: duration must be positive");
    }
    const bool modulated = drive.epsilon > 0.0 && drive.omega_mod > 0.0;
    if (modulated) {
        const double required = 10.0 * 2.0 * pi / drive.omega_mod;
        if (duration < required) {
            throw AnalysisError(
                "triplet_spectrum: duration " + std::to_string(duration) +
                " cannot separate the carrier from its satellites; need at least " +
                std::to_string(required) + " (ten modulation periods)");
        }
    }
    const double dt = duration / static_cast<double>(n_samples);
    const double nyquist = pi / dt;
    const double highest = drive.omega_carrier + (modulated ? drive.omega_mod : 0.0);
    if (highest >= 0.8 * nyquist) {
        throw AnalysisError("triplet_spectrum: sampling too coarse; need more than " +
                            std::to_string(static_cast<std::size_t>(
                                std::ceil(highest * duration / (0.8 * pi)))) +
                            " samples");
    }

    const std::size_t n = n_samples;
    const std::size_t bins = n / 2 + 1;
    std::unique_ptr<double, FftwFree> in(fftw_alloc_real(n));
    std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(bins));
    double window_sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double phase = 2.0 * pi * static_cast<double>(k) / static_cast<double>(n);
        double w = 0.0;
        for (int m = 0; m < 5; ++m) {
            w += (m % 2 == 0 ? 1.0 : -1.0) * flat_top[m] * std::cos(m * phase);
        }
        window_sum += w;
        in.get()[k] = w * drive_amplitude(drive, t) * kappa *
                      std::sin(drive.omega_carrier * t + drive.carrier_phase);
    }
    {
        // FFTW planning is not thread safe; plans are created serially.
        fftw_plan plan;
#pragma omp critical(chaotun_fftw_plan)
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
        fftw_execute(plan);
#pragma omp critical(chaotun_fftw_plan)
        fftw_destroy_plan(plan);
    }

    std::vector<double> amp(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        amp[k] = 2.0 * std::hypot(out.get()[k][0], out.get()[k][1]) / window_sum;
    }

    TripletSpectrum result;
    result.resolution = 2.0 * pi / duration;
    std::vector<bool> taken(bins, false);
    double largest = 0.0;
    for (int line = 0; line < 3; ++line) {
        std::size_t best = bins;
        for (std::size_t k = 1; k < bins; ++k) {
            if (!taken[k] && (best == bins || amp[k] > amp[best])) {
                best = k;
            }
        }
        if (best == bins || amp[best] == 0.0) {
            break;
        }
        if (line == 0) {
            largest = amp[best];
        } else if (amp[best] < 1e-3 * largest) {
            break;
        }
        // Amplitude-weighted centroid over the flat top refines the position.
        const std::size_t lo = best > 2 ? best - 2 : 1;
        const std::size_t hi = std::min(bins - 1, best + 2);
        double num = 0.0;
        double den = 0.0;
        for (std::size_t k = lo; k <= hi; ++k) {
            num += amp[k] * static_cast<double>(k);
            den += amp[k];
        }
        result.lines.push_back({num / den * result.resolution, amp[best]});
        const std::size_t from = best > lobe_half_width ? best - lobe_half_width : 0;
        const std::size_t to = std::min(bins - 1, best + lobe_half_width);
        for (std::size_t k = from; k <= to; ++k) {
            taken[k] = true;
        }
    }
    std::sort(result.lines.begin(), result.lines.end(),
              [](const SpectralLine& a, const SpectralLine& b) { return a.frequency < b.frequency; });

    if (result.lines.size() == 3) {
        const auto& l = result.lines;
        result.satellite_ratio = 0.5 * (l[0].amplitude + l[2].amplitude) / l[1].amplitude;
        const double tol = result.resolution;
        result.positions_match =
            std::abs(l[0].frequency - (drive.omega_carrier - drive.omega_mod)) <= tol &&
            std::abs(l[1].frequency - drive.omega_carrier) <= tol &&
            std::abs(l[2].frequency - (drive.omega_carrier + drive.omega_mod)) <= tol;
    } else if (result.lines.size() == 1) {
        result.positions_match =
            std::abs(result.lines[0].frequency - drive.omega_carrier) <= result.resolution;
    }
    return result;
}

} // namespace chaotun
