#pragma once

// Diagnostics on the occupation series: delay embedding, visiting-frequency
// density, twin-peak breakdown, the parametric resonance scan, the spectral
// triplet of the modulated pulse and a correlation-dimension estimate.

#include "chaotun/kernels.hpp"
#include "chaotun/model.hpp"
#include "chaotun/series.hpp"
#include "chaotun/spectrum.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chaotun {

class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Triples Y_k = (N_k, N_{k+lag}, N_{k+2 lag}).
struct EmbeddedPath {
    std::size_t lag_steps = 1;
    std::vector<kernels::Point3> points;
};

/// Requires more than 2 * lag_steps samples.
[[nodiscard]] EmbeddedPath delay_embed(const OccupationSeries& series, std::size_t lag_steps);

/// Lag in samples for the configured lag (time units unless lag_in_samples),
/// rounded to the nearest sample and at least 1.
[[nodiscard]] std::size_t lag_steps_for(const OccupationSeries& series,
                                        const AnalysisOptions& options);

/// Piecewise-constant probability density of N0 on n_bins equal bins of [0, 1].
struct VisitingDensity {
    std::size_t n_bins = 0;
    double bin_width = 0.0;
    std::vector<double> xi;

    [[nodiscard]] double bin_center(std::size_t j) const noexcept
    {
        return (static_cast<double>(j) + 0.5) * bin_width;
    }
    /// sum xi_j * bin_width
    [[nodiscard]] double integral() const noexcept;
    /// Exact integral of the density over [lo, hi].
    [[nodiscard]] double mass(double lo, double hi) const noexcept;
};

/// Bin of value v: edges go to the higher bin, v >= 1 to the last bin and
/// v < 0 (roundoff) to the first.
[[nodiscard]] std::size_t bin_index(double v, std::size_t n_bins) noexcept;

/// Histogram of the samples normalised by sample count and bin width.
/// Throws AnalysisError for n_bins < 2 or an empty series.
[[nodiscard]] VisitingDensity visiting_density(const OccupationSeries& series,
                                               std::size_t n_bins);

/// 1 - mass in [0, e] and [1 - e, 1]; 0 for all mass at the edges, 1 - 2e for a
/// uniform density.
[[nodiscard]] double twin_peak_breakdown(const VisitingDensity& density,
                                         double edge_fraction = 0.1);

/// r / (1 + r) with r the tallest mid-range bin over the tallest edge-band bin.
[[nodiscard]] double peak_height_breakdown(const VisitingDensity& density,
                                           double edge_fraction = 0.1);

[[nodiscard]] double breakdown_metric(const VisitingDensity& density,
                                      const AnalysisOptions& options);

struct ScanResult {
    std::vector<double> omega_values;
    /// Empty where the run for that frequency failed.
    std::vector<std::optional<double>> breakdown;
    std::vector<std::string> errors;
    double omega_prm = 0.0;
    std::size_t best_index = 0;
};

/// Produces the N0 series for one configuration.
using SeriesRunner = std::function<OccupationSeries(const SimulationConfig&)>;

/// Runner that propagates with a fixed, shared spectrum. The carrier is
/// resolved from the spectrum when the config asks for resonance.
[[nodiscard]] SeriesRunner propagation_runner(const Spectrum& spectrum);

/// For each omega: run, build the density, evaluate the breakdown metric.
/// omega_prm is the argmax over successful runs, ties going to the smaller
/// omega. Requires base.drive.epsilon > 0 and a nonempty grid; throws
/// AnalysisError when every run fails. workers <= 0 means all available.
[[nodiscard]] ScanResult resonance_scan(const SimulationConfig& base,
                                        std::span<const double> omega_grid,
                                        const SeriesRunner& runner, int workers = 0);

/// `count` equally spaced values from lo to hi inclusive.
[[nodiscard]] std::vector<double> linear_grid(double lo, double hi, std::size_t count);

struct SpectralLine {
    double frequency = 0.0; // angular
    double amplitude = 0.0;
};

struct TripletSpectrum {
    /// Dominant lines in increasing frequency.
    std::vector<SpectralLine> lines;
    /// Angular frequency spacing of the transform.
    double resolution = 0.0;
    /// Mean satellite amplitude over carrier amplitude, when three lines exist.
    std::optional<double> satellite_ratio;
    /// Lines sit within one bin of Omega - omega, Omega, Omega + omega.
    bool positions_match = false;
};

/// Samples A(t) kappa sin(Omega t + phase) on [0, duration), applies a
/// flat-top window and a real FFT and returns the dominant lines (at most
/// three, each above 1e-3 of the largest). n_samples must be a power of two;
/// the duration must cover ten modulation periods when epsilon > 0.
[[nodiscard]] TripletSpectrum triplet_spectrum(const Drive& drive, double kappa,
                                               double duration, std::size_t n_samples);

/// Grassberger-Procaccia slope of log C(r) against log r. Pairs closer than
/// `theiler` samples in time are skipped. Needs at least 1000 points and a
/// cloud of nonzero diameter.
[[nodiscard]] double correlation_dimension_estimate(const EmbeddedPath& path,
                                                    std::span<const double> radii,
                                                    std::size_t theiler = 0);

/// Largest coordinate-wise extent of the cloud times sqrt(3).
[[nodiscard]] double bounding_diameter(const EmbeddedPath& path) noexcept;

/// `count` log-spaced radii between lo and hi inclusive.
[[nodiscard]] std::vector<double> log_radii(double lo, double hi, std::size_t count);

} // namespace chaotun
