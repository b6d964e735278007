#include "chaotun/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace chaotun {

EmbeddedPath delay_embed(const OccupationSeries& series, std::size_t lag_steps)
{
    if (lag_steps == 0) {
        throw AnalysisError("delay_embed: lag must be at least one sample");
    }
    const std::size_t n = series.values.size();
    if (n <= 2 * lag_steps) {
        throw AnalysisError("delay_embed: series of " + std::to_string(n) +
                            " samples is too short; lag " + std::to_string(lag_steps) +
                            " needs at least " + std::to_string(2 * lag_steps + 1));
    }
    EmbeddedPath path;
    path.lag_steps = lag_steps;
    path.points.reserve(n - 2 * lag_steps);
    const auto& v = series.values;
    for (std::size_t k = 0; k + 2 * lag_steps < n; ++k) {
        path.points.push_back({v[k], v[k + lag_steps], v[k + 2 * lag_steps]});
    }
    return path;
}

std::size_t lag_steps_for(const OccupationSeries& series, const AnalysisOptions& options)
{
    const double steps = options.lag_in_samples ? options.lag_time
                                                : options.lag_time / series.dt_sample;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(steps)));
}

double VisitingDensity::integral() const noexcept
{
    return std::accumulate(xi.begin(), xi.end(), 0.0) * bin_width;
}

double VisitingDensity::mass(double lo, double hi) const noexcept
{
    lo = std::max(lo, 0.0);
    hi = std::min(hi, 1.0);
    double m = 0.0;
    for (std::size_t j = 0; j < n_bins; ++j) {
        const double left = static_cast<double>(j) * bin_width;
        const double overlap = std::min(hi, left + bin_width) - std::max(lo, left);
        if (overlap > 0.0) {
            m += xi[j] * overlap;
        }
    }
    return m;
}

std::size_t bin_index(double v, std::size_t n_bins) noexcept
{
    if (!(v > 0.0)) {
        return 0;
    }
    if (v >= 1.0) {
        return n_bins - 1;
    }
    const double n = static_cast<double>(n_bins);
    auto j = static_cast<std::size_t>(v * n);
    // Correct the rounding of v * n against the exact edges j / n.
    if (j + 1 < n_bins && v >= static_cast<double>(j + 1) / n) {
        ++j;
    } else if (j > 0 && v < static_cast<double>(j) / n) {
        --j;
    }
    return std::min(j, n_bins - 1);
}

VisitingDensity visiting_density(const OccupationSeries& series, std::size_t n_bins)
{
    if (n_bins < 2) {
        throw AnalysisError("visiting_density: need at least 2 bins");
    }
    if (series.values.empty()) {
        throw AnalysisError("visiting_density: empty series");
    }
    VisitingDensity d;
    d.n_bins = n_bins;
    d.bin_width = 1.0 / static_cast<double>(n_bins);
    std::vector<std::size_t> counts(n_bins, 0);
    for (double v : series.values) {
        ++counts[bin_index(v, n_bins)];
    }
    const double norm =
        1.0 / (static_cast<double>(series.values.size()) * d.bin_width);
    d.xi.resize(n_bins);
    for (std::size_t j = 0; j < n_bins; ++j) {
        d.xi[j] = static_cast<double>(counts[j]) * norm;
    }
    return d;
}

double twin_peak_breakdown(const VisitingDensity& density, double edge_fraction)
{
    const double edges =
        density.mass(0.0, edge_fraction) + density.mass(1.0 - edge_fraction, 1.0);
    return std::clamp(1.0 - edges, 0.0, 1.0);
}

double peak_height_breakdown(const VisitingDensity& density, double edge_fraction)
{
    double edge_peak = 0.0;
    double mid_peak = 0.0;
    for (std::size_t j = 0; j < density.n_bins; ++j) {
        const double left = static_cast<double>(j) * density.bin_width;
        const double right = left + density.bin_width;
        if (left < edge_fraction || right > 1.0 - edge_fraction) {
            edge_peak = std::max(edge_peak, density.xi[j]);
        } else {
            mid_peak = std::max(mid_peak, density.xi[j]);
        }
    }
    if (edge_peak == 0.0) {
        return mid_peak > 0.0 ? 1.0 : 0.0;
    }
    const double r = mid_peak / edge_peak;
    return r / (1.0 + r);
}

double breakdown_metric(const VisitingDensity& density, const AnalysisOptions& options)
{
    switch (options.metric) {
    case BreakdownMetric::edge_mass:
        return twin_peak_breakdown(density, options.edge_fraction);
    case BreakdownMetric::peak_height:
        return peak_height_breakdown(density, options.edge_fraction);
    }
    return 0.0;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count)
{
    std::vector<double> g(count);
    for (std::size_t k = 0; k < count; ++k) {
        g[k] = count == 1 ? lo
                          : lo + (hi - lo) * static_cast<double>(k) /
                                     static_cast<double>(count - 1);
    }
    return g;
}

double bounding_diameter(const EmbeddedPath& path) noexcept
{
    if (path.points.empty()) {
        return 0.0;
    }
    double extent = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
        const auto [lo, hi] = std::minmax_element(
            path.points.begin(), path.points.end(),
            [axis](const auto& a, const auto& b) { return a[axis] < b[axis]; });
        extent = std::max(extent, (*hi)[axis] - (*lo)[axis]);
    }
    return extent * std::sqrt(3.0);
}

std::vector<double> log_radii(double lo, double hi, std::size_t count)
{
    std::vector<double> r = linear_grid(std::log(lo), std::log(hi), count);
    for (double& v : r) {
        v = std::exp(v);
    }
    return r;
}

double correlation_dimension_estimate(const EmbeddedPath& path, std::span<const double> radii,
                                      std::size_t theiler)
{
    const std::size_t n = path.points.size();
    if (n < 1000) {
        throw AnalysisError("correlation_dimension_estimate: need at least 1000 points, got " +
                            std::to_string(n));
    }
    if (bounding_diameter(path) == 0.0) {
        throw AnalysisError("correlation_dimension_estimate: degenerate cloud of zero diameter");
    }
    if (!std::is_sorted(radii.begin(), radii.end()) || radii.size() < 2 || radii.front() <= 0.0) {
        throw AnalysisError(
            "correlation_dimension_estimate: need at least two ascending positive radii");
    }
    if (theiler + 1 >= n) {
        throw AnalysisError("correlation_dimension_estimate: Theiler window exceeds the path");
    }
    const std::vector<std::uint64_t> counts =
        kernels::omp::count_pairs_within(path.points, radii, theiler);
    const std::size_t m = n - theiler;
    const double pairs = 0.5 * static_cast<double>(m) * static_cast<double>(m - 1);

    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t j = 0; j < radii.size(); ++j) {
        if (counts[j] > 0) {
            lx.push_back(std::log(radii[j]));
            ly.push_back(std::log(static_cast<double>(counts[j]) / pairs));
        }
    }
    if (lx.size() < 2) {
        throw AnalysisError(
            "correlation_dimension_estimate: fewer than two radii enclose any pair");
    }
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(lx.size());
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(ly.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sxy += (lx[k] - mx) * (ly[k] - my);
        sxx += (lx[k] - mx) * (lx[k] - mx);
    }
    return sxy / sxx;
}

} // namespace chaotun
