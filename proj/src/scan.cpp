#include "chaotun/analysis.hpp"
#include "chaotun/propagator.hpp"

#include <omp.h>

namespace chaotun {

SeriesRunner propagation_runner(const Spectrum& spectrum)
{
    return [&spectrum](const SimulationConfig& cfg) {
        const SimulationConfig resolved = resolve_carrier(cfg, spectrum);
        const PropagationResult run = propagate(resolved, spectrum);
        if (!run.complete) {
            throw std::runtime_error(run.failure);
        }
        return run.occupation(0, resolved.sample_interval());
    };
}

ScanResult resonance_scan(const SimulationConfig& base, std::span<const double> omega_grid,
                          const SeriesRunner& runner, int workers)
{
    if (omega_grid.empty()) {
        throw AnalysisError("resonance_scan: empty frequency grid");
    }
    if (!(base.drive.epsilon > 0.0)) {
        throw AnalysisError("resonance_scan: base configuration needs epsilon > 0");
    }
    const auto count = static_cast<std::ptrdiff_t>(omega_grid.size());
    ScanResult result;
    result.omega_values.assign(omega_grid.begin(), omega_grid.end());
    result.breakdown.assign(omega_grid.size(), std::nullopt);
    result.errors.assign(omega_grid.size(), std::string{});

    const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        try {
            SimulationConfig cfg = base;
            cfg.drive.omega_mod = omega_grid[idx];
            const OccupationSeries series = runner(cfg);
            const VisitingDensity density = visiting_density(series, cfg.analysis.n_bins);
            result.breakdown[idx] = breakdown_metric(density, cfg.analysis);
        } catch (const std::exception& e) {
            result.errors[idx] = e.what();
        }
    }

    bool found = false;
    for (std::size_t k = 0; k < omega_grid.size(); ++k) {
        if (!result.breakdown[k]) {
            continue;
        }
        const double value = *result.breakdown[k];
        const double best = found ? *result.breakdown[result.best_index] : 0.0;
        const bool better = !found || value > best ||
                            (value == best && omega_grid[k] < omega_grid[result.best_index]);
        if (better) {
            result.best_index = k;
            found = true;
        }
    }
    if (!found) {
        throw AnalysisError("resonance_scan: every run failed; first error: " +
                            result.errors.front());
    }
    result.omega_prm = omega_grid[result.best_index];
    return result;
}

} // namespace chaotun
