#pragma once

// File emission: fixed-precision CSV tables, binary snapshots (see
// propagator.hpp), gnuplot scripts and the run manifest with digests.

#include "chaotun/analysis.hpp"
#include "chaotun/model.hpp"
#include "chaotun/propagator.hpp"
#include "chaotun/spectrum.hpp"

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

namespace chaotun {

inline constexpr const char* version_string = "1.0.0";

/// 17 significant digits; parses back to the identical double.
[[nodiscard]] std::string format_double(double v);

/// Lowercase hex SHA-256 of a file's bytes.
[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);

/// Columns: index, energy, left_fraction, right_fraction; then the
/// omega_carrier, kappa and bound_count records.
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum,
                        const Grid& grid, const DoubleWell& well);

/// Columns: t, N0 .. N_{k-1}, norm (and interval_probability when recorded).
void write_samples_csv(const std::filesystem::path& path,
                       const std::vector<ObservableSample>& samples);

/// Reads the occupation of state `k` and the sampling interval back from a
/// samples CSV.
[[nodiscard]] OccupationSeries read_samples_csv(const std::filesystem::path& path,
                                                std::size_t k = 0);

/// Columns: bin_center, xi.
void write_density_csv(const std::filesystem::path& path, const VisitingDensity& density);

/// Columns: y0, y1, y2.
void write_embedding_csv(const std::filesystem::path& path, const EmbeddedPath& path_points);

/// Columns: record, omega, breakdown. record is "point", "failed" or the
/// final "omega_prm" summary.
void write_scan_csv(const std::filesystem::path& path, const ScanResult& scan);

/// Columns: frequency, amplitude; then a satellite_ratio record.
void write_triplet_csv(const std::filesystem::path& path, const TripletSpectrum& triplet);

struct PlotSeries {
    std::filesystem::path data;
    std::string title;
    bool dashed = false;
};

/// gnuplot script drawing 3-D scatter plots of embedding CSVs.
void write_embedding_plot(const std::filesystem::path& script,
                          const std::vector<PlotSeries>& series);

/// gnuplot script overlaying density CSVs (xi against N0).
void write_density_plot(const std::filesystem::path& script,
                        const std::vector<PlotSeries>& series);

/// gnuplot script for a scan CSV.
void write_scan_plot(const std::filesystem::path& script, const std::filesystem::path& data);

struct ManifestEntry {
    std::string path;
    std::uintmax_t bytes = 0;
    std::string sha256;
};

/// Records every file written by a command. The clock lives only here, so
/// data files stay byte-identical across runs.
class RunManifest {
public:
    RunManifest(std::string command, std::filesystem::path out_dir);

    void set_config(const SimulationConfig& cfg);
    void add(const std::filesystem::path& file);

    /// Writes manifest.json into the output directory.
    void finish();

    [[nodiscard]] const std::vector<ManifestEntry>& entries() const noexcept { return entries_; }

private:
    std::string command_;
    std::filesystem::path out_dir_;
    std::string config_text_;
    std::vector<std::filesystem::path> files_;
    std::vector<ManifestEntry> entries_;
    std::chrono::steady_clock::time_point start_;
};

/// Recomputes every digest in `manifest.json`; returns the mismatching paths.
[[nodiscard]] std::vector<std::string> verify_manifest(const std::filesystem::path& manifest);

} // namespace chaotun
