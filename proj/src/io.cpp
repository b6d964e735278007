#include "chaotun/io.hpp"

#include "chaotun/config_file.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace chaotun {

namespace fs = std::filesystem;

std::string format_double(double v)
{
    std::array<char, 40> buf{};
    const auto [end, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return {buf.data(), end};
}

std::string sha256_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                                &EVP_MD_CTX_free);
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return hex.str();
}

namespace {

std::ofstream open_out(const fs::path& path)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

} // namespace

void write_spectrum_csv(const fs::path& path, const Spectrum& spectrum, const Grid& grid,
                        const DoubleWell& well)
{
    auto out = open_out(path);
    out << "index,energy,left_fraction,right_fraction\n";
    for (const auto& s : spectrum.states) {
        const double left = left_fraction(s, grid, well);
        out << s.index << ',' << format_double(s.energy) << ',' << format_double(left) << ','
            << format_double(1.0 - left) << '\n';
    }
    out << "omega_carrier," << format_double(spectrum.omega_carrier) << ",,\n";
    out << "kappa," << format_double(spectrum.kappa) << ",,\n";
    out << "bound_count," << spectrum.bound_count << ",,\n";
}

void write_samples_csv(const fs::path& path, const std::vector<ObservableSample>& samples)
{
    auto out = open_out(path);
    const std::size_t states = samples.empty() ? 0 : samples.front().occupations.size();
    const bool interval = !samples.empty() && samples.front().interval_probability.has_value();
    out << 't';
    for (std::size_t k = 0; k < states; ++k) {
        out << ",N" << k;
    }
    out << ",norm";
    if (interval) {
        out << ",interval_probability";
    }
    out << '\n';
    for (const auto& s : samples) {
        out << format_double(s.t);
        for (double n : s.occupations) {
            out << ',' << format_double(n);
        }
        out << ',' << format_double(s.norm);
        if (interval) {
            out << ',' << format_double(s.interval_probability.value_or(0.0));
        }
        out << '\n';
    }
}

OccupationSeries read_samples_csv(const fs::path& path, std::size_t k)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read series file '" + path.string() + "'");
    }
    std::string line;
    std::getline(in, line);
    if (line.rfind("t,N0", 0) != 0) {
        throw std::runtime_error(path.string() + ": not a samples CSV (header '" + line + "')");
    }
    std::vector<double> t;
    OccupationSeries series;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<double> cols;
        std::size_t start = 0;
        while (start <= line.size()) {
            const std::size_t comma = std::min(line.find(',', start), line.size());
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(line.data() + start, line.data() + comma, v);
            if (ec != std::errc{} || ptr != line.data() + comma) {
                throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
            }
            cols.push_back(v);
            start = comma + 1;
        }
        if (cols.size() < k + 2) {
            throw std::runtime_error(path.string() + ": row lacks column N" + std::to_string(k));
        }
        t.push_back(cols[0]);
        series.values.push_back(cols[k + 1]);
    }
    if (t.size() >= 2) {
        series.dt_sample = t[1] - t[0];
    }
    return series;
}

void write_density_csv(const fs::path& path, const VisitingDensity& density)
{
    auto out = open_out(path);
    out << "bin_center,xi\n";
    for (std::size_t j = 0; j < density.n_bins; ++j) {
        out << format_double(density.bin_center(j)) << ',' << format_double(density.xi[j])
            << '\n';
    }
}

void write_embedding_csv(const fs::path& path, const EmbeddedPath& path_points)
{
    auto out = open_out(path);
    out << "y0,y1,y2\n";
    for (const auto& p : path_points.points) {
        out << format_double(p[0]) << ',' << format_double(p[1]) << ',' << format_double(p[2])
            << '\n';
    }
}

void write_scan_csv(const fs::path& path, const ScanResult& scan)
{
    auto out = open_out(path);
    out << "record,omega,breakdown\n";
    for (std::size_t k = 0; k < scan.omega_values.size(); ++k) {
        if (scan.breakdown[k]) {
            out << "point," << format_double(scan.omega_values[k]) << ','
                << format_double(*scan.breakdown[k]) << '\n';
        } else {
            out << "failed," << format_double(scan.omega_values[k]) << ",\n";
        }
    }
    out << "omega_prm," << format_double(scan.omega_prm) << ','
        << format_double(*scan.breakdown[scan.best_index]) << '\n';
}

void write_triplet_csv(const fs::path& path, const TripletSpectrum& triplet)
{
    auto out = open_out(path);
    out << "frequency,amplitude\n";
    for (const auto& l : triplet.lines) {
        out << format_double(l.frequency) << ',' << format_double(l.amplitude) << '\n';
    }
    if (triplet.satellite_ratio) {
        out << "satellite_ratio," << format_double(*triplet.satellite_ratio) << '\n';
    }
}

void write_embedding_plot(const fs::path& script, const std::vector<PlotSeries>& series)
{
    auto out = open_out(script);
    out << "# gnuplot script: delay-embedding portraits\n"
        << "set datafile separator ','\n"
        << "set key autotitle columnhead\n"
        << "set xlabel 'N0(t)'\nset ylabel 'N0(t+lag)'\nset zlabel 'N0(t+2 lag)'\n"
        << "set xrange [0:1]\nset yrange [0:1]\nset zrange [0:1]\n"
        << "set term pngcairo size " << 700 * series.size() << ",700\n"
        << "set output '" << script.stem().string() << ".png'\n"
        << "set multiplot layout 1," << series.size() << "\n";
    for (const auto& s : series) {
        out << "set title '" << s.title << "'\n"
            << "splot '" << s.data.filename().string()
            << "' using 1:2:3 with dots notitle\n";
    }
    out << "unset multiplot\n";
}

void write_density_plot(const fs::path& script, const std::vector<PlotSeries>& series)
{
    auto out = open_out(script);
    out << "# gnuplot script: visiting-frequency densities\n"
        << "set datafile separator ','\n"
        << "set xlabel 'N0'\nset ylabel 'xi(N0)'\nset xrange [0:1]\n"
        << "set term pngcairo size 800,600\n"
        << "set output '" << script.stem().string() << ".png'\n"
        << "plot ";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        out << (k ? ", \\\n     " : "") << "'" << s.data.filename().string()
            << "' using 1:2 skip 1 with lines " << (s.dashed ? "dashtype 2 " : "")
            << "title '" << s.title << "'";
    }
    out << '\n';
}

void write_scan_plot(const fs::path& script, const fs::path& data)
{
    auto out = open_out(script);
    out << "# gnuplot script: twin-peak breakdown against modulation frequency\n"
        << "set datafile separator ','\n"
        << "set xlabel 'omega'\nset ylabel 'breakdown'\n"
        << "set term pngcairo size 800,600\n"
        << "set output '" << script.stem().string() << ".png'\n"
        << "plot '" << data.filename().string()
        << "' using (strcol(1) eq 'point' ? $2 : 1/0):3 skip 1 with linespoints notitle\n";
}

RunManifest::RunManifest(std::string command, fs::path out_dir)
    : command_(std::move(command)), out_dir_(std::move(out_dir)),
      start_(std::chrono::steady_clock::now())
{
}

void RunManifest::set_config(const SimulationConfig& cfg) { config_text_ = format_config(cfg); }

void RunManifest::add(const fs::path& file) { files_.push_back(file); }

void RunManifest::finish()
{
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    nlohmann::json j;
    j["command"] = command_;
    j["version"] = version_string;
    j["config"] = config_text_;
    j["wall_clock_seconds"] = seconds;
    j["files"] = nlohmann::json::array();
    entries_.clear();
    for (const auto& f : files_) {
        ManifestEntry e;
        e.path = fs::relative(f, out_dir_).generic_string();
        e.bytes = fs::file_size(f);
        e.sha256 = sha256_file(f);
        j["files"].push_back({{"path", e.path}, {"bytes", e.bytes}, {"sha256", e.sha256}});
        entries_.push_back(std::move(e));
    }
    auto out = open_out(out_dir_ / "manifest.json");
    out << j.dump(2) << '\n';
}

std::vector<std::string> verify_manifest(const fs::path& manifest)
{
    std::ifstream in(manifest);
    if (!in) {
        throw std::runtime_error("cannot read " + manifest.string());
    }
    const nlohmann::json j = nlohmann::json::parse(in);
    std::vector<std::string> bad;
    for (const auto& f : j.at("files")) {
        const fs::path p = manifest.parent_path() / f.at("path").get<std::string>();
        if (!fs::exists(p) || sha256_file(p) != f.at("sha256").get<std::string>()) {
            bad.push_back(f.at("path").get<std::string>());
        }
    }
    return bad;
}

} // namespace chaotun
