#include "chaotun/cli.hpp"
#include "chaotun/config_file.hpp"
#include "chaotun/io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace chaotun;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("chaotun_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

const char* quick_config = R"([grid]
box_length = 30
dx = 0.04
margin_factor = 5

[drive]
a0 = 0.3
epsilon = 0.1
omega_mod = 0.0175

[run]
dt = 0.02
t_total = 1500
sample_stride = 50
lag = 20
)";

} // namespace

TEST_CASE("config defaults and overrides")
{
    const SimulationConfig d = parse_config("");
    CHECK(d.grid.length() == doctest::Approx(60.0));
    CHECK(d.grid.dx() == doctest::Approx(0.01));
    CHECK(d.well.u_left == 13.82);
    CHECK(d.resonant_carrier);

    const SimulationConfig q = parse_config(quick_config);
    CHECK(q.grid.length() == doctest::Approx(30.0));
    CHECK(q.grid.dx() == doctest::Approx(0.04));
    CHECK(q.drive.epsilon == 0.1);
    CHECK(q.analysis.lag_time == 20.0);

    const SimulationConfig fixed = parse_config("[drive]\nomega_carrier = 2.5\n");
    CHECK_FALSE(fixed.resonant_carrier);
    CHECK(fixed.drive.omega_carrier == 2.5);
}

TEST_CASE("config errors")
{
    CHECK_THROWS_WITH_AS((void)parse_config("[grid]\nbogus = 1\n"), doctest::Contains("grid.bogus"),
                         ConfigParseError);
    CHECK_THROWS_AS((void)parse_config("dt = 1\n"), ConfigParseError);
    CHECK_THROWS_WITH_AS((void)parse_config("[run]\ndt = fast\n"), doctest::Contains("run.dt"),
                         ConfigParseError);
    CHECK_THROWS_AS((void)parse_config("[run]\nlag_unit = hours\n"), ConfigParseError);
    CHECK_THROWS_WITH_AS((void)load_config("/nonexistent/x.ini"), doctest::Contains("/nonexistent/x.ini"),
                         ConfigParseError);
}

TEST_CASE("config text round-trips")
{
    SimulationConfig cfg = parse_config(quick_config);
    cfg.dwell_interval = {{-1.25, 3.5}};
    cfg.analysis.metric = BreakdownMetric::peak_height;
    cfg.analysis.lag_in_samples = true;
    cfg.initial_state = {InitialKind::index, 3};
    const std::string text = format_config(cfg);
    const SimulationConfig back = parse_config(text);
    CHECK(format_config(back) == text);
    CHECK(back.grid.x_min == cfg.grid.x_min);
    CHECK(back.grid.n_interior == cfg.grid.n_interior);
    CHECK(back.dt == cfg.dt);
    CHECK(back.drive.omega_mod == cfg.drive.omega_mod);
    CHECK(back.dwell_interval == cfg.dwell_interval);
    CHECK(back.initial_state.state_index() == 3);
}

TEST_CASE("number formatting round-trips")
{
    for (double v : {0.1, 1.0 / 3.0, -12.633025122011531, 1e-300, 6.02e23}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("cli: unknown subcommand prints usage and fails")
{
    std::ostringstream out;
    std::ostringstream err;
    CHECK(run_command({"frobnicate"}, out, err) == exit_usage);
    CHECK(err.str().find("spectrum") != std::string::npos);
    CHECK(run_command({}, out, err) == exit_usage);
}

TEST_CASE("cli: invalid configuration yields a JSON error record")
{
    const fs::path dir = scratch_dir("badcfg");
    std::ofstream(dir / "bad.ini") << "[grid]\nbox_length = 8\nmargin_factor = 10\n";
    std::ostringstream out;
    std::ostringstream err;
    CHECK(run_command({"spectrum", "--config", (dir / "bad.ini").string(), "--out", dir.string()},
                      out, err) == exit_config_error);
    const auto record = nlohmann::json::parse(err.str());
    CHECK(record["error"] == "config");
    REQUIRE(record["violations"].is_array());
    CHECK(record["violations"][0]["field"] == "grid.box_length");
}

TEST_CASE("cli: propagate and density are deterministic and recorded in the manifest")
{
    const fs::path dir = scratch_dir("runs");
    std::ofstream(dir / "q.ini") << quick_config;
    const std::string cfg = (dir / "q.ini").string();
    std::ostringstream out;
    std::ostringstream err;
    REQUIRE(run_command({"propagate", "--config", cfg, "--out", (dir / "a").string()}, out, err) ==
            exit_ok);
    REQUIRE(run_command({"propagate", "--config", cfg, "--out", (dir / "b").string(), "--seedless"},
                        out, err) == exit_ok);
    CHECK(slurp(dir / "a" / "samples.csv") == slurp(dir / "b" / "samples.csv"));
    CHECK(verify_manifest(dir / "a" / "manifest.json").empty());

    const auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
    CHECK(manifest["command"] == "propagate");
    CHECK(manifest["version"] == version_string);
    CHECK(manifest["files"][0]["sha256"] == sha256_file(dir / "a" / "samples.csv"));

    std::ofstream(dir / "a" / "samples.csv", std::ios::app) << "tampered\n";
    CHECK(verify_manifest(dir / "a" / "manifest.json").size() == 1);

    REQUIRE(run_command({"density", "--series", (dir / "b" / "samples.csv").string(), "--bins", "20",
                         "--out", (dir / "d").string()},
                        out, err) == exit_ok);
    CHECK(fs::exists(dir / "d" / "density.csv"));
    CHECK(fs::exists(dir / "d" / "density.gp"));
    REQUIRE(run_command({"embed", "--series", (dir / "b" / "samples.csv").string(), "--lag", "50",
                         "--out", (dir / "e").string()},
                        out, err) == exit_ok);
    CHECK(fs::exists(dir / "e" / "embedding.csv"));
}

TEST_CASE("samples CSV reads back exactly")
{
    const fs::path dir = scratch_dir("csv");
    std::vector<ObservableSample> samples;
    for (int k = 0; k < 5; ++k) {
        samples.push_back({k * 0.5, {1.0 / (k + 3.0), 0.25}, 1.0 - 1e-13 * k, {}});
    }
    write_samples_csv(dir / "s.csv", samples);
    const OccupationSeries s = read_samples_csv(dir / "s.csv", 0);
    CHECK(s.dt_sample == 0.5);
    REQUIRE(s.values.size() == 5);
    for (int k = 0; k < 5; ++k) {
        CHECK(s.values[k] == samples[k].occupations[0]);
    }
    CHECK(slurp(dir / "s.csv").rfind("t,N0,N1,norm\n", 0) == 0);
}

TEST_CASE("every shipped config validates")
{
    std::size_t seen = 0;
    for (const auto& entry : fs::directory_iterator(CHAOTUN_PRESET_DIR)) {
        if (entry.path().extension() != ".ini") {
            continue;
        }
        CAPTURE(entry.path().string());
        const Validation v = validate_config(load_config(entry.path()));
        CHECK(v.ok());
        ++seen;
    }
    CHECK(seen >= 4);
}

TEST_CASE("cli: a missing config file is named in the error record")
{
    std::ostringstream out;
    std::ostringstream err;
    CHECK(run_command({"spectrum", "--config", "/nonexistent/run.ini"}, out, err) == exit_config_error);
    CHECK(nlohmann::json::parse(err.str())["message"].get<std::string>().find("/nonexistent/run.ini") !=
          std::string::npos);
}
