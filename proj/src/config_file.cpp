#include "chaotun/config_file.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace chaotun {

namespace pt = boost::property_tree;

namespace {

double to_double(const std::string& key, const std::string& text)
{
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw ConfigParseError(key + ": expected a number, got '" + text + "'");
    }
    return v;
}

std::size_t to_count(const std::string& key, const std::string& text)
{
    std::size_t v = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigParseError(key + ": expected a non-negative integer, got '" + text + "'");
    }
    return v;
}

struct Pending {
    std::optional<double> box_length;
    std::optional<double> x_min;
    std::optional<double> x_max;
    std::optional<double> dx;
    std::optional<std::size_t> n_interior;
    double left_width = 2.337;
    double left_depth = 13.82;
    double gap = 0.876;
    double right_width = 2.045;
    double right_depth = 11.91;
    std::optional<double> dwell_from;
    std::optional<double> dwell_to;
};

using Setter = std::function<void(SimulationConfig&, Pending&, const std::string&)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        t["grid.box_length"] = [](SimulationConfig&, Pending& p, const std::string& v) {
            p.box_length = to_double("grid.box_length", v);
        };
        t["grid.x_min"] = [](SimulationConfig&, Pending& p, const std::string& v) {
            p.x_min = to_double("grid.x_min", v);
        };
        t["grid.x_max"] = [](SimulationConfig&, Pending& p, const std::string& v) {
            p.x_max = to_double("grid.x_max", v);
        };
        t["grid.dx"] = [](SimulationConfig&, Pending& p, const std::string& v) {
            p.dx = to_double("grid.dx", v);
        };
        t["grid.n_interior"] = [](SimulationConfig&, Pending& p, const std::string& v) {
            p.n_interior = to_count("grid.n_interior", v);
        };
        t["grid.margin_factor"] = [](SimulationConfig& c, Pending&, const std::string& v) {
            c.margin_factor = to_double("grid.margin_factor", v);
        };

        t["well.left_width"] = [](SimulationConfig&, Pending& p, const std::string& v) {
            p.left_width = to_double("well.left_width", v);
        };
        t["well.left_depth"] = [](SimulationConfig&, Pending& p, const std::string& v) {
            p.left_depth = to_double("well.left_depth", v);
        };
        t["well.gap"] = [](SimulationConfig&, Pending& p, const std::string& v) {
            p.gap = to_double("well.gap", v);
        };
        t["well.right_width"] = [](SimulationConfig&, Pending& p, const std::string& v) {
            p.right_width = to_double("well.right_width", v);
        };
        t["well.right_depth"] = [](SimulationConfig&, Pending& p, const std::string& v) {
            p.right_depth = to_double("well.right_depth", v);
        };
        t["well.mass"] = [](SimulationConfig& c, Pending&, const std::string& v) {
            c.mass = to_double("well.mass", v);
        };

        t["drive.a0"] = [](SimulationConfig& c, Pending&, const std::string& v) {
            c.drive.a0 = to_double("drive.a0", v);
        };
        t["drive.epsilon"] = [](SimulationConfig& c, Pending&, const std::string& v) {
            c.drive.epsilon = to_double("drive.epsilon", v);
        };
        t["drive.omega_mod"] = [](SimulationConfig& c, Pending&, const std::string& v) {
            c.drive.omega_mod = to_double("drive.omega_mod", v);
        };
        t["drive.omega_carrier"] = [](SimulationConfig& c, Pending&, const std::string& v) {
            if (v == "resonant") {
                c.resonant_carrier = true;
            } else {
                c.resonant_carrier = false;
                c.drive.omega_carrier = to_double("drive.omega_carrier", v);
            }
        };
        t["drive.carrier_phase"] = [](SimulationConfig& c, Pending&, const std::string& v) {
            c.drive.carrier_phase = to_double("drive.carrier_phase", v);
        };

        t["run.dt"] = [](SimulationConfig& c, Pending&, const std::string& v) {
            c.dt = to_double("run.dt", v);
        };
        t["run.t_total"] = [](SimulationConfig& c, Pending&, const std::string& v) {
            c.t_total = to_double("run.t_total", v);
        };
        t["run.sample_stride"] = [](SimulationConfig& c, Pending&, const std::string& v) {
            c.sample_stride = to_count("run.sample_stride", v);
        };
        t["run.initial_state"] = [](SimulationConfig& c, Pending&, const std::string& v) {
            if (v == "ground") {
                c.initial_state = {InitialKind::ground, 0};
            } else if (v == "first_excited") {
                c.initial_state = {InitialKind::first_excited, 1};
            } else {
                c.initial_state = {InitialKind::index, to_count("run.initial_state", v)};
            }
        };
        t["run.max_states"] = [](SimulationConfig& c, Pending&, const std::string& v) {
            c.max_states = to_count("run.max_states", v);
        };
        t["run.snapshot_stride"] = [](SimulationConfig& c, Pending&, const std::string& v) {
            c.snapshot_stride = to_count("run.snapshot_stride", v);
        };
        t["run.dwell_from"] = [](SimulationConfig&, Pending& p, const std::string& v) {
            p.dwell_from = to_double("run.dwell_from", v);
        };
        t["run.dwell_to"] = [](SimulationConfig&, Pending& p, const std::string& v) {
            p.dwell_to = to_double("run.dwell_to", v);
        };
        t["run.bins"] = [](SimulationConfig& c, Pending&, const std::string& v) {
            c.analysis.n_bins = to_count("run.bins", v);
        };
        t["run.edge_fraction"] = [](SimulationConfig& c, Pending&, const std::string& v) {
            c.analysis.edge_fraction = to_double("run.edge_fraction", v);
        };
        t["run.lag"] = [](SimulationConfig& c, Pending&, const std::string& v) {
            c.analysis.lag_time = to_double("run.lag", v);
        };
        t["run.lag_unit"] = [](SimulationConfig& c, Pending&, const std::string& v) {
            if (v == "time") {
                c.analysis.lag_in_samples = false;
            } else if (v == "samples") {
                c.analysis.lag_in_samples = true;
            } else {
                throw ConfigParseError("run.lag_unit: expected 'time' or 'samples', got '" + v +
                                       "'");
            }
        };
        t["run.metric"] = [](SimulationConfig& c, Pending&, const std::string& v) {
            if (v == "edge_mass") {
                c.analysis.metric = BreakdownMetric::edge_mass;
            } else if (v == "peak_height") {
                c.analysis.metric = BreakdownMetric::peak_height;
            } else {
                throw ConfigParseError(
                    "run.metric: expected 'edge_mass' or 'peak_height', got '" + v + "'");
            }
        };
        return t;
    }();
    return table;
}

} // namespace

SimulationConfig parse_config(const std::string& text, const std::string& origin)
{
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigParseError(origin + ": line " + std::to_string(e.line()) + ": " +
                               e.message());
    }

    SimulationConfig cfg;
    Pending pending;
    pending.box_length = 60.0;
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            throw ConfigParseError(origin + ": key '" + section +
                                   "' must belong to a [grid], [well], [drive] or [run] section");
        }
        for (const auto& [key, value] : body) {
            const std::string full = section + "." + key;
            const auto it = setters().find(full);
            if (it == setters().end()) {
                throw ConfigParseError(origin + ": unknown key '" + full + "'");
            }
            try {
                it->second(cfg, pending, value.data());
            } catch (const ConfigParseError& e) {
                throw ConfigParseError(origin + ": " + e.what());
            }
        }
    }

    const bool has_bounds = pending.x_min || pending.x_max;
    if (has_bounds && tree.get_child_optional("grid.box_length")) {
        throw ConfigParseError(origin + ": give either grid.box_length or grid.x_min/x_max");
    }
    if (has_bounds && !(pending.x_min && pending.x_max)) {
        throw ConfigParseError(origin + ": grid.x_min and grid.x_max must be given together");
    }
    if (pending.dx && pending.n_interior) {
        throw ConfigParseError(origin + ": give either grid.dx or grid.n_interior");
    }
    const double x_min = has_bounds ? *pending.x_min : -0.5 * *pending.box_length;
    const double x_max = has_bounds ? *pending.x_max : 0.5 * *pending.box_length;
    cfg.grid.x_min = x_min;
    cfg.grid.x_max = x_max;
    if (pending.n_interior) {
        cfg.grid.n_interior = *pending.n_interior;
    } else {
        const double dx = pending.dx.value_or(0.01);
        if (!(dx > 0.0)) {
            throw ConfigParseError(origin + ": grid.dx must be positive");
        }
        const double cells = std::round((x_max - x_min) / dx);
        cfg.grid.n_interior = cells > 1.0 ? static_cast<std::size_t>(cells) - 1 : 0;
    }

    cfg.well = DoubleWell::centered(pending.left_width, pending.left_depth, pending.gap,
                                    pending.right_width, pending.right_depth);
    const double centre = 0.5 * (x_min + x_max);
    cfg.well.a += centre;
    cfg.well.b += centre;
    cfg.well.c += centre;
    cfg.well.d += centre;

    if (pending.dwell_from || pending.dwell_to) {
        if (!(pending.dwell_from && pending.dwell_to)) {
            throw ConfigParseError(origin + ": run.dwell_from and run.dwell_to go together");
        }
        cfg.dwell_interval = std::make_pair(*pending.dwell_from, *pending.dwell_to);
    }
    return cfg;
}

SimulationConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigParseError("cannot open config file '" + path.string() + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.string());
}

std::string format_config(const SimulationConfig& cfg)
{
    std::ostringstream os;
    os.precision(17);
    const DoubleWell& w = cfg.well;
    os << "[grid]\n"
       << "x_min = " << cfg.grid.x_min << "\n"
       << "x_max = " << cfg.grid.x_max << "\n"
       << "n_interior = " << cfg.grid.n_interior << "\n"
       << "margin_factor = " << cfg.margin_factor << "\n\n";
    os << "[well]\n"
       << "left_width = " << w.left_width() << "\n"
       << "left_depth = " << w.u_left << "\n"
       << "gap = " << w.gap() << "\n"
       << "right_width = " << w.right_width() << "\n"
       << "right_depth = " << w.u_right << "\n"
       << "mass = " << cfg.mass << "\n\n";
    os << "[drive]\n"
       << "a0 = " << cfg.drive.a0 << "\n"
       << "epsilon = " << cfg.drive.epsilon << "\n"
       << "omega_mod = " << cfg.drive.omega_mod << "\n";
    if (cfg.resonant_carrier) {
        os << "omega_carrier = resonant\n";
    } else {
        os << "omega_carrier = " << cfg.drive.omega_carrier << "\n";
    }
    os << "carrier_phase = " << cfg.drive.carrier_phase << "\n\n";
    os << "[run]\n"
       << "dt = " << cfg.dt << "\n"
       << "t_total = " << cfg.t_total << "\n"
       << "sample_stride = " << cfg.sample_stride << "\n";
    switch (cfg.initial_state.kind) {
    case InitialKind::ground:
        os << "initial_state = ground\n";
        break;
    case InitialKind::first_excited:
        os << "initial_state = first_excited\n";
        break;
    case InitialKind::index:
        os << "initial_state = " << cfg.initial_state.index << "\n";
        break;
    }
    os << "max_states = " << cfg.max_states << "\n"
       << "snapshot_stride = " << cfg.snapshot_stride << "\n";
    if (cfg.dwell_interval) {
        os << "dwell_from = " << cfg.dwell_interval->first << "\n"
           << "dwell_to = " << cfg.dwell_interval->second << "\n";
    }
    os << "bins = " << cfg.analysis.n_bins << "\n"
       << "edge_fraction = " << cfg.analysis.edge_fraction << "\n"
       << "lag = " << cfg.analysis.lag_time << "\n"
       << "lag_unit = " << (cfg.analysis.lag_in_samples ? "samples" : "time") << "\n"
       << "metric = "
       << (cfg.analysis.metric == BreakdownMetric::edge_mass ? "edge_mass" : "peak_height")
       << "\n";
    return os.str();
}

} // namespace chaotun
