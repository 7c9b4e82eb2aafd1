#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "polar/solver.hpp"

namespace polar {

/// Everything one experiment needs. eta values are in torus units.
struct ExperimentConfig {
    std::string scenario = "continuity";
    int n = 128;
    SolverParams solver;
    std::vector<double> eta_list;
    std::vector<double> eps_list;
    std::filesystem::path outdir;
    std::uint64_t seed = 1;

    // jump-sequence parameters; gamma0 = 0 picks 0.1 (g1 - g0)
    double gamma0 = 0.0;
    double ratio = 1.0 / 3.0;
    int nmax = 8;

    void validate() const {
        if (n < TorusGrid::kMinCells) throw Error(ErrorCode::ConfigError, "grid n must be >= 8");
        if (eta_list.empty()) throw Error(ErrorCode::ConfigError, "eta_list is empty");
        if (eps_list.empty()) throw Error(ErrorCode::ConfigError, "eps_list is empty");
        if (!std::is_sorted(eta_list.rbegin(), eta_list.rend())) {
            throw Error(ErrorCode::ConfigError, "eta_list must be sorted in descending order");
        }
        const double h = 1.0 / n;
        for (double eta : eta_list) {
            if (!(eta > 2.0 * h)) {
                throw Error(ErrorCode::ConfigError, "eta = " + std::to_string(eta) + " is not above 2h");
            }
        }
        for (double e : eps_list) {
            if (!(e > 0.0)) throw Error(ErrorCode::ConfigError, "eps_list entries must be positive");
        }
    }

    /// Defaults tuned per scenario; see configs/ for the same values as files.
    static ExperimentConfig defaults_for(const std::string& scenario, int n = 128) {
        ExperimentConfig c;
        c.scenario = scenario;
        c.n = n;
        const double h = 1.0 / n;
        c.eps_list = {1e-2, 1e-3, 1e-4};
        if (scenario == "jump" || scenario == "nongeneric") {
            c.solver.T = 0.01;
            c.eta_list = {8 * h, 4 * h};
            c.gamma0 = 0.06;
            c.ratio = 0.45;
        } else if (scenario == "classical") {
            c.solver.T = 0.005;
            c.solver.record_every = 2;
            c.eta_list = {8 * h};
        } else {
            c.solver.T = 0.05;
            c.eta_list = {0.12, 0.1, 0.08};
        }
        return c;
    }
};

inline std::vector<double> parse_real_list(const std::string& text, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ConfigError, "bad number '" + item + "' in " + key);
        }
    }
    return out;
}

namespace detail {

inline std::string require_key(const boost::property_tree::ptree& pt, const std::string& key) {
    auto v = pt.get_optional<std::string>(key);
    if (!v) throw Error(ErrorCode::ConfigError, "missing config key '" + key + "'");
    return *v;
}

template <typename T>
T convert(const std::string& text, const std::string& key) {
    std::istringstream is(text);
    T value{};
    is >> value;
    if (!is || !(is >> std::ws).eof()) {
        throw Error(ErrorCode::ConfigError, "bad value '" + text + "' for config key '" + key + "'");
    }
    return value;
}

}  // namespace detail

/**
 * Reads an INI config:
 *   [grid] n
 *   [solver] eps dt T theta L0 scheme      (record_every snapshot_every optional)
 *   [experiment] scenario eta_list eps_list (gamma0 ratio nmax seed optional)
 *   [io] outdir
 * dt, theta and L0 may be 0 to request the derived defaults.
 */
inline ExperimentConfig parse_config(std::istream& is) {
    boost::property_tree::ptree pt;
    try {
        boost::property_tree::read_ini(is, pt);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw Error(ErrorCode::ConfigError, std::string("malformed config: ") + e.what());
    }
    using detail::convert;
    using detail::require_key;
    ExperimentConfig c;
    c.n = convert<int>(require_key(pt, "grid.n"), "grid.n");
    c.solver.eps = convert<double>(require_key(pt, "solver.eps"), "solver.eps");
    c.solver.dt = convert<double>(require_key(pt, "solver.dt"), "solver.dt");
    c.solver.T = convert<double>(require_key(pt, "solver.T"), "solver.T");
    c.solver.theta = convert<double>(require_key(pt, "solver.theta"), "solver.theta");
    c.solver.L0 = convert<double>(require_key(pt, "solver.L0"), "solver.L0");
    c.solver.scheme = parse_scheme(require_key(pt, "solver.scheme"));
    if (auto v = pt.get_optional<std::string>("solver.record_every")) {
        c.solver.record_every = convert<int>(*v, "solver.record_every");
    }
    if (auto v = pt.get_optional<std::string>("solver.snapshot_every")) {
        c.solver.snapshot_every = convert<int>(*v, "solver.snapshot_every");
    }
    c.scenario = require_key(pt, "experiment.scenario");
    c.eta_list = parse_real_list(require_key(pt, "experiment.eta_list"), "experiment.eta_list");
    c.eps_list = parse_real_list(require_key(pt, "experiment.eps_list"), "experiment.eps_list");
    if (auto v = pt.get_optional<std::string>("experiment.gamma0")) c.gamma0 = convert<double>(*v, "experiment.gamma0");
    if (auto v = pt.get_optional<std::string>("experiment.ratio")) c.ratio = convert<double>(*v, "experiment.ratio");
    if (auto v = pt.get_optional<std::string>("experiment.nmax")) c.nmax = convert<int>(*v, "experiment.nmax");
    if (auto v = pt.get_optional<std::string>("experiment.seed")) {
        c.seed = convert<std::uint64_t>(*v, "experiment.seed");
    }
    c.outdir = require_key(pt, "io.outdir");
    c.validate();
    return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorCode::ConfigError, "cannot open config " + path.string());
    return parse_config(is);
}

}  // namespace polar
