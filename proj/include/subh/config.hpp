#pragma once

// Flat `key = value` run configuration with dotted section prefixes.
// Unknown keys are rejected by name so typos fail loudly.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "oracle.hpp"
#include "variational.hpp"

namespace subh {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    int n = 1;
    int nu = 2;
    std::string target = "sphere";  // sphere | flat
    std::uint64_t seed = 20260826;
    std::string out_dir = ".";

    int grid_npts = 25;
    double grid_extent = 1.0;
    int grid_order = 4;
    int grid_fiber = 8;

    BumpProfile bump{0.35, 0.80, 2};

    // initial / input map, shared by flow and energy
    std::string map_preset = "bump-perturbed-constant";  // or constant, coordinate-linear
    std::string map_input;                               // hfield path, overrides the preset
    double map_amplitude = 0.1;
    double map_frequency = 0.5;
    std::vector<double> map_value;   // chart point for the constant presets
    std::vector<double> map_linear;  // row-major nu x (2n+1) matrix for coordinate-linear

    double flow_eta = 1e-3;
    int flow_max_steps = 500;
    double flow_stop_tolerance = 1e-8;
    int flow_log_interval = 1;
    BumpProfile flow_weight{0.56, 0.64, 2};  // spatial weight masking the descent direction

    std::vector<int> verify_levels{25, 33, 49};
    std::string verify_mutation = "none";

    TargetGeometry make_target() const {
        if (target == "flat") return TargetGeometry::flat(nu);
        if (target == "sphere") return TargetGeometry::sphere(nu);
        throw ConfigError("unknown target kind: " + target);
    }

    Mutation make_mutation() const {
        if (verify_mutation == "none") return Mutation::None;
        if (verify_mutation == "curvature_sign") return Mutation::CurvatureSign;
        if (verify_mutation == "drop_mixed_term") return Mutation::DropMixedTerm;
        if (verify_mutation == "frame_normalization") return Mutation::FrameNormalization;
        if (verify_mutation == "drop_gamma_laplacian") return Mutation::DropGammaLaplacian;
        if (verify_mutation == "fiber_weight") return Mutation::FiberWeight;
        throw ConfigError("unknown value for verify.mutation: " + verify_mutation);
    }

    OracleConfig make_oracle_config() const {
        OracleConfig oc;
        oc.n = n;
        oc.nu = nu;
        oc.extent = grid_extent;
        oc.stencil_order = grid_order;
        oc.levels = verify_levels;
        oc.fiber_points = grid_fiber;
        oc.seed = seed;
        oc.mutation = make_mutation();
        return oc;
    }

    void validate() const {
        if (n < 1) throw ConfigError("n must be >= 1");
        if (nu < 1) throw ConfigError("nu must be >= 1");
        if (target != "sphere" && target != "flat")
            throw ConfigError("unknown target kind: " + target);
        if (grid_npts < 9 || grid_npts % 2 == 0)
            throw ConfigError("grid.dims must be odd and >= 9");
        if (grid_extent <= 0.0) throw ConfigError("grid.extent must be positive");
        if (grid_order != 2 && grid_order != 4 && grid_order != 6)
            throw ConfigError("grid.order must be one of 2, 4, 6");
        if (grid_fiber < 4 || grid_fiber < grid_order + 1)
            throw ConfigError("grid.fiber must be >= 4 and wider than the stencil");
        if (!(bump.inner > 0.0 && bump.inner < bump.outer && bump.outer <= 1.0))
            throw ConfigError("bump profile must satisfy 0 < inner < outer <= 1");
        if (bump.smoothness != -1 && bump.smoothness != 2 && bump.smoothness != 3 &&
            bump.smoothness != 5)
            throw ConfigError("bump.smoothness must be one of -1, 2, 3, 5");
        if (map_preset != "constant" && map_preset != "bump-perturbed-constant" &&
            map_preset != "coordinate-linear")
            throw ConfigError("unknown map.preset: " + map_preset);
        if (flow_eta <= 0.0) throw ConfigError("flow.eta must be positive");
        if (!(flow_weight.inner > 0.0 && flow_weight.inner < flow_weight.outer &&
              flow_weight.outer <= 1.0))
            throw ConfigError("flow weight profile must satisfy 0 < inner < outer <= 1");
        if (flow_weight.smoothness != -1 && flow_weight.smoothness != 2 &&
            flow_weight.smoothness != 3 && flow_weight.smoothness != 5)
            throw ConfigError("flow.weight.smoothness must be one of -1, 2, 3, 5");
        if (flow_max_steps < 0) throw ConfigError("flow.max_steps must be >= 0");
        if (flow_stop_tolerance <= 0.0) throw ConfigError("flow.stop_tolerance must be positive");
        if (flow_log_interval < 1) throw ConfigError("flow.log_interval must be >= 1");
        if (verify_levels.size() < 1) throw ConfigError("verify.levels must be non-empty");
        for (std::size_t i = 0; i < verify_levels.size(); ++i) {
            if (verify_levels[i] < 9 || verify_levels[i] % 2 == 0)
                throw ConfigError("verify.levels entries must be odd and >= 9");
            if (i > 0 && verify_levels[i] <= verify_levels[i - 1])
                throw ConfigError("verify.levels must be strictly increasing");
        }
        make_mutation();
        if (!map_value.empty() && static_cast<int>(map_value.size()) != nu)
            throw ConfigError("map.value must have nu entries");
        if (!map_linear.empty() &&
            static_cast<int>(map_linear.size()) != nu * (2 * n + 1))
            throw ConfigError("map.linear must have nu*(2n+1) entries");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("invalid numeric value for " + key + ": " + v);
    }
}

inline long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("invalid integer value for " + key + ": " + v);
    }
}

template <class T, class Fn>
inline std::vector<T> parse_list(const std::string& key, const std::string& v, Fn&& one) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("empty list entry for " + key);
        out.push_back(one(key, item));
    }
    if (out.empty()) throw ConfigError("empty list for " + key);
    return out;
}

}  // namespace detail

inline void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    using detail::parse_double;
    using detail::parse_int;
    if (key == "n") cfg.n = static_cast<int>(parse_int(key, value));
    else if (key == "nu") cfg.nu = static_cast<int>(parse_int(key, value));
    else if (key == "target") cfg.target = value;
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "out") cfg.out_dir = value;
    else if (key == "grid.dims") {
        const auto dims = detail::parse_list<long long>(key, value, parse_int);
        for (auto d : dims)
            if (d != dims.front())
                throw ConfigError("grid.dims must be uniform across axes");
        cfg.grid_npts = static_cast<int>(dims.front());
    } else if (key == "grid.extent") cfg.grid_extent = parse_double(key, value);
    else if (key == "grid.order") cfg.grid_order = static_cast<int>(parse_int(key, value));
    else if (key == "grid.fiber") cfg.grid_fiber = static_cast<int>(parse_int(key, value));
    else if (key == "bump.inner") cfg.bump.inner = parse_double(key, value);
    else if (key == "bump.outer") cfg.bump.outer = parse_double(key, value);
    else if (key == "bump.smoothness") cfg.bump.smoothness = static_cast<int>(parse_int(key, value));
    else if (key == "map.preset") cfg.map_preset = value;
    else if (key == "map.input") cfg.map_input = value;
    else if (key == "map.amplitude") cfg.map_amplitude = parse_double(key, value);
    else if (key == "map.frequency") cfg.map_frequency = parse_double(key, value);
    else if (key == "map.value") cfg.map_value = detail::parse_list<double>(key, value, parse_double);
    else if (key == "map.linear") cfg.map_linear = detail::parse_list<double>(key, value, parse_double);
    else if (key == "flow.eta") cfg.flow_eta = parse_double(key, value);
    else if (key == "flow.max_steps") cfg.flow_max_steps = static_cast<int>(parse_int(key, value));
    else if (key == "flow.stop_tolerance") cfg.flow_stop_tolerance = parse_double(key, value);
    else if (key == "flow.log_interval") cfg.flow_log_interval = static_cast<int>(parse_int(key, value));
    else if (key == "flow.weight.inner") cfg.flow_weight.inner = parse_double(key, value);
    else if (key == "flow.weight.outer") cfg.flow_weight.outer = parse_double(key, value);
    else if (key == "flow.weight.smoothness") cfg.flow_weight.smoothness = static_cast<int>(parse_int(key, value));
    else if (key == "verify.levels") {
        const auto lv = detail::parse_list<long long>(key, value, parse_int);
        cfg.verify_levels.assign(lv.begin(), lv.end());
    } else if (key == "verify.mutation") cfg.verify_mutation = value;
    else throw ConfigError("unknown config key: " + key);
}

inline RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        apply_config_entry(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

}  // namespace subh
