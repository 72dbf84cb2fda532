#pragma once

//! Shared run configuration for the verification suites. The numeric fields
//! feed the computations and are echoed into every report so a stored report
//! pins its own inputs; presentation fields (output format and path, corpus
//! directory) stay out of the echo so reports are machine independent.

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace afmass::suites {

using json = nlohmann::ordered_json;

struct SuiteConfig {
    std::vector<int> dims{3, 4, 5}; // dimension sweep for closed-form families
    double tol = 1e-3;              // default relative tolerance for golden values
    int sphere_degree = 12;         // angular quadrature degree for flux and surface integrals
    int rungs = 7;                  // flux-ladder length
    std::uint64_t seed = 7;         // seed for the randomized suites
    std::string instance_dir = "instances";
    std::string format = "table"; // table | json | csv
    std::string out_path;         // empty writes to stdout
};

//! Reproducibility echo: exactly the fields that influence computed numbers.
inline json config_echo(const SuiteConfig& cfg) {
    json j;
    j["dims"] = cfg.dims;
    j["tol"] = cfg.tol;
    j["sphere_degree"] = cfg.sphere_degree;
    j["rungs"] = cfg.rungs;
    j["seed"] = cfg.seed;
    return j;
}

//! Reject configurations the suites cannot run meaningfully. Throws
//! std::invalid_argument, which the command line maps to a usage error.
inline void validate_config(const SuiteConfig& cfg) {
    if (cfg.dims.empty()) throw std::invalid_argument("config: dimension list is empty");
    for (int n : cfg.dims)
        if (n < 3 || n > 8)
            throw std::invalid_argument("config: dimension " + std::to_string(n) +
                                        " outside the supported range [3, 8]");
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("config: tol must be positive");
    if (cfg.sphere_degree < 4 || cfg.sphere_degree > 64)
        throw std::invalid_argument("config: sphere_degree outside [4, 64]");
    if (cfg.rungs < 2 || cfg.rungs > 16)
        throw std::invalid_argument("config: rungs outside [2, 16]");
    if (cfg.format != "table" && cfg.format != "json" && cfg.format != "csv")
        throw std::invalid_argument("config: format must be table, json, or csv");
}

//! Overlay settings from a JSON object. Unknown keys are rejected so typos
//! fail loudly instead of silently running with defaults.
inline void apply_config(SuiteConfig& cfg, const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: top level must be a JSON object");
    for (const auto& [key, val] : j.items()) {
        if (key == "dims") {
            if (!val.is_array() || val.empty())
                throw std::invalid_argument("config: 'dims' must be a nonempty integer array");
            cfg.dims.clear();
            for (const auto& d : val) {
                if (!d.is_number_integer())
                    throw std::invalid_argument("config: 'dims' entries must be integers");
                cfg.dims.push_back(d.get<int>());
            }
        } else if (key == "tol") {
            if (!val.is_number()) throw std::invalid_argument("config: 'tol' must be a number");
            cfg.tol = val.get<double>();
        } else if (key == "sphere_degree") {
            if (!val.is_number_integer())
                throw std::invalid_argument("config: 'sphere_degree' must be an integer");
            cfg.sphere_degree = val.get<int>();
        } else if (key == "rungs") {
            if (!val.is_number_integer())
                throw std::invalid_argument("config: 'rungs' must be an integer");
            cfg.rungs = val.get<int>();
        } else if (key == "seed") {
            if (!val.is_number_integer())
                throw std::invalid_argument("config: 'seed' must be an integer");
            cfg.seed = val.get<std::uint64_t>();
        } else if (key == "instance_dir") {
            if (!val.is_string())
                throw std::invalid_argument("config: 'instance_dir' must be a string");
            cfg.instance_dir = val.get<std::string>();
        } else if (key == "format") {
            if (!val.is_string()) throw std::invalid_argument("config: 'format' must be a string");
            cfg.format = val.get<std::string>();
        } else if (key == "out") {
            if (!val.is_string()) throw std::invalid_argument("config: 'out' must be a string");
            cfg.out_path = val.get<std::string>();
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    validate_config(cfg);
}

//! Load a config file over the defaults.
inline SuiteConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    SuiteConfig cfg;
    apply_config(cfg, json::parse(in));
    return cfg;
}

} // namespace afmass::suites
