#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "denjoy/blowup.hpp"

#include <json.hpp>

namespace denjoy {

/// Build configuration as ingested from JSON. Theta entries are decimal
/// strings or the presets "golden", "sqrt2m1", "sqrt3m1".
struct Config {
    std::string modulus = "power:tau=0.5";
    int d = 1;
    std::vector<std::string> theta = {"golden"};
    std::string scheme = "herman_v";
    int k = 1;
    std::optional<double> shift;  // K, herman_v only
    double tail_tol = 1e-10;
    int radius_cap = 200000;
    std::int64_t max_intervals = 4000000;
    std::uint64_t seed = 0;
    std::string out = "model.json";
};

Config config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const Config& c);
Config load_config(const std::string& path);

double resolve_theta(const std::string& entry);

/// Validates the config, assembles modulus/scheme/action and builds the
/// model. Small-denominator rotation entries produce warnings and clear the
/// independence flag.
std::shared_ptr<const BlowupModel> build_from_config(const Config& c,
                                                     std::vector<std::string>* warnings);

}  // namespace denjoy
