#include "denjoy/config.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace denjoy {

using nlohmann::json;

Config config_from_json(const json& j) {
    Config c;
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    c.modulus = j.at("modulus").get<std::string>();
    c.d = j.at("d").get<int>();
    c.theta.clear();
    for (const auto& t : j.at("theta")) {
        if (t.is_string())
            c.theta.push_back(t.get<std::string>());
        else
            c.theta.push_back(json(t.get<double>()).dump());
    }
    c.scheme = j.at("scheme").get<std::string>();
    c.k = j.value("k", 1);
    if (j.contains("K") && !j.at("K").is_null()) c.shift = j.at("K").get<double>();
    c.tail_tol = j.value("tail_tol", 1e-10);
    c.radius_cap = j.value("radius_cap", 200000);
    c.max_intervals = j.value("max_intervals", std::int64_t(4000000));
    c.seed = j.value("seed", std::uint64_t(0));
    c.out = j.value("out", std::string("model.json"));
    return c;
}

json config_to_json(const Config& c) {
    json j;
    j["modulus"] = c.modulus;
    j["d"] = c.d;
    j["theta"] = c.theta;
    j["scheme"] = c.scheme;
    j["k"] = c.k;
    j["K"] = c.shift ? json(*c.shift) : json(nullptr);
    j["tail_tol"] = c.tail_tol;
    j["radius_cap"] = c.radius_cap;
    j["max_intervals"] = c.max_intervals;
    j["seed"] = c.seed;
    j["out"] = c.out;
    return j;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }
    return config_from_json(j);
}

double resolve_theta(const std::string& entry) {
    if (entry == "golden") return (std::sqrt(5.0) - 1.0) / 2.0;
    if (entry == "sqrt2m1") return std::sqrt(2.0) - 1.0;
    if (entry == "sqrt3m1") return std::sqrt(3.0) - 1.0;
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(entry, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("theta entry is neither a preset nor a number: '" + entry +
                                    "'");
    }
    if (pos != entry.size())
        throw std::invalid_argument("theta entry is neither a preset nor a number: '" + entry +
                                    "'");
    if (!(v > 0.0) || !(v < 1.0))
        throw std::invalid_argument("theta must lie in (0, 1), got " + entry);
    return v;
}

std::shared_ptr<const BlowupModel> build_from_config(const Config& c,
                                                     std::vector<std::string>* warnings) {
    if (c.d < 1) throw std::invalid_argument("config: d must be >= 1");
    if (static_cast<int>(c.theta.size()) != c.d)
        throw std::invalid_argument("config: theta has " + std::to_string(c.theta.size()) +
                                    " entries but d=" + std::to_string(c.d));

    RotationAction action;
    for (const auto& entry : c.theta) {
        double th = resolve_theta(entry);
        action.theta.push_back(th);
        if (auto pq = small_denominator(th, 1000000, 1e-12)) {
            action.assumed_independent = false;
            if (warnings)
                warnings->push_back("theta entry " + entry + " is within 1e-12 of " +
                                    std::to_string(pq->first) + "/" + std::to_string(pq->second) +
                                    "; orbit points may collide");
        }
    }

    Modulus alpha = Modulus::parse(c.modulus);
    LengthScheme scheme =
        LengthScheme::make(LengthScheme::parse_kind(c.scheme), std::move(alpha), c.d, c.k, c.shift);

    BuildOptions opts;
    opts.tail_tol = c.tail_tol;
    opts.radius_cap = c.radius_cap;
    opts.max_intervals = c.max_intervals;
    return std::make_shared<BlowupModel>(
        BlowupModel::build(std::move(action), std::move(scheme), opts));
}

}  // namespace denjoy
