#include "denjoy/model_io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>

namespace denjoy {

using nlohmann::json;

namespace {

std::string now_iso8601() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fmt(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

}  // namespace

json model_to_json(const BlowupModel& m) {
    json j;
    j["version"] = 1;
    j["created"] = now_iso8601();
    j["theta"] = m.action().theta;
    j["assumed_independent"] = m.action().assumed_independent;
    j["modulus"] = m.scheme().alpha().literal();
    j["scheme"] = LengthScheme::kind_name(m.scheme().kind());
    j["d"] = m.scheme().dim();
    j["k"] = m.scheme().index();
    if (m.scheme().kind() == SchemeKind::herman_v)
        j["K"] = m.scheme().shift();
    else
        j["K"] = nullptr;
    j["scale"] = m.scale();
    j["N"] = m.radius();
    j["L"] = m.mass();
    j["tol"] = m.tol();
    j["tail_tol"] = m.options().tail_tol;
    j["radius_cap"] = m.options().radius_cap;
    j["max_intervals"] = m.options().max_intervals;
    j["boundary_defect"] = m.boundary_defect();
    j["mass"] = {{"partial_sum", m.mass_report().partial_sum},
                 {"tail_bound", m.mass_report().tail_bound},
                 {"radius", m.mass_report().radius},
                 {"slack", m.mass_report().slack}};
    json intervals = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        auto e = m.exponents_at(i);
        intervals.push_back({{"exponents", std::vector<int>(e.begin(), e.end())},
                             {"point", m.point_at(i)},
                             {"a", m.a_at(i)},
                             {"len", m.len_at(i)}});
    }
    j["intervals"] = std::move(intervals);
    return j;
}

std::shared_ptr<const BlowupModel> model_from_json(const json& j) {
    try {
        if (!j.is_object() || j.value("version", 0) != 1)
            throw ModelCorrupt("model document missing version 1");
        RotationAction action;
        action.theta = j.at("theta").get<std::vector<double>>();
        action.assumed_independent = j.value("assumed_independent", true);
        Modulus alpha = Modulus::parse(j.at("modulus").get<std::string>());
        SchemeKind kind = LengthScheme::parse_kind(j.at("scheme").get<std::string>());
        int d = j.at("d").get<int>();
        int k = j.at("k").get<int>();
        std::optional<double> shift;
        if (j.contains("K") && !j.at("K").is_null()) shift = j.at("K").get<double>();
        LengthScheme scheme = LengthScheme::make(kind, std::move(alpha), d, k, shift);

        BuildOptions opts;
        opts.tail_tol = j.value("tail_tol", 1e-10);
        opts.radius_cap = j.value("radius_cap", 200000);
        opts.max_intervals = j.value("max_intervals", std::int64_t(4000000));
        opts.tol = j.value("tol", 1e-12);
        opts.force_radius = j.at("N").get<int>();

        auto model = std::make_shared<BlowupModel>(
            BlowupModel::build(std::move(action), std::move(scheme), opts));

        const auto& stored = j.at("intervals");
        if (stored.size() != model->size())
            throw ModelCorrupt("stored interval count " + std::to_string(stored.size()) +
                               " does not match rebuilt " + std::to_string(model->size()));
        if (std::fabs(j.at("L").get<double>() - model->mass()) > 1e-9)
            throw ModelCorrupt("stored mass does not match rebuilt model");
        std::size_t spot = std::min<std::size_t>(16, model->size());
        for (std::size_t i = 0; i < spot; ++i) {
            const auto& row = stored[i];
            auto e = row.at("exponents").get<std::vector<int>>();
            auto me = model->exponents_at(i);
            if (!std::equal(e.begin(), e.end(), me.begin(), me.end()))
                throw ModelCorrupt("stored interval table disagrees with rebuilt model");
            if (std::fabs(row.at("point").get<double>() - model->point_at(i)) > 1e-12 ||
                std::fabs(row.at("a").get<double>() - model->a_at(i)) > 1e-9 ||
                std::fabs(row.at("len").get<double>() - model->len_at(i)) >
                    1e-9 * model->len_at(i) + 1e-300)
                throw ModelCorrupt("stored interval table disagrees with rebuilt model");
        }
        return model;
    } catch (const json::exception& e) {
        throw ModelCorrupt(std::string("model document malformed: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ModelCorrupt(std::string("model document invalid: ") + e.what());
    }
}

void write_model(const BlowupModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out << model_to_json(model).dump(1) << '\n';
}

std::shared_ptr<const BlowupModel> read_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelCorrupt("cannot open model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ModelCorrupt(std::string("model parse error: ") + e.what());
    }
    return model_from_json(j);
}

void write_interval_csv(const BlowupModel& m, std::ostream& out) {
    int d = m.scheme().dim();
    for (int c = 0; c < d; ++c) out << "e" << c << ",";
    out << "point,a,len\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (auto v : m.exponents_at(i)) out << v << ",";
        out << fmt(m.point_at(i)) << "," << fmt(m.a_at(i)) << "," << fmt(m.len_at(i)) << "\n";
    }
}

json report_to_json(const CheckReport& rep) {
    json j;
    j["name"] = rep.name;
    j["passed"] = rep.passed;
    j["statistic"] = rep.statistic;
    j["threshold"] = rep.threshold;
    j["samples"] = rep.samples;
    j["details"] = rep.details;
    j["notes"] = rep.notes;
    return j;
}

json reports_to_json(const std::vector<CheckReport>& reps) {
    json arr = json::array();
    for (const auto& r : reps) arr.push_back(report_to_json(r));
    return arr;
}

}  // namespace denjoy
