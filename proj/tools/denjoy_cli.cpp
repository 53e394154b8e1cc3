#include <charconv>
#include <fstream>
#include <set>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "denjoy/config.hpp"
#include "denjoy/diffeo.hpp"
#include "denjoy/model_io.hpp"
#include "denjoy/verify.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInadmissible = 2;
constexpr int kExitCorruptModel = 3;
constexpr int kExitUsage = 4;

std::string fmt(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::vector<std::string> split(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

json integrability_json(const denjoy::IntegrabilityReport& r, const std::string& which) {
    json j;
    j["which"] = which;
    j["verdict"] = r.divergent ? "diverges"
                               : (r.classified_convergent ? "converges" : "undetermined");
    j["value"] = std::isfinite(r.value) ? json(r.value) : json("inf");
    j["converged"] = r.converged;
    j["classified_convergent"] = r.classified_convergent;
    j["divergent"] = r.divergent;
    j["tail_estimate"] = std::isfinite(r.tail_estimate) ? json(r.tail_estimate) : json("inf");
    j["evaluations"] = r.evaluations;
    j["shells"] = r.shells;
    j["decay_exponent"] = r.decay_exponent;
    j["tol"] = r.tol;
    return j;
}

int cmd_build(const std::string& config_path, const std::string& out_override) {
    denjoy::Config cfg = denjoy::load_config(config_path);
    std::vector<std::string> warnings;
    auto model = denjoy::build_from_config(cfg, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    std::string out = out_override.empty() ? cfg.out : out_override;
    denjoy::write_model(*model, out);
    std::cout << "model written to " << out << ": N=" << model->radius()
              << " intervals=" << model->size() << " L=" << fmt(model->mass())
              << " scale=" << fmt(model->scale()) << "\n";
    return kExitOk;
}

int cmd_eval(const std::string& model_path, int grid, const std::string& points_csv,
             bool deriv, const std::string& out_path) {
    auto model = denjoy::read_model(model_path);
    denjoy::DiffeoAction act(model);
    std::vector<double> xs;
    if (!points_csv.empty())
        xs = parse_list(points_csv);
    else
        for (int i = 0; i < grid; ++i) xs.push_back(double(i) / grid);

    std::ostringstream csv;
    csv << "x";
    for (int a = 0; a < act.dim(); ++a) {
        csv << ",f" << a;
        if (deriv) csv << ",df" << a;
    }
    csv << "\n";
    std::vector<std::vector<double>> dv(static_cast<std::size_t>(act.dim()),
                                        std::vector<double>(xs.size()));
    if (deriv)
        for (int a = 0; a < act.dim(); ++a)
            act.derivative_batch(denjoy::Generator{a, false}, xs, dv[static_cast<std::size_t>(a)]);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        csv << fmt(xs[i]);
        for (int a = 0; a < act.dim(); ++a) {
            csv << "," << fmt(act.value(denjoy::Generator{a, false}, xs[i]));
            if (deriv) csv << "," << fmt(dv[static_cast<std::size_t>(a)][i]);
        }
        csv << "\n";
    }
    write_text(out_path, csv.str());
    return kExitOk;
}

int cmd_verify(const std::string& model_path, const std::string& suite_csv, std::int64_t n,
               std::uint64_t seed, const std::string& out_path,
               const std::string& samples_dir) {
    auto model = denjoy::read_model(model_path);
    denjoy::DiffeoAction act(model);
    auto reports = denjoy::run_suite(split(suite_csv), act, seed, n);
    json j = denjoy::reports_to_json(reports);
    write_text(out_path, j.dump(1) + "\n");
    if (!samples_dir.empty()) {
        std::set<std::string> names;
        for (const auto& r : reports) names.insert(r.name);
        for (const auto& name : names) {
            std::ofstream csv(samples_dir + "/" + name + "_samples.csv");
            if (!csv) throw std::runtime_error("cannot write samples under " + samples_dir);
            denjoy::write_check_samples(act, name, n, csv);
        }
    }
    bool all = true;
    for (const auto& r : reports) {
        all = all && r.passed;
        std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name
                  << " statistic=" << fmt(r.statistic) << " threshold=" << fmt(r.threshold)
                  << "\n";
    }
    return all ? kExitOk : 1;
}

int cmd_integrate(const std::string& modulus, int d, const std::string& which, double tol,
                  const std::string& out_path) {
    denjoy::Modulus alpha = denjoy::Modulus::parse(modulus);
    denjoy::IntegrabilityReport rep;
    if (which == "direct")
        rep = denjoy::integrate_reciprocal_power(alpha, d, tol);
    else if (which == "inverse")
        rep = denjoy::integrate_inverse_ratio(alpha, d, tol);
    else
        throw std::invalid_argument("--which must be direct or inverse");
    write_text(out_path, integrability_json(rep, which).dump(1) + "\n");
    return kExitOk;
}

int cmd_spectrum(const std::string& model_path, const std::string& window, int top,
                 const std::string& out_path) {
    auto model = denjoy::read_model(model_path);
    double lo = 0.0, hi = 1.0;
    if (!window.empty()) {
        auto w = parse_list(window);
        if (w.size() != 2) throw std::invalid_argument("--window expects two numbers a,b");
        lo = w[0];
        hi = w[1];
    }
    auto spec = denjoy::ratio_spectrum(*model, lo, hi, top);
    std::ostringstream csv;
    csv << "i,lambda,ratio\n";
    for (std::size_t i = 0; i < spec.ratios.size(); ++i)
        csv << i + 1 << "," << fmt(spec.lambdas[i]) << "," << fmt(spec.ratios[i]) << "\n";
    write_text(out_path, csv.str());
    std::cerr << "intervals=" << spec.lambdas.size()
              << " tail_decade_max=" << fmt(spec.tail_decade_max) << "\n";
    return kExitOk;
}

int cmd_export(const std::string& model_path, const std::string& out_path) {
    auto model = denjoy::read_model(model_path);
    std::ostringstream csv;
    denjoy::write_interval_csv(*model, csv);
    write_text(out_path, csv.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exceptional circle diffeomorphisms by orbit blow-up: build, evaluate, verify"};
    app.require_subcommand(1);

    std::string config_path, model_path, out_path, points_csv, suite_csv = "all";
    std::string samples_dir;
    std::string modulus, which = "direct", window;
    int grid = 1000, d = 1, top = 100;
    bool deriv = false;
    std::int64_t n = 100000;
    std::uint64_t seed = 0;
    double tol = 1e-8;

    auto* build = app.add_subcommand("build", "build a blow-up model from a config");
    build->add_option("--config", config_path, "config JSON")->required();
    build->add_option("--out", out_path, "override output path");

    auto* eval = app.add_subcommand("eval", "tabulate f (and f') per generator");
    eval->add_option("--model", model_path)->required();
    eval->add_option("--grid", grid, "uniform grid size");
    eval->add_option("--points", points_csv, "explicit comma-separated points");
    eval->add_flag("--deriv", deriv, "also tabulate derivatives");
    eval->add_option("--out", out_path, "output CSV (default stdout)");

    auto* verify = app.add_subcommand("verify", "run named checks against a model");
    verify->add_option("--model", model_path)->required();
    verify->add_option("--suite", suite_csv, "comma list or 'all'");
    verify->add_option("--n", n, "rotation-number iterate count");
    verify->add_option("--seed", seed, "sampling seed");
    verify->add_option("--out", out_path, "report JSON (default stdout)");
    verify->add_option("--samples", samples_dir, "directory for per-sample CSVs");

    auto* integrate = app.add_subcommand("integrate", "modulus integrability report");
    integrate->add_option("--modulus", modulus)->required();
    integrate->add_option("--d", d, "exponent dimension");
    integrate->add_option("--which", which, "direct | inverse");
    integrate->add_option("--tol", tol, "relative tail tolerance");
    integrate->add_option("--out", out_path, "report JSON (default stdout)");

    auto* spectrum = app.add_subcommand("spectrum", "sorted interval-length ratios in a window");
    spectrum->add_option("--model", model_path)->required();
    spectrum->add_option("--window", window, "arc a,b (default full circle)");
    spectrum->add_option("--top", top, "number of leading ratios");
    spectrum->add_option("--out", out_path, "output CSV (default stdout)");

    auto* exp = app.add_subcommand("export", "interval table as CSV");
    exp->add_option("--model", model_path)->required();
    exp->add_option("--out", out_path, "output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (build->parsed()) return cmd_build(config_path, out_path);
        if (eval->parsed()) return cmd_eval(model_path, grid, points_csv, deriv, out_path);
        if (verify->parsed())
            return cmd_verify(model_path, suite_csv, n, seed, out_path, samples_dir);
        if (integrate->parsed()) return cmd_integrate(modulus, d, which, tol, out_path);
        if (spectrum->parsed()) return cmd_spectrum(model_path, window, top, out_path);
        if (exp->parsed()) return cmd_export(model_path, out_path);
    } catch (const denjoy::InadmissibleScheme& e) {
        std::cerr << "error: " << e.what() << "\n"
                  << integrability_json(e.report, "mass-tail").dump(1) << "\n";
        return kExitInadmissible;
    } catch (const denjoy::ModelCorrupt& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCorruptModel;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
