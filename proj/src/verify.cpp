#include "denjoy/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <ostream>
#include <set>
#include <stdexcept>

#include "denjoy/common.hpp"
#include "denjoy/kernels.hpp"
#include "denjoy/quadrature.hpp"

namespace denjoy {

CheckReport check_fundamental_estimate(const DiffeoAction& act, int radius) {
    const auto& scheme = act.model().scheme();
    CheckReport rep;
    rep.name = "fundamental";
    auto sup = scheme.sup_fundamental_ratio(radius);
    rep.statistic = sup.value;
    rep.samples = 2 * std::int64_t(radius) + 1;
    if (scheme.kind() == SchemeKind::herman_v) {
        rep.threshold = 64.0 * scheme.shift();
        rep.notes["rule"] = "closed-form bound 64K";
        rep.details["K"] = scheme.shift();
    } else {
        auto part = scheme.sup_fundamental_ratio(std::max(1, radius / 10));
        rep.threshold = 2.0 * part.value;
        rep.notes["rule"] = "radius stability: sup(radius) <= 2 sup(radius/10)";
        rep.details["partial_sup"] = part.value;
    }
    rep.details["arg_norm"] = sup.arg_norm;
    rep.details["direction"] = sup.direction;
    rep.passed = rep.statistic <= rep.threshold;
    return rep;
}

CheckReport check_rotation_number(const DiffeoAction& act, Generator s, std::int64_t n,
                                  double x0) {
    if (n < 1000) throw std::invalid_argument("rotation check needs n >= 1000");
    CheckReport rep;
    rep.name = "rotation";
    double theta = act.rotation(s);
    double est = act.rotation_estimate(s, x0, n);
    rep.statistic = circle_dist(est, theta);
    rep.threshold = 1.0 / double(n) + 10.0 * act.model().tol();
    rep.samples = n;
    rep.details["estimate"] = est;
    rep.details["theta"] = theta;
    rep.details["x0"] = x0;
    rep.details["axis"] = s.axis;
    rep.details["inverse"] = s.inverse ? 1.0 : 0.0;
    rep.passed = rep.statistic <= rep.threshold;
    return rep;
}

CheckReport check_alpha_lower_bound(const BlowupModel& model, int i_max) {
    const auto& scheme = model.scheme();
    if (scheme.dim() != 1)
        throw std::invalid_argument("alpha lower bound check applies to d=1 schemes");
    if (i_max < 100) throw std::invalid_argument("alpha lower bound check needs i_max >= 100");

    std::vector<double> len(static_cast<std::size_t>(i_max)), av(len.size());
    scheme.length_at_norm_batch(1, i_max, len);
    std::vector<double> clamped(len);
    for (auto& v : clamped) v = std::min(v, scheme.alpha().domain_cap());
    scheme.alpha().value_batch(clamped, av);

    auto inf_over = [&](int lo, int hi) {  // 1-based i in [lo, hi]
        double best = std::numeric_limits<double>::infinity();
        for (int i = lo; i <= hi; ++i)
            best = std::min(best, double(i) * av[static_cast<std::size_t>(i - 1)]);
        return best;
    };
    CheckReport rep;
    rep.name = "alpha_lower";
    rep.samples = i_max;
    rep.statistic = inf_over(1, i_max);
    double last = inf_over(std::max(1, i_max / 10), i_max);
    double prev = inf_over(std::max(1, i_max / 100), std::max(1, i_max / 10));
    rep.details["inf_last_decade"] = last;
    rep.details["inf_prev_decade"] = prev;
    rep.threshold = 0.0;
    rep.notes["rule"] = "inf > 0 and no decay over the last decade";
    rep.passed = rep.statistic > 0.0 && last >= 0.99 * prev;
    return rep;
}

CheckReport check_integral_inverse(const Modulus& alpha, int d, double tol) {
    CheckReport rep;
    rep.name = "integral";
    auto ir = integrate_inverse_ratio(alpha, d, tol);
    rep.statistic = ir.value;
    rep.threshold = std::numeric_limits<double>::infinity();
    rep.samples = ir.evaluations;
    rep.details["tail_estimate"] = ir.tail_estimate;
    rep.details["shells"] = ir.shells;
    rep.details["decay_exponent"] = ir.decay_exponent;
    rep.details["converged_to_tol"] = ir.converged ? 1.0 : 0.0;
    rep.notes["rule"] = "shell classifier declares the integral summable";
    rep.passed = ir.classified_convergent && !ir.divergent;
    return rep;
}

RatioSpectrum ratio_spectrum(const BlowupModel& model, double win_lo, double win_hi,
                             int top_m) {
    win_lo = wrap01(win_lo);
    double width = win_hi - win_lo;
    if (width <= 0.0) width = wrap01(width);  // wrap-around arc
    if (width == 0.0 || width > 1.0) width = 1.0;  // full circle
    RatioSpectrum out;
    out.lambdas.reserve(model.size());
    for (std::size_t i = 0; i < model.size(); ++i) {
        double rel = model.a_at(i) - win_lo;
        rel -= std::floor(rel);
        if (rel + model.len_at(i) <= width) out.lambdas.push_back(model.len_at(i));
    }
    if (out.lambdas.size() < 2)
        throw std::invalid_argument("ratio spectrum window holds fewer than 2 intervals");
    std::sort(out.lambdas.begin(), out.lambdas.end(), std::greater<>());
    std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(top_m),
                                          out.lambdas.size() - 1);
    out.ratios.reserve(m);
    for (std::size_t i = 0; i < m; ++i) out.ratios.push_back(out.lambdas[i] / out.lambdas[i + 1]);
    std::size_t lo = out.lambdas.size() / 10;
    if (lo < 1) lo = 1;
    double mx = 1.0;
    for (std::size_t i = lo; i + 1 < out.lambdas.size(); ++i)
        mx = std::max(mx, out.lambdas[i] / out.lambdas[i + 1]);
    out.tail_decade_max = mx;
    return out;
}

CheckReport check_ratio_spectrum(const BlowupModel& model, int top_m) {
    CheckReport rep;
    rep.name = "spectrum";
    auto spec = ratio_spectrum(model, 0.0, 1.0, top_m);
    rep.statistic = spec.tail_decade_max;
    rep.threshold = 1.01;
    rep.samples = static_cast<std::int64_t>(spec.lambdas.size());
    rep.details["largest"] = spec.lambdas.front();
    rep.details["smallest"] = spec.lambdas.back();
    rep.notes["rule"] = "sorted-length neighbour ratios approach 1 (evidence only)";
    rep.passed = rep.statistic <= rep.threshold;
    return rep;
}

CheckReport check_wandering(const DiffeoAction& act, Generator s, int n_max) {
    const auto& m = act.model();
    CheckReport rep;
    rep.name = "wandering";
    std::vector<std::int32_t> zero(static_cast<std::size_t>(act.dim()), 0);
    auto id = m.index_of(zero);
    if (!id) throw std::invalid_argument("model does not index the identity interval");
    double a0 = m.a_at(*id), b0 = m.b_at(*id);
    double an = a0, bn = b0;
    double worst = 0.0, overlap = 0.0;
    int steps = 0;
    for (int n = 1; n <= n_max; ++n) {
        an = act.value(s, an);
        bn = act.value(s, bn);
        std::vector<std::int32_t> target = zero;
        target[static_cast<std::size_t>(s.axis)] =
            static_cast<std::int32_t>(s.inverse ? -n : n);
        auto ti = m.index_of(target);
        if (!ti) break;  // image left the indexed range
        steps = n;
        worst = std::max({worst, std::fabs(an - m.a_at(*ti)), std::fabs(bn - m.b_at(*ti))});
        double lo = std::max(an, a0), hi = std::min(bn, b0);
        overlap = std::max(overlap, hi - lo);
    }
    rep.samples = steps;
    rep.statistic = std::max(worst, overlap);
    rep.threshold = double(std::max(1, steps)) * std::max(m.tol(), 1e-13);
    rep.details["endpoint_mismatch"] = worst;
    rep.details["overlap"] = std::max(overlap, 0.0);
    rep.passed = rep.statistic <= rep.threshold && overlap <= 0.0;
    return rep;
}

C1Distance c1_distance(const DiffeoAction& act, Generator s, int grid_n) {
    C1Distance out;
    double theta = act.rotation(s);
    std::vector<double> xs(static_cast<std::size_t>(grid_n));
    for (int i = 0; i < grid_n; ++i) xs[static_cast<std::size_t>(i)] = double(i) / grid_n;
    std::vector<double> dv(xs.size());
    act.derivative_batch(s, xs, dv);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out.c0 = std::max(out.c0, circle_dist(act.value(s, xs[i]), xs[i] + theta));
        out.c1 = std::max(out.c1, std::fabs(dv[i] - 1.0));
    }
    return out;
}

double alpha_norm_estimate(const DiffeoAction& act, Generator s, int top_intervals,
                           int cross_pairs, std::uint64_t seed) {
    const auto& m = act.model();
    const auto& alpha = m.scheme().alpha();

    // largest intervals
    std::vector<std::size_t> idx(m.size());
    std::iota(idx.begin(), idx.end(), 0u);
    std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(top_intervals), idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(keep), idx.end(),
                      [&](std::size_t x, std::size_t y) { return m.len_at(x) > m.len_at(y); });

    std::vector<double> us, vs, seps;
    for (std::size_t t = 0; t < keep; ++t) {
        std::size_t i = idx[t];
        double a = m.a_at(i), len = m.len_at(i);
        double mid = a + 0.5 * len;
        for (double sep = 0.5 * len; sep > 1e-14; sep *= 0.5) {
            // centered pair and a left-endpoint-anchored pair
            us.push_back(mid - 0.5 * sep);
            vs.push_back(mid + 0.5 * sep);
            seps.push_back(sep);
            us.push_back(a + sep);
            vs.push_back(a + 2.0 * sep);
            seps.push_back(sep);
        }
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < cross_pairs; ++i) {
        double u = unif(rng);
        double sep = std::exp(std::log(1e-10) * unif(rng));  // log-uniform in [1e-10, 1]
        double v = wrap01(u + sep);
        us.push_back(u);
        vs.push_back(v);
        seps.push_back(sep);
    }

    std::vector<double> du(us.size()), dvv(us.size()), av(us.size());
    act.derivative_batch(s, us, du);
    act.derivative_batch(s, vs, dvv);
    std::vector<double> clamped(seps);
    for (auto& v : clamped) v = std::min(v, alpha.domain_cap());
    alpha.value_batch(clamped, av);

    double best = 0.0;
    for (std::size_t i = 0; i < us.size(); ++i)
        if (av[i] > 0.0) best = std::max(best, std::fabs(du[i] - dvv[i]) / av[i]);
    return best;
}

std::vector<CheckReport> run_suite(const std::vector<std::string>& names,
                                   const DiffeoAction& act, std::uint64_t seed,
                                   std::int64_t rotation_n) {
    static const std::vector<std::string> kAll = {"fundamental", "rotation", "alpha_lower",
                                                  "integral", "spectrum", "wandering"};
    if (names.empty()) throw std::invalid_argument("empty verification suite");
    std::vector<std::string> todo;
    for (const auto& n : names) {
        if (n == "all") {
            todo = kAll;
            break;
        }
        if (std::find(kAll.begin(), kAll.end(), n) == kAll.end())
            throw std::invalid_argument("unknown check name: '" + n + "'");
        todo.push_back(n);
    }

    const auto& model = act.model();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<CheckReport> out;
    for (const auto& name : todo) {
        if (name == "fundamental") {
            out.push_back(check_fundamental_estimate(act, std::max(100, model.radius())));
        } else if (name == "rotation") {
            for (int axis = 0; axis < act.dim(); ++axis)
                out.push_back(
                    check_rotation_number(act, Generator{axis, false}, rotation_n, unif(rng)));
        } else if (name == "alpha_lower") {
            if (model.scheme().dim() == 1)
                out.push_back(check_alpha_lower_bound(model, std::max(100, model.radius())));
        } else if (name == "integral") {
            out.push_back(
                check_integral_inverse(model.scheme().alpha(), model.scheme().dim(), 1e-6));
        } else if (name == "spectrum") {
            out.push_back(check_ratio_spectrum(model, 100));
        } else if (name == "wandering") {
            for (int axis = 0; axis < act.dim(); ++axis)
                out.push_back(check_wandering(act, Generator{axis, false},
                                              std::min(100, model.radius() - 1)));
        }
    }
    return out;
}

void write_check_samples(const DiffeoAction& act, const std::string& name,
                         std::int64_t rotation_n, std::ostream& out) {
    const auto& model = act.model();
    const auto& scheme = model.scheme();
    if (name == "fundamental") {
        out << "norm,ratio_up,ratio_down\n";
        int radius = model.radius();
        for (int n = 0; n <= radius; ++n) {
            out << n << "," << scheme.fundamental_ratio_norms(n, n + 1) << ",";
            out << (n >= 1 ? scheme.fundamental_ratio_norms(n, n - 1) : 0.0) << "\n";
        }
        return;
    }
    if (name == "rotation") {
        out << "n,axis,estimate\n";
        for (int axis = 0; axis < act.dim(); ++axis) {
            Generator s{axis, false};
            double x = 0.0, lift = 0.0;
            std::int64_t step = std::max<std::int64_t>(1, rotation_n / 200);
            for (std::int64_t n = 1; n <= rotation_n; ++n) {
                double y = act.value(s, x);
                double dx = y - x;
                if (dx < 0.0) dx += 1.0;
                lift += dx;
                x = y;
                if (n % step == 0 || n == rotation_n)
                    out << n << "," << axis << "," << lift / double(n) << "\n";
            }
        }
        return;
    }
    if (name == "alpha_lower") {
        if (scheme.dim() != 1)
            throw std::invalid_argument("alpha_lower samples need a d=1 scheme");
        out << "i,i_alpha_l\n";
        int radius = model.radius();
        std::vector<double> len(static_cast<std::size_t>(radius)), av(len.size());
        scheme.length_at_norm_batch(1, radius, len);
        for (auto& v : len) v = std::min(v, scheme.alpha().domain_cap());
        scheme.alpha().value_batch(len, av);
        for (int i = 1; i <= radius; ++i)
            out << i << "," << double(i) * av[static_cast<std::size_t>(i - 1)] << "\n";
        return;
    }
    if (name == "wandering") {
        out << "n,axis,endpoint_mismatch\n";
        std::vector<std::int32_t> zero(static_cast<std::size_t>(act.dim()), 0);
        auto id = model.index_of(zero);
        if (!id) return;
        for (int axis = 0; axis < act.dim(); ++axis) {
            Generator s{axis, false};
            double an = model.a_at(*id), bn = model.b_at(*id);
            for (int n = 1; n <= std::min(100, model.radius() - 1); ++n) {
                an = act.value(s, an);
                bn = act.value(s, bn);
                std::vector<std::int32_t> target = zero;
                target[static_cast<std::size_t>(axis)] = n;
                auto ti = model.index_of(target);
                if (!ti) break;
                double mm = std::max(std::fabs(an - model.a_at(*ti)),
                                     std::fabs(bn - model.b_at(*ti)));
                out << n << "," << axis << "," << mm << "\n";
            }
        }
        return;
    }
    if (name == "spectrum") {
        auto sp = ratio_spectrum(model, 0.0, 1.0, 1000);
        out << "i,lambda,ratio\n";
        for (std::size_t i = 0; i < sp.ratios.size(); ++i)
            out << i + 1 << "," << sp.lambdas[i] << "," << sp.ratios[i] << "\n";
        return;
    }
    if (name == "integral") {
        // shellwise partial sums of the inverse-ratio integrand
        const auto& alpha = scheme.alpha();
        int d = scheme.dim();
        double T = std::min(1.0, alpha.inverse_cap() * (1.0 - 1e-12));
        out << "shell,upper,contribution\n";
        for (int k = 0; k < 64; ++k) {
            double b = std::ldexp(T, -k), a = 0.5 * b;
            double shell = gauss_legendre_15(
                [&](double t) {
                    double r = alpha.inverse(t);
                    for (int i = 0; i < d + 1; ++i) r /= t;
                    return r;
                },
                a, b);
            out << k << "," << b << "," << shell << "\n";
        }
        return;
    }
    throw std::invalid_argument("unknown check name: '" + name + "'");
}

}  // namespace denjoy
