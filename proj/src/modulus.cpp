#include "denjoy/modulus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "denjoy/kernels.hpp"

namespace denjoy {

namespace {

using kernels::exp1;
using kernels::log1;
using kernels::pow1;

constexpr double kInf = std::numeric_limits<double>::infinity();

double ipow(double v, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= v;
    return r;
}

std::string fmt(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

std::map<std::string, std::string> parse_params(const std::string& s) {
    std::map<std::string, std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("modulus literal: expected key=value, got '" + item + "'");
        out[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("modulus literal: bad number for " + what + ": '" + s + "'");
    }
}

}  // namespace

Modulus Modulus::power(double tau, double cap) {
    if (!(tau > 0.0) || tau > 1.0) throw std::invalid_argument("power modulus needs 0 < tau <= 1");
    Modulus m;
    m.family_ = ModulusFamily::power;
    m.tau_ = tau;
    m.cap_ = cap;
    m.compute_knee();
    return m;
}

Modulus Modulus::herman_log(double eps, double cap) {
    if (eps < 0.0) throw std::invalid_argument("herman_log modulus needs eps >= 0");
    Modulus m;
    m.family_ = ModulusFamily::herman_log;
    m.eps_ = eps;
    m.cap_ = cap;
    m.compute_knee();
    return m;
}

Modulus Modulus::dkn(int d, double eps, double cap) {
    if (d < 1) throw std::invalid_argument("dkn modulus needs d >= 1");
    if (eps < 0.0) throw std::invalid_argument("dkn modulus needs eps >= 0");
    Modulus m;
    m.family_ = ModulusFamily::dkn;
    m.d_ = d;
    m.eps_ = eps;
    m.cap_ = cap;
    m.compute_knee();
    return m;
}

Modulus Modulus::iterated_log(int depth, double eps) {
    if (depth < 1) throw std::invalid_argument("iterated_log modulus needs depth >= 1");
    if (eps < 0.0) throw std::invalid_argument("iterated_log modulus needs eps >= 0");
    Modulus m;
    m.family_ = ModulusFamily::iterated_log;
    m.depth_ = depth;
    m.eps_ = eps;
    m.cap_ = 1.0;
    m.compute_knee();
    m.cap_ = m.knee_;  // the raw product collapses shortly after the knee
    return m;
}

Modulus Modulus::inv_log() {
    Modulus m;
    m.family_ = ModulusFamily::inv_log;
    m.cap_ = exp1(-2.0);
    m.compute_knee();
    return m;
}

Modulus Modulus::tabulated(std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("tabulated modulus needs >= 2 matched knots");
    if (xs.front() != 0.0 || ys.front() != 0.0)
        throw std::invalid_argument("tabulated modulus must start at (0, 0)");
    double prev_slope = kInf;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1]) || !(ys[i] > ys[i - 1]))
            throw std::invalid_argument("tabulated modulus knots must be strictly increasing");
        double slope = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
        if (slope > prev_slope * (1.0 + 1e-12))
            throw std::invalid_argument("tabulated modulus is not concave");
        prev_slope = slope;
    }
    Modulus m;
    m.family_ = ModulusFamily::tabulated;
    m.xs_ = std::move(xs);
    m.ys_ = std::move(ys);
    m.cap_ = m.xs_.back();
    m.knee_ = m.cap_;
    return m;
}

void Modulus::compute_knee() {
    switch (family_) {
        case ModulusFamily::power:
            knee_ = cap_;
            return;
        case ModulusFamily::herman_log:
            knee_ = std::min(cap_, exp1(-(1.0 + eps_)));
            return;
        case ModulusFamily::dkn: {
            double a = 1.0 / d_;
            double c = a + eps_;
            double mono = exp1(-(1.0 + d_ * eps_));
            // concavity of x^a L^c fails where a(a-1)L^2 + (1-2a)cL + c(c-1) >= 0
            double conc = kInf;
            double A = a * (a - 1.0), B = (1.0 - 2.0 * a) * c, C = c * (c - 1.0);
            if (A < 0.0) {
                double disc = B * B - 4.0 * A * C;
                if (disc >= 0.0) {
                    double Lp = (-B - std::sqrt(disc)) / (2.0 * A);
                    if (Lp > 0.0) conc = exp1(-Lp);
                }
            } else if (B < 0.0) {  // d == 1
                double Lp = -C / B;
                if (Lp > 0.0) conc = exp1(-Lp);
            }
            knee_ = std::min({cap_, mono, conc});
            return;
        }
        case ModulusFamily::iterated_log: {
            if (depth_ == 1) {
                knee_ = std::min(cap_, exp1(-(1.0 + eps_)));
                return;
            }
            // positivity end: the deepest log factor needs log^{depth-1}(1/x) > 1
            double tower = 0.0;
            for (int j = 0; j < depth_ - 1; ++j) tower = exp1(tower);
            double x_pos = exp1(-tower);
            // last sign change of the raw derivative before the collapse
            double lo = x_pos * 1e-14, hi = x_pos * (1.0 - 1e-9);
            if (derivative(hi) > 0.0) {
                knee_ = hi;
                return;
            }
            for (int it = 0; it < 200; ++it) {
                double mid = std::sqrt(lo * hi);
                (derivative(mid) > 0.0 ? lo : hi) = mid;
            }
            knee_ = lo;
            return;
        }
        case ModulusFamily::inv_log:
            knee_ = std::min(cap_, exp1(-2.0));
            return;
        case ModulusFamily::tabulated:
            knee_ = cap_;
            return;
    }
}

double Modulus::value(double x) const {
    if (!(x >= 0.0) || x > cap_ * (1.0 + 1e-12))
        throw std::domain_error("modulus argument " + fmt(x) + " outside [0, " + fmt(cap_) + "]");
    if (x == 0.0) return 0.0;
    switch (family_) {
        case ModulusFamily::power:
            return pow1(x, tau_);
        case ModulusFamily::herman_log: {
            double L = -log1(x);
            if (L <= 0.0) return 0.0;  // the raw form vanishes at x = 1
            if (eps_ == 0.0) return x * L;
            return x * exp1((1.0 + eps_) * log1(L));
        }
        case ModulusFamily::dkn: {
            double L = -log1(x);
            if (L <= 0.0) return 0.0;
            double a = 1.0 / d_;
            return pow1(x, a) * exp1((a + eps_) * log1(L));
        }
        case ModulusFamily::iterated_log: {
            double cur = -log1(x);
            double prod = x;
            for (int j = 1; j < depth_; ++j) {
                prod *= cur;
                cur = log1(cur);
            }
            if (eps_ == 0.0) return prod * cur;
            return prod * exp1((1.0 + eps_) * log1(cur));
        }
        case ModulusFamily::inv_log:
            return 1.0 / (-log1(x));
        case ModulusFamily::tabulated: {
            auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
            std::size_t i = static_cast<std::size_t>(it - xs_.begin());
            if (i >= xs_.size()) i = xs_.size() - 1;
            double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
            return ys_[i - 1] + t * (ys_[i] - ys_[i - 1]);
        }
    }
    return 0.0;
}

void Modulus::value_batch(std::span<const double> x, std::span<double> out) const {
    const auto n = x.size();
    const auto& k = kernels::active();
    switch (family_) {
        case ModulusFamily::power:
            k.pow(x.data(), tau_, out.data(), n);
            return;
        case ModulusFamily::herman_log: {
            std::vector<double> L(n);
            k.log(x.data(), L.data(), n);
            for (auto& v : L) v = -v;
            if (eps_ == 0.0) {
                for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * L[i];
                return;
            }
            std::vector<double> t(n);
            k.log(L.data(), t.data(), n);
            for (auto& v : t) v = (1.0 + eps_) * v;
            k.exp(t.data(), out.data(), n);
            for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * out[i];
            return;
        }
        case ModulusFamily::dkn: {
            double a = 1.0 / d_;
            std::vector<double> xa(n), L(n), t(n);
            k.pow(x.data(), a, xa.data(), n);
            k.log(x.data(), L.data(), n);
            for (auto& v : L) v = -v;
            k.log(L.data(), t.data(), n);
            for (auto& v : t) v = (a + eps_) * v;
            k.exp(t.data(), out.data(), n);
            for (std::size_t i = 0; i < n; ++i) out[i] = xa[i] * out[i];
            return;
        }
        default:
            for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] == 0.0) ? 0.0 : value(x[i]);
            return;
    }
}

double Modulus::derivative(double x) const {
    if (!(x > 0.0) || x >= cap_ * (1.0 + 1e-12))
        throw std::domain_error("modulus derivative argument outside (0, cap)");
    switch (family_) {
        case ModulusFamily::power:
            return tau_ * pow1(x, tau_ - 1.0);
        case ModulusFamily::herman_log: {
            double L = -log1(x);
            if (eps_ == 0.0) return L - 1.0;
            return exp1(eps_ * log1(L)) * (L - (1.0 + eps_));
        }
        case ModulusFamily::dkn: {
            double L = -log1(x);
            double a = 1.0 / d_, c = a + eps_;
            return pow1(x, a - 1.0) * exp1((c - 1.0) * log1(L)) * (a * L - c);
        }
        case ModulusFamily::iterated_log: {
            double cur = -log1(x);
            double prod = x;
            double pi = cur;    // running product of log factors
            double sum = 1.0 / pi;
            for (int j = 1; j < depth_; ++j) {
                prod *= cur;
                cur = log1(cur);
                pi *= cur;
                sum += (j + 1 < depth_ ? 1.0 : (1.0 + eps_)) / pi;
            }
            double last = eps_ == 0.0 ? cur : exp1((1.0 + eps_) * log1(cur));
            double P = (prod / x) * last;
            return P * (1.0 - sum);
        }
        case ModulusFamily::inv_log: {
            double L = -log1(x);
            return 1.0 / (x * L * L);
        }
        case ModulusFamily::tabulated: {
            auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
            std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - xs_.begin()),
                                                  xs_.size() - 1);
            double left = x - xs_[i - 1], right = xs_[i] - x;
            double h = 0.5 * std::min(left, right);
            if (h < 1e-12 * (xs_[i] - xs_[i - 1]))
                h = 0.25 * std::min(xs_[i] - xs_[i - 1],
                                    i + 1 < xs_.size() ? xs_[i + 1] - xs_[i] : kInf);
            double lo = std::max(x - h, 0.0), hi = std::min(x + h, cap_);
            return (value(hi) - value(lo)) / (hi - lo);
        }
    }
    return 0.0;
}

double Modulus::inverse_cap() const { return value(knee_); }

double Modulus::inverse(double t) const {
    if (!(t >= 0.0)) throw std::domain_error("modulus inverse argument must be >= 0");
    if (t == 0.0) return 0.0;
    if (family_ == ModulusFamily::power) {
        if (t > value(cap_) * (1.0 + 1e-12)) throw std::domain_error("modulus inverse argument too large");
        return pow1(t, 1.0 / tau_);
    }
    double hi = knee_;
    double vh = value(hi);
    if (t > vh * (1.0 + 1e-12))
        throw std::domain_error("modulus inverse argument " + fmt(t) + " above alpha(" + fmt(hi) + ")");
    if (t >= vh) return hi;
    if (family_ == ModulusFamily::tabulated) {
        auto it = std::upper_bound(ys_.begin(), ys_.end(), t);
        std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - ys_.begin()),
                                              ys_.size() - 1);
        double s = (t - ys_[i - 1]) / (ys_[i] - ys_[i - 1]);
        return xs_[i - 1] + s * (xs_[i] - xs_[i - 1]);
    }
    // geometric bisection: preimages of tiny t sit many orders of magnitude
    // below the knee, so the bracket must shrink in log space
    double lo = 1e-300;
    if (t <= value(lo)) return 0.0;  // below the representable preimage range
    auto geo_mid = [](double a, double b) { return std::sqrt(a) * std::sqrt(b); };
    for (int it = 0; it < 140 && hi - lo > 4e-16 * hi; ++it) {
        double mid = geo_mid(lo, hi);
        (value(mid) < t ? lo : hi) = mid;
    }
    // Newton polish inside the bracket
    double x = geo_mid(lo, hi);
    for (int it = 0; it < 4; ++it) {
        double fx = value(x) - t;
        if (fx > 0.0)
            hi = x;
        else
            lo = x;
        double dfx = derivative(std::min(x, knee_ * (1.0 - 1e-14)));
        double nx = dfx > 0.0 ? x - fx / dfx : geo_mid(lo, hi);
        if (!(nx > lo) || !(nx < hi)) nx = geo_mid(lo, hi);
        if (std::fabs(nx - x) <= 1e-16 * x) { x = nx; break; }
        x = nx;
    }
    return x;
}

void Modulus::inverse_batch(std::span<const double> t, std::span<double> out) const {
    if (family_ == ModulusFamily::power) {
        kernels::active().pow(t.data(), 1.0 / tau_, out.data(), t.size());
        return;
    }
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = inverse(t[i]);
}

std::string Modulus::literal() const {
    switch (family_) {
        case ModulusFamily::power: return "power:tau=" + fmt(tau_);
        case ModulusFamily::herman_log: return "herman_log:eps=" + fmt(eps_);
        case ModulusFamily::dkn: return "dkn:d=" + std::to_string(d_) + ",eps=" + fmt(eps_);
        case ModulusFamily::iterated_log: {
            std::string s = "iterated_log:depth=" + std::to_string(depth_);
            if (eps_ != 0.0) s += ",eps=" + fmt(eps_);
            return s;
        }
        case ModulusFamily::inv_log: return "inv_log";
        case ModulusFamily::tabulated: return "table:path=" + table_path_;
    }
    return "";
}

Modulus Modulus::parse(const std::string& literal) {
    auto colon = literal.find(':');
    std::string name = literal.substr(0, colon);
    std::map<std::string, std::string> p;
    if (colon != std::string::npos) p = parse_params(literal.substr(colon + 1));

    auto want = [&](const char* key) -> std::string {
        auto it = p.find(key);
        if (it == p.end())
            throw std::invalid_argument("modulus literal '" + literal + "' missing " + key);
        return it->second;
    };

    if (name == "power") return power(to_double(want("tau"), "tau"));
    if (name == "herman_log")
        return herman_log(p.count("eps") ? to_double(p["eps"], "eps") : 0.0);
    if (name == "dkn")
        return dkn(static_cast<int>(to_double(want("d"), "d")), to_double(want("eps"), "eps"));
    if (name == "iterated_log")
        return iterated_log(static_cast<int>(to_double(want("depth"), "depth")),
                            p.count("eps") ? to_double(p["eps"], "eps") : 0.0);
    if (name == "inv_log") return inv_log();
    if (name == "table") {
        std::string path = want("path");
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open modulus table: " + path);
        std::vector<double> xs, ys;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() ||
                !(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '.'))
                continue;
            auto comma = line.find(',');
            if (comma == std::string::npos) continue;
            xs.push_back(to_double(line.substr(0, comma), "table x"));
            ys.push_back(to_double(line.substr(comma + 1), "table y"));
        }
        Modulus m = tabulated(std::move(xs), std::move(ys));
        m.table_path_ = path;
        return m;
    }
    throw std::invalid_argument("unknown modulus family: '" + name + "'");
}

IntegrabilityReport integrate_reciprocal_power(const Modulus& alpha, int d, double tol) {
    if (d < 1) throw std::invalid_argument("integrability exponent d must be >= 1");
    double U = std::min(alpha.domain_cap(), alpha.monotone_cap());
    // divide one factor at a time: alpha^d may underflow where the quotient
    // is still representable
    auto f = [&](double x) {
        double v = alpha.value(x);
        double r = 1.0;
        for (int i = 0; i < d; ++i) r /= v;
        return r;
    };
    return integrate_to_zero(f, U, tol);
}

IntegrabilityReport integrate_inverse_ratio(const Modulus& alpha, int d, double tol) {
    if (d < 1) throw std::invalid_argument("integrability exponent d must be >= 1");
    double T = std::min(1.0, alpha.inverse_cap() * (1.0 - 1e-12));
    auto f = [&](double t) {
        double r = alpha.inverse(t);
        for (int i = 0; i < d + 1; ++i) r /= t;
        return r;
    };
    return integrate_to_zero(f, T, tol);
}

namespace {

// grid maximum plus a local ternary refinement between the neighbours
SupReport refine_sup(const std::function<double(double)>& q, double lo, double hi, int samples) {
    SupReport rep;
    rep.samples = samples;
    std::vector<double> ts(samples), vs(samples);
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < samples; ++i) {
        ts[i] = std::exp(llo + (lhi - llo) * i / double(samples - 1));
        vs[i] = q(ts[i]);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (vs[i] > vs[best]) best = i;
    rep.value = vs[best];
    rep.argmax = ts[best];

    // ternary refine when the max is interior
    if (best > 0 && best + 1 < ts.size()) {
        double a = ts[best - 1], b = ts[best + 1];
        for (int it = 0; it < 100; ++it) {
            double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
            if (q(m1) < q(m2))
                a = m1;
            else
                b = m2;
        }
        double t = 0.5 * (a + b), v = q(t);
        if (v > rep.value) {
            rep.value = v;
            rep.argmax = t;
        }
    }

    // unbounded growth toward the small end: the sup sits on the boundary and
    // still gains per decade at the smallest scales
    bool increasing = true;
    for (int i = 0; i + 1 < 8 && i + 1 < samples; ++i)
        increasing = increasing && vs[i] > vs[i + 1] * (1.0 + 1e-9);
    int decades = std::max(1, int(std::log10(hi / lo)));
    int per_decade = std::max(1, (samples - 1) / decades);
    std::size_t cmp = std::min<std::size_t>(2 * per_decade, ts.size() - 1);
    if (best == 0 && increasing && vs[0] > 1.05 * vs[cmp]) rep.infinite = true;
    return rep;
}

}  // namespace

SupReport sup_composite_ratio(const Modulus& alpha, int d) {
    if (d < 2) throw std::invalid_argument("composite ratio condition requires d >= 2");
    double U = std::min(alpha.domain_cap(), alpha.monotone_cap()) * (1.0 - 1e-9);
    auto q = [&](double y) {
        double u = ipow(y, d + 1) / ipow(alpha.value(y), d);
        if (!(u > 0.0)) return 0.0;
        if (u > alpha.domain_cap()) u = alpha.domain_cap();
        return alpha.value(u) / y;
    };
    return refine_sup(q, 1e-8, U, 400);
}

SupReport sup_slope_ratio(const Modulus& alpha) {
    // tables only carry piecewise slopes; the ratio would jump at every knot
    if (alpha.family() == ModulusFamily::tabulated)
        throw std::invalid_argument("slope-ratio supremum needs a catalog modulus");
    double U = std::min(alpha.domain_cap(), alpha.monotone_cap()) * (1.0 - 1e-9);
    auto q = [&](double t) {
        double dv = alpha.derivative(t);
        if (!(dv > 0.0)) return kInf;
        return alpha.value(t) / (t * dv);
    };
    return refine_sup(q, 1e-12, U, 400);
}

}  // namespace denjoy
