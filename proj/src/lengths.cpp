#include "denjoy/lengths.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "denjoy/common.hpp"
#include "denjoy/kernels.hpp"

namespace denjoy {

namespace {

constexpr int kProbeRadius = 32768;   // fixed radius for admissibility probes
constexpr double kMassTarget = 0.95;  // blown mass target for normalized schemes

double ipow(double v, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= v;
    return r;
}

}  // namespace

SchemeKind LengthScheme::parse_kind(const std::string& name) {
    if (name == "herman_v") return SchemeKind::herman_v;
    if (name == "nu") return SchemeKind::nu;
    if (name == "alpha_inv") return SchemeKind::alpha_inv;
    throw std::invalid_argument("unknown scheme '" + name + "' (use herman_v | nu | alpha_inv)");
}

const char* LengthScheme::kind_name(SchemeKind k) {
    switch (k) {
        case SchemeKind::herman_v: return "herman_v";
        case SchemeKind::nu: return "nu";
        case SchemeKind::alpha_inv: return "alpha_inv";
    }
    return "?";
}

double LengthScheme::decay(double x) const {
    return ipow(x, d_ + 1) * ipow(alpha_.value(std::min(1.0 / x, alpha_.domain_cap())), d_);
}

int LengthScheme::min_index() const {
    if (kind_ == SchemeKind::herman_v) return 1;
    for (int kk = 1; kk <= 64; ++kk) {
        double x = 1.0 / kk;
        if (kind_ == SchemeKind::nu) {
            if (x <= alpha_.domain_cap() && alpha_.value(x) > 0.0) return kk;
        } else {
            if (x <= alpha_.inverse_cap() * (1.0 + 1e-12)) return kk;
        }
    }
    throw std::invalid_argument("scheme has no well-defined index below 64 for this modulus");
}

double LengthScheme::length_at_norm(int n) const {
    if (n < 0) throw std::invalid_argument("word norm must be >= 0");
    double j = double(n) + (kind_ == SchemeKind::herman_v ? shift_ : double(k_));
    if (kind_ == SchemeKind::alpha_inv) return alpha_.inverse(1.0 / j);
    double av = alpha_.value(std::min(1.0 / j, alpha_.domain_cap()));
    if (!(av > 0.0)) throw std::domain_error("scheme undefined: modulus vanishes at 1/" +
                                             std::to_string(j));
    return 1.0 / (ipow(j, d_ + 1) * ipow(av, d_));
}

void LengthScheme::length_at_norm_batch(int n_lo, int n_hi, std::span<double> out) const {
    const std::size_t n = static_cast<std::size_t>(n_hi - n_lo + 1);
    double kk = kind_ == SchemeKind::herman_v ? shift_ : double(k_);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 / (double(n_lo + int(i)) + kk);

    if (kind_ == SchemeKind::alpha_inv) {
        alpha_.inverse_batch(x, out);
        return;
    }
    std::vector<double> av(n);
    alpha_.value_batch(x, av);
    for (std::size_t i = 0; i < n; ++i) {
        double j = double(n_lo + int(i)) + kk;
        out[i] = 1.0 / (ipow(j, d_ + 1) * ipow(av[i], d_));
    }
}

double LengthScheme::length(const GroupElement& g) const {
    double base = length_at_norm(g.norm());
    return weight_ ? weight_(std::span(g.e)) * base : base;
}

double LengthScheme::mass_partial(double kk, int radius) const {
    KahanSum sum;
    const std::size_t n = static_cast<std::size_t>(radius) + 1;
    std::vector<double> x(n), av(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 / (double(i) + kk);

    if (kind_ == SchemeKind::alpha_inv) {
        alpha_.inverse_batch(x, av);
        for (std::size_t i = 0; i < n; ++i)
            sum.add(double(spherical_growth(d_, int(i))) * av[i]);
        return sum.value();
    }

    alpha_.value_batch(x, av);
    for (std::size_t i = 0; i < n; ++i) {
        double j = double(i) + kk;
        double len = 1.0 / (ipow(j, d_ + 1) * ipow(av[i], d_));
        sum.add(double(spherical_growth(d_, int(i))) * len);
    }
    return sum.value();
}

double LengthScheme::mass_tail(double kk, int radius) const {
    double u_hi = 1.0 / (double(radius) + kk);
    IntegrabilityReport rep;
    // factor-by-factor division: the plain powers can underflow where the
    // quotient is still representable
    if (kind_ == SchemeKind::alpha_inv) {
        auto f = [&](double t) {
            double r = alpha_.inverse(t);
            for (int i = 0; i < d_ + 1; ++i) r /= t;
            return r;
        };
        rep = integrate_to_zero(f, u_hi, 1e-3);
    } else {
        auto f = [&](double u) {
            double v = alpha_.value(u);
            double r = 1.0;
            for (int i = 0; i < d_; ++i) r /= v;
            return r;
        };
        rep = integrate_to_zero(f, u_hi, 1e-3);
    }
    if (rep.divergent)
        throw InadmissibleScheme(std::string("scheme inadmissible for this modulus and d=") +
                                     std::to_string(d_) + ": mass series diverges",
                                 rep);
    if (!rep.classified_convergent)
        throw InadmissibleScheme("scheme mass tail could not be classified as summable", rep);
    // sigma_d(n) <= 2d n^(d-1), integral comparison, recorded slack 2
    return 2.0 * (2.0 * d_) * rep.value;
}

MassReport LengthScheme::total_mass(int radius) const {
    if (radius < 1) throw std::invalid_argument("mass radius must be >= 1");
    MassReport rep;
    rep.radius = radius;
    rep.slack = 2.0;
    double kk = kind_ == SchemeKind::herman_v ? shift_ : double(k_);
    rep.partial_sum = mass_partial(kk, radius);
    rep.tail_bound = mass_tail(kk, radius);
    return rep;
}

double LengthScheme::normalization() const { return normalization_; }

LengthScheme LengthScheme::make(SchemeKind kind, Modulus alpha, int d, int k,
                                std::optional<double> shift, Weight weight) {
    if (d < 1) throw std::invalid_argument("scheme dimension d must be >= 1");
    if (k < 1) throw std::invalid_argument("blow-up index k must be >= 1");
    if (kind == SchemeKind::herman_v && d != 1)
        throw std::invalid_argument("herman_v scheme requires d=1 (got d=" + std::to_string(d) +
                                    ")");
    LengthScheme s;
    s.kind_ = kind;
    s.alpha_ = std::move(alpha);
    s.d_ = d;
    s.k_ = k;
    s.weight_ = std::move(weight);
    s.shift_ = 0.0;

    if (kind == SchemeKind::herman_v) {
        s.normalization_ = 1.0;
        if (shift) {
            if (!(*shift >= 1.0)) throw std::invalid_argument("herman_v shift K must be >= 1");
            s.shift_ = *shift;
        } else {
            double ref = std::min(s.alpha_.domain_cap(), s.alpha_.monotone_cap());
            double K = std::max(2.0, 1.0 / s.alpha_.value(ref));
            // double K until the bracketed mass fits below 1
            while (true) {
                s.shift_ = K;
                double est = s.mass_partial(K, kProbeRadius) + s.mass_tail(K, kProbeRadius);
                if (est <= 1.0) break;
                if (K > double(1 << 30))
                    throw InadmissibleScheme(
                        "herman_v shift grew past 2^30 without the mass fitting",
                        IntegrabilityReport{});
                K *= 2.0;
            }
        }
        return s;
    }

    if (shift) throw std::invalid_argument("shift K only applies to the herman_v scheme");
    int kmin = s.min_index();
    if (k < kmin)
        throw std::invalid_argument("blow-up index k=" + std::to_string(k) +
                                    " below the smallest well-defined index " +
                                    std::to_string(kmin) + " for this modulus");
    double mass1 = s.mass_partial(kmin, kProbeRadius) + s.mass_tail(kmin, kProbeRadius);
    s.normalization_ = std::min(1.0, kMassTarget / mass1);
    return s;
}

double LengthScheme::fundamental_ratio_norms(int n_from, int n_to) const {
    double lf = length_at_norm(n_from);
    double lt = length_at_norm(n_to);
    double af = alpha_.value(std::min(lf, alpha_.domain_cap()));
    return std::fabs(1.0 - lt / lf) / af;
}

double LengthScheme::fundamental_ratio(const GroupElement& g, const GroupElement& sg) const {
    double lf = length(g);
    double lt_base = length_at_norm(sg.norm());
    double lf_base = length_at_norm(g.norm());
    // the base-derivative weights cancel in the ratio term
    double af = alpha_.value(std::min(lf, alpha_.domain_cap()));
    return std::fabs(1.0 - lt_base / lf_base) / af;
}

LengthScheme::SupRatio LengthScheme::sup_fundamental_ratio(int radius) const {
    if (radius < 1) throw std::invalid_argument("sweep radius must be >= 1");
    std::vector<double> len(static_cast<std::size_t>(radius) + 2);
    length_at_norm_batch(0, radius + 1, len);
    std::vector<double> alen(len.size());
    std::vector<double> clamped(len.begin(), len.end());
    for (auto& v : clamped) v = std::min(v, alpha_.domain_cap());
    alpha_.value_batch(clamped, alen);

    SupRatio best;
    for (int n = 0; n <= radius; ++n) {
        double up = std::fabs(1.0 - len[n + 1] / len[n]) / alen[n];
        if (up > best.value) best = {up, n, +1};
        if (n >= 1) {
            double dn = std::fabs(1.0 - len[n - 1] / len[n]) / alen[n];
            if (dn > best.value) best = {dn, n, -1};
        }
    }
    return best;
}

}  // namespace denjoy
