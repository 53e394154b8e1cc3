#include "denjoy/group_orbit.hpp"

#include <cmath>
#include <stdexcept>

#include "denjoy/common.hpp"
#include "denjoy/kernels.hpp"

namespace denjoy {

int word_length(const GroupElement& g) { return g.norm(); }

namespace {

std::int64_t binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void sphere_rec(int d, int rem, std::vector<std::int32_t>& buf, int pos,
                const std::function<void(std::span<const std::int32_t>)>& fn) {
    if (pos == d - 1) {
        if (rem == 0) {
            buf[pos] = 0;
            fn(buf);
        } else {
            buf[pos] = -rem;
            fn(buf);
            buf[pos] = rem;
            fn(buf);
        }
        return;
    }
    for (int v = -rem; v <= rem; ++v) {
        buf[pos] = v;
        sphere_rec(d, rem - std::abs(v), buf, pos + 1, fn);
    }
}

}  // namespace

std::int64_t spherical_growth(int d, int n) {
    if (d < 1) throw std::invalid_argument("spherical growth needs d >= 1");
    if (n < 0) throw std::invalid_argument("spherical growth needs n >= 0");
    if (n == 0) return 1;
    std::int64_t total = 0;
    for (int k = 1; k <= std::min(d, n); ++k)
        total += binomial(d, k) * (std::int64_t(1) << k) * binomial(n - 1, k - 1);
    return total;
}

void for_each_sphere(int d, int n,
                     const std::function<void(std::span<const std::int32_t>)>& fn) {
    if (d < 1 || n < 0) throw std::invalid_argument("sphere needs d >= 1, n >= 0");
    std::vector<std::int32_t> buf(static_cast<std::size_t>(d));
    sphere_rec(d, n, buf, 0, fn);
}

std::vector<GroupElement> enumerate_sphere(int d, int n) {
    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(spherical_growth(d, n)));
    for_each_sphere(d, n, [&](std::span<const std::int32_t> g) {
        out.push_back(GroupElement{{g.begin(), g.end()}});
    });
    return out;
}

double RotationAction::orbit_point(std::span<const std::int32_t> g) const {
    if (g.size() != theta.size())
        throw std::invalid_argument("group element rank does not match action rank");
    // two-product per coordinate, two-sum accumulation
    double hi = 0.0, lo = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double gi = static_cast<double>(g[i]);
        double ph = gi * theta[i];
        double pl = std::fma(gi, theta[i], -ph);
        double s = hi + ph;
        double e = std::fabs(hi) >= std::fabs(ph) ? (hi - s) + ph : (ph - s) + hi;
        hi = s;
        lo += e + pl;
    }
    double base = std::floor(hi + lo);
    return wrap01((hi - base) + lo);
}

std::optional<std::pair<std::int64_t, std::int64_t>> small_denominator(double theta,
                                                                       std::int64_t qmax,
                                                                       double tol) {
    double x = wrap01(theta);
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;  // convergents
    double frac = x;
    std::int64_t ip = 0;
    for (int it = 0; it < 64; ++it) {
        std::int64_t p2 = ip * p1 + p0, q2 = ip * q1 + q0;
        if (it > 0) {
            if (q2 > qmax) break;
            double err = std::fabs(x - double(p2) / double(q2));
            // every irrational has convergents with err ~ 1/q^2; only flag
            // approximations far better than that scale, which is what a
            // genuinely rational (or near-rational double) input produces
            if (err < tol && err * double(q2) * double(q2) < 1e-3)
                return std::make_pair(p2, q2);
        }
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        if (frac == 0.0) break;
        double inv = 1.0 / frac;
        ip = static_cast<std::int64_t>(std::floor(inv));
        frac = inv - std::floor(inv);
    }
    return std::nullopt;
}

std::vector<double> smooth_growth(std::span<const double> f) {
    if (f.empty()) throw std::invalid_argument("growth smoothing needs a nonempty sequence");
    std::vector<double> g(f.size());
    KahanSum logsum;
    double prev = 1.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!(f[i] >= 1.0)) throw std::invalid_argument("growth sequence must satisfy f >= 1");
        if (f[i] < prev * (1.0 - 1e-15))
            throw std::invalid_argument("growth sequence must be monotone increasing");
        prev = f[i];
        logsum.add(kernels::log1(f[i]));
        g[i] = kernels::exp1(2.0 * logsum.value() / double(i + 1));
    }
    return g;
}

}  // namespace denjoy
