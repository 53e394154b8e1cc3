#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "denjoy/common.hpp"
#include "denjoy/diffeo.hpp"
#include "denjoy/quadrature.hpp"
#include "denjoy/verify.hpp"
#include "denjoy/yoccoz.hpp"

using namespace denjoy;

namespace {

std::shared_ptr<const BlowupModel> golden_model(int radius,
                                                SchemeKind kind = SchemeKind::herman_v,
                                                int k = 1) {
    RotationAction act{{(std::sqrt(5.0) - 1.0) / 2.0}, true};
    auto scheme = LengthScheme::make(kind, Modulus::power(0.5), 1, k);
    BuildOptions opts;
    opts.force_radius = radius;
    return std::make_shared<BlowupModel>(BlowupModel::build(act, scheme, opts));
}

std::shared_ptr<const BlowupModel> z2_model(int radius) {
    RotationAction act{{std::sqrt(2.0) - 1.0, std::sqrt(3.0) - 1.0}, true};
    auto scheme = LengthScheme::make(SchemeKind::nu, Modulus::dkn(2, 0.1), 2, 2);
    BuildOptions opts;
    opts.force_radius = radius;
    opts.max_intervals = 3000000;
    return std::make_shared<BlowupModel>(BlowupModel::build(act, scheme, opts));
}

}  // namespace

TEST_CASE("interval endpoints map onto interval endpoints") {
    auto m = golden_model(2000);
    DiffeoAction f(m);
    Generator s{0, false};
    for (std::size_t i = 0; i < m->size(); i += 53) {
        auto t = m->shifted_index(i, 0, false);
        if (!t) continue;
        CHECK(std::fabs(f.value(s, m->a_at(i)) - m->a_at(*t)) <= 1e-13);
        CHECK(std::fabs(f.value(s, m->b_at(i)) - m->b_at(*t)) <= 1e-13);
    }
}

TEST_CASE("derivative values: gaps, endpoints, midpoints") {
    auto m = golden_model(1000);
    DiffeoAction f(m);
    Generator s{0, false};
    auto id = m->index_of(std::vector<std::int32_t>{0});
    REQUIRE(id.has_value());
    auto tgt = m->shifted_index(*id, 0, false);
    REQUIRE(tgt.has_value());
    double a = m->a_at(*id), len = m->len_at(*id);
    double R = m->len_at(*tgt) / len;
    CHECK(f.derivative(s, a) == 1.0);
    CHECK(f.derivative(s, a + 0.5 * len) == doctest::Approx(R * R).epsilon(1e-13));
    // gap points carry derivative exactly 1
    double gap_x = m->b_at(*id) + 0.25 * (m->a_at(*id + 1) - m->b_at(*id));
    CHECK(!m->interval_at(gap_x).has_value());
    CHECK(f.derivative(s, gap_x) == 1.0);
}

TEST_CASE("derivative batch equals scalar path bitwise") {
    auto m = golden_model(500);
    DiffeoAction f(m);
    Generator s{0, true};
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> xs(1537), out(1537);
    for (auto& x : xs) x = u(rng);
    f.derivative_batch(s, xs, out);
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(out[i] == f.derivative(s, xs[i]));
}

TEST_CASE("value and derivative are consistent through quadrature") {
    // Dual route: f(x) - f(0) against the integral of the derivative over
    // [0, x]. The derivative is piecewise smooth with kinks at every
    // interval boundary, so the integral is taken piecewise: quadrature on
    // the large intervals, the interval transfer mass on small fully
    // contained ones, the closed-form antiderivative on boundary fragments,
    // and exact widths on the gaps (where the derivative is exactly 1).
    // The radius keeps the single boundary-influx jump below half the
    // tolerance.
    auto m = golden_model(350000);
    DiffeoAction f(m);
    Generator s{0, false};
    auto piece = [&](std::size_t i, double lo, double hi) {
        // integral of f' over [lo, hi] inside interval i
        auto tgt = m->shifted_index(i, 0, false);
        if (!tgt) return 0.0;  // collapsed boundary interval: f is constant
        double a = m->a_at(i), len = m->len_at(i);
        double R = m->len_at(*tgt) / len;
        if (len >= 1e-3)
            return adaptive_simpson([&](double t) { return f.derivative(s, t); }, lo, hi,
                                    1e-13 * len, 30);
        double u1 = (lo - a) / len, u2 = (hi - a) / len;
        return (hi - lo) - (1.0 - R) * len * (bump_integral(R, u2) - bump_integral(R, u1));
    };
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double f0 = f.value(s, 0.0);
    for (int trial = 0; trial < 100; ++trial) {
        double x = u(rng);
        double lhs = f.value(s, x) - f0;
        if (lhs < 0) lhs += 1.0;
        double covered = 0.0, total = 0.0;
        for (std::size_t i = 0; i < m->size() && m->a_at(i) < x; ++i) {
            double lo = m->a_at(i), hi = std::min(m->b_at(i), x);
            if (hi <= lo) continue;
            covered += hi - lo;
            total += piece(i, lo, hi);
        }
        double rhs = total + (x - covered);  // gaps carry derivative 1
        CHECK(std::fabs(lhs - rhs) <= 1e-8);
    }
}

TEST_CASE("monotone circle maps with winding one") {
    for (int k : {1, 2, 4, 8}) {
        auto m = golden_model(4000, SchemeKind::nu, k);
        DiffeoAction f(m);
        for (bool inv : {false, true}) {
            Generator s{0, inv};
            double prev = f.value(s, 0.0);
            int wind = 0;
            for (int i = 1; i < 10000; ++i) {
                double v = f.value(s, i / 10000.0);
                double d = v - prev;
                if (d < 0) {
                    d += 1.0;
                    ++wind;
                }
                CHECK(d > 0.0);
                prev = v;
            }
            CHECK(wind == 1);
        }
    }
}

TEST_CASE("generators commute within the numeric budget") {
    auto m = z2_model(120);
    DiffeoAction f(m);
    Generator sx{0, false}, sy{1, false};
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        double x = u(rng);
        worst = std::max(worst, std::fabs(f.value(sy, f.value(sx, x)) -
                                          f.value(sx, f.value(sy, x))));
    }
    CHECK(worst <= std::max(1e-12, m->boundary_defect()));
}

TEST_CASE("inverse generator inverts") {
    auto m = golden_model(3000);
    DiffeoAction f(m);
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        double x = u(rng);
        worst = std::max(worst,
                         circle_dist(f.value({0, true}, f.value({0, false}, x)), x));
    }
    CHECK(worst <= std::max(1e-12, 4.0 * m->boundary_defect()));
}

TEST_CASE("lift iterates and rotation numbers") {
    auto m = golden_model(50000);
    DiffeoAction f(m);
    Generator s{0, false};
    double theta = m->action().theta[0];

    // single step from the identity interval's left endpoint
    auto id = m->index_of(std::vector<std::int32_t>{0});
    double a0 = m->a_at(*id);
    double lift1 = f.lift_iterate(s, a0, 1);
    CHECK(lift1 - a0 >= 0.0);
    CHECK(lift1 - a0 < 1.0);
    CHECK(wrap01(lift1) == doctest::Approx(f.value(s, a0)).epsilon(1e-15));

    double est = f.rotation_estimate(s, 0.37, 10000);
    CHECK(std::fabs(est - theta) <= 2e-4);
    // base-point independence within 2/n
    double est2 = f.rotation_estimate(s, 0.91, 10000);
    CHECK(std::fabs(est - est2) <= 2e-4);
    // the inverse generator rotates by 1 - theta
    double esti = f.rotation_estimate({0, true}, 0.2, 10000);
    CHECK(std::fabs(esti - (1.0 - theta)) <= 2e-4);

    // blow-ups at every index share the rotation number
    auto m8 = golden_model(20000, SchemeKind::nu, 8);
    DiffeoAction f8(m8);
    CHECK(std::fabs(f8.rotation_estimate(s, 0.37, 10000) - est) <= 4e-4);
}

TEST_CASE("iterated images follow the indexed translates") {
    auto m = golden_model(500);
    DiffeoAction f(m);
    Generator s{0, false};
    auto id = m->index_of(std::vector<std::int32_t>{0});
    double an = m->a_at(*id), bn = m->b_at(*id);
    for (int n = 1; n <= 100; ++n) {
        an = f.value(s, an);
        bn = f.value(s, bn);
        auto t = m->index_of(std::vector<std::int32_t>{n});
        REQUIRE(t.has_value());
        CHECK(std::fabs(an - m->a_at(*t)) <= n * 1e-12);
        CHECK(std::fabs(bn - m->b_at(*t)) <= n * 1e-12);
    }
}

TEST_CASE("rank-3 actions work end to end") {
    // power(0.3) keeps 1/alpha^3 integrable near zero
    RotationAction act{{(std::sqrt(5.0) - 1.0) / 2.0, std::sqrt(2.0) - 1.0,
                        std::sqrt(3.0) - 1.0},
                       true};
    auto scheme = LengthScheme::make(SchemeKind::nu, Modulus::power(0.3), 3, 2);
    BuildOptions opts;
    opts.force_radius = 24;
    opts.max_intervals = 200000;
    auto m = std::make_shared<BlowupModel>(BlowupModel::build(act, scheme, opts));
    std::int64_t ball = 0;
    for (int n = 0; n <= 24; ++n) ball += spherical_growth(3, n);
    CHECK(std::int64_t(m->size()) == ball);
    DiffeoAction f(m);
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
        double x = u(rng);
        for (int a = 0; a < 3; ++a) {
            int b = (a + 1) % 3;
            worst = std::max(worst, std::fabs(f.value({a, false}, f.value({b, false}, x)) -
                                              f.value({b, false}, f.value({a, false}, x))));
        }
    }
    CHECK(worst <= std::max(1e-12, m->boundary_defect()));
    for (int a = 0; a < 3; ++a) {
        double est = f.rotation_estimate({a, false}, 0.4, 5000);
        CHECK(std::fabs(est - act.theta[static_cast<std::size_t>(a)]) <= 1e-3);
    }
}

TEST_CASE("C1 distances shrink along the blow-up sequence") {
    auto m1 = golden_model(4000, SchemeKind::nu, 1);
    auto m16 = golden_model(4000, SchemeKind::nu, 16);
    DiffeoAction f1(m1), f16(m16);
    auto d1 = c1_distance(f1, {0, false}, 10000);
    auto d16 = c1_distance(f16, {0, false}, 10000);
    CHECK(d16.c0 <= 0.5 * d1.c0);
    CHECK(d16.c1 <= 0.5 * d1.c1);
}
