#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "denjoy/blowup.hpp"
#include "denjoy/model_io.hpp"

using namespace denjoy;

namespace {

BlowupModel golden_model(int radius, SchemeKind kind = SchemeKind::herman_v, int k = 1) {
    RotationAction act{{(std::sqrt(5.0) - 1.0) / 2.0}, true};
    auto scheme = LengthScheme::make(kind, Modulus::power(0.5), 1, k);
    BuildOptions opts;
    opts.force_radius = radius;
    return BlowupModel::build(act, scheme, opts);
}

}  // namespace

TEST_CASE("interval table is exactly disjoint and order preserving") {
    auto m = golden_model(5000);
    CHECK(m.size() == 10001);
    for (std::size_t i = 1; i < m.size(); ++i) {
        CHECK(m.point_at(i) > m.point_at(i - 1));  // circle order of base points
        CHECK(m.a_at(i) > m.b_at(i - 1));          // strict gaps between intervals
    }
    // total measure: (1 - L) + sum of lengths = 1
    double sum = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) sum += m.len_at(i);
    CHECK(sum == doctest::Approx(m.mass()).epsilon(1e-12));
    CHECK((1.0 - m.mass()) + sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("position function") {
    auto m = golden_model(2000);
    CHECK(m.position(0.0) == 0.0);
    CHECK(m.position(1.0 - 1e-15) == doctest::Approx(1.0).epsilon(1e-12));
    // order transported: a(<2 theta>) < a(<theta>)
    const auto& act = m.action();
    double a1 = m.position(act.orbit_point(GroupElement{{1}}));
    double a2 = m.position(act.orbit_point(GroupElement{{2}}));
    CHECK(a2 < a1);
    // jump at an orbit point equals its interval length
    for (std::size_t i : {std::size_t(3), std::size_t(777), m.size() - 2}) {
        double y = m.point_at(i);
        double below = m.position(y);
        double above = m.position(std::nextafter(y, 2.0));
        CHECK(std::fabs((above - below) - m.len_at(i)) <= 1e-14);
        CHECK(below == doctest::Approx(m.a_at(i)).epsilon(1e-15));
    }
    // strictly increasing
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        double x = u(rng), y = u(rng);
        if (x == y) continue;
        if (x > y) std::swap(x, y);
        CHECK(m.position(x) < m.position(y));
    }
}

TEST_CASE("semiconjugacy collapses intervals and inverts the position") {
    auto m = golden_model(2000);
    CHECK(m.semiconjugacy(0.0) == 0.0);
    for (std::size_t i : {std::size_t(1), std::size_t(42), m.size() - 1}) {
        double mid = m.a_at(i) + 0.5 * m.len_at(i);
        CHECK(m.semiconjugacy(mid) == m.point_at(i));
    }
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 5000; ++i) {
        double z = u(rng);
        worst = std::max(worst, std::fabs(m.semiconjugacy(m.position(z)) - z));
    }
    CHECK(worst <= 1e-12);
    // monotone non-decreasing on a grid
    double prev = -1.0;
    for (int i = 0; i < 20000; ++i) {
        double h = m.semiconjugacy(i / 20000.0);
        CHECK(h >= prev);
        prev = h;
    }
}

TEST_CASE("interval membership with left-endpoint convention") {
    auto m = golden_model(200);
    // the identity element's interval contains its own midpoint
    auto id = m.index_of(std::vector<std::int32_t>{0});
    REQUIRE(id.has_value());
    auto got = m.interval_at(m.a_at(*id) + 0.5 * m.len_at(*id));
    REQUIRE(got.has_value());
    CHECK(m.element_at(*got).e == std::vector<std::int32_t>{0});
    auto mid = m.interval_at(m.a_at(17) + 0.5 * m.len_at(17));
    REQUIRE(mid.has_value());
    CHECK(*mid == 17);
    auto left = m.interval_at(m.a_at(17));
    REQUIRE(left.has_value());
    CHECK(*left == 17);
    // cross-check membership against a full scan
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 3000; ++t) {
        double x = u(rng);
        auto got = m.interval_at(x);
        bool found = false;
        for (std::size_t i = 0; i < m.size() && !found; ++i)
            found = x >= m.a_at(i) && x <= m.b_at(i);
        CHECK(got.has_value() == found);
    }
}

TEST_CASE("element lookup") {
    auto m = golden_model(300);
    std::vector<std::int32_t> e{-137};
    auto idx = m.index_of(e);
    REQUIRE(idx.has_value());
    CHECK(m.element_at(*idx).e == e);
    auto shifted = m.shifted_index(*idx, 0, false);
    REQUIRE(shifted.has_value());
    CHECK(m.element_at(*shifted).e == std::vector<std::int32_t>{-136});
    CHECK(!m.index_of(std::vector<std::int32_t>{301}).has_value());
    // boundary translate is unindexed
    auto edge = m.index_of(std::vector<std::int32_t>{300});
    REQUIRE(edge.has_value());
    CHECK(!m.shifted_index(*edge, 0, false).has_value());
}

TEST_CASE("endpoint proximity flag") {
    auto m = golden_model(100);
    double a = m.a_at(7), b = m.b_at(7);
    CHECK(m.near_interval_endpoint(a, 1e-12));
    CHECK(m.near_interval_endpoint(b + 5e-13, 1e-12));
    CHECK(m.near_interval_endpoint(a - 5e-13, 1e-12));
    CHECK(!m.near_interval_endpoint(a + 0.4 * m.len_at(7), 1e-12));
    double gap_mid = 0.5 * (m.b_at(7) + m.a_at(8));
    CHECK(!m.near_interval_endpoint(gap_mid, 1e-12));
}

TEST_CASE("rational rotation flags duplicate orbit points") {
    RotationAction act{{0.5}, false};
    auto scheme = LengthScheme::make(SchemeKind::herman_v, Modulus::power(0.5), 1, 1);
    BuildOptions opts;
    opts.force_radius = 16;
    auto m = BlowupModel::build(act, scheme, opts);
    CHECK(m.duplicate_points_flagged());
    auto g = golden_model(64);
    CHECK(!g.duplicate_points_flagged());
}

TEST_CASE("radius selection honors the tail budget") {
    RotationAction act{{(std::sqrt(5.0) - 1.0) / 2.0}, true};
    auto scheme = LengthScheme::make(SchemeKind::alpha_inv, Modulus::power(0.5), 1, 4);
    BuildOptions opts;
    opts.tail_tol = 1e-4;
    opts.radius_cap = 100000;
    auto m = BlowupModel::build(act, scheme, opts);
    CHECK(m.radius() < 100000);  // budget reachable, cap must not bind
    CHECK(m.scale() * m.mass_report().tail_bound <= 1e-4);
    // one step tighter on the radius would miss the budget
    auto tighter = scheme.total_mass(m.radius() - 1);
    CHECK(m.scale() * tighter.tail_bound > 1e-4);

    // infeasible budget: the cap binds
    BuildOptions hard;
    hard.tail_tol = 1e-18;
    hard.radius_cap = 4000;
    auto m2 = BlowupModel::build(act, scheme, hard);
    CHECK(m2.radius() == 4000);
}

TEST_CASE("model json round trip") {
    auto m = golden_model(500);
    auto j = model_to_json(m);
    CHECK(j["version"] == 1);
    CHECK(j["intervals"].size() == m.size());
    auto back = model_from_json(j);
    CHECK(back->size() == m.size());
    CHECK(back->mass() == doctest::Approx(m.mass()).epsilon(1e-15));
    CHECK(back->radius() == m.radius());
    for (std::size_t i : {std::size_t(0), std::size_t(99), m.size() - 1}) {
        CHECK(back->a_at(i) == m.a_at(i));
        CHECK(back->len_at(i) == m.len_at(i));
    }

    // tampered interval table is rejected
    auto bad = j;
    bad["intervals"][3]["point"] = 0.123456;
    CHECK_THROWS_AS(model_from_json(bad), ModelCorrupt);
    auto bad2 = j;
    bad2["L"] = 0.1;
    CHECK_THROWS_AS(model_from_json(bad2), ModelCorrupt);
    CHECK_THROWS_AS(model_from_json(nlohmann::json::object()), ModelCorrupt);
}

TEST_CASE("csv export shape") {
    auto m = golden_model(50);
    std::ostringstream out;
    write_interval_csv(m, out);
    std::istringstream in(out.str());
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == m.size() + 1);  // header + one row per interval
}
