#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "denjoy/common.hpp"
#include "denjoy/group_orbit.hpp"

using namespace denjoy;

namespace {

// brute-force sphere count by scanning the integer box
std::int64_t count_sphere_brute(int d, int n) {
    std::int64_t count = 0;
    std::vector<int> v(static_cast<std::size_t>(d), -n);
    while (true) {
        int norm = 0;
        for (int x : v) norm += std::abs(x);
        if (norm == n) ++count;
        int i = 0;
        for (; i < d; ++i) {
            if (v[static_cast<std::size_t>(i)] < n) {
                ++v[static_cast<std::size_t>(i)];
                break;
            }
            v[static_cast<std::size_t>(i)] = -n;
        }
        if (i == d) break;
    }
    return count;
}

}  // namespace

TEST_CASE("word length") {
    CHECK(word_length(GroupElement{{0, 0}}) == 0);
    CHECK(word_length(GroupElement{{2, -3}}) == 5);
    CHECK(word_length(GroupElement{{-7}}) == 7);
}

TEST_CASE("spherical growth closed form vs enumeration") {
    CHECK(spherical_growth(1, 3) == 2);
    CHECK(spherical_growth(2, 1) == 4);
    CHECK(spherical_growth(5, 0) == 1);
    for (int d = 1; d <= 3; ++d)
        for (int n = 0; n <= 12; ++n) CHECK(spherical_growth(d, n) == count_sphere_brute(d, n));
    CHECK_THROWS_AS(spherical_growth(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(spherical_growth(1, -1), std::invalid_argument);
}

TEST_CASE("sphere count bound used by the tail estimates") {
    // sigma_d(n) <= 2 d n^(d-1)
    for (int d = 1; d <= 4; ++d)
        for (int n = 1; n <= 200; ++n)
            CHECK(double(spherical_growth(d, n)) <=
                  2.0 * d * std::pow(double(n), d - 1) + 1e-9);
}

TEST_CASE("ball count equals summed spheres") {
    for (int d = 1; d <= 3; ++d) {
        for (int n = 0; n <= 20; ++n) {
            std::int64_t ball = 0;
            for (int i = 0; i <= n; ++i) ball += spherical_growth(d, i);
            std::int64_t brute = 0;
            for (int i = 0; i <= n; ++i) brute += count_sphere_brute(d, i);
            CHECK(ball == brute);
        }
    }
}

TEST_CASE("sphere enumeration order and coverage") {
    auto s10 = enumerate_sphere(1, 0);
    REQUIRE(s10.size() == 1);
    CHECK(s10[0].e == std::vector<std::int32_t>{0});

    auto s11 = enumerate_sphere(1, 1);
    REQUIRE(s11.size() == 2);
    CHECK(s11[0].e == std::vector<std::int32_t>{-1});
    CHECK(s11[1].e == std::vector<std::int32_t>{1});

    auto s21 = enumerate_sphere(2, 1);
    REQUIRE(s21.size() == 4);
    CHECK(s21[0].e == std::vector<std::int32_t>{-1, 0});
    CHECK(s21[1].e == std::vector<std::int32_t>{0, -1});
    CHECK(s21[2].e == std::vector<std::int32_t>{0, 1});
    CHECK(s21[3].e == std::vector<std::int32_t>{1, 0});

    // lexicographic, unique, correct norm
    auto s = enumerate_sphere(3, 6);
    CHECK(std::int64_t(s.size()) == spherical_growth(3, 6));
    std::set<std::vector<std::int32_t>> seen;
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s[i].norm() == 6);
        CHECK(seen.insert(s[i].e).second);
        if (i > 0) CHECK(std::lexicographical_compare(s[i - 1].e.begin(), s[i - 1].e.end(),
                                                      s[i].e.begin(), s[i].e.end()));
    }
}

TEST_CASE("orbit points") {
    RotationAction act{{0.618034}, true};
    CHECK(act.orbit_point(GroupElement{{0}}) == 0.0);
    CHECK(act.orbit_point(GroupElement{{1}}) == doctest::Approx(0.618034).epsilon(1e-15));
    CHECK(act.orbit_point(GroupElement{{2}}) == doctest::Approx(0.236068).epsilon(1e-12));
}

TEST_CASE("orbit point is a circle homomorphism") {
    RotationAction act{{(std::sqrt(5.0) - 1.0) / 2.0, std::sqrt(2.0) - 1.0}, true};
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> coord(-500, 500);
    for (int i = 0; i < 2000; ++i) {
        GroupElement g{{coord(rng), coord(rng)}}, h{{coord(rng), coord(rng)}};
        GroupElement gh{{g.e[0] + h.e[0], g.e[1] + h.e[1]}};
        double sum = wrap01(act.orbit_point(g) + act.orbit_point(h));
        CHECK(circle_dist(sum, act.orbit_point(gh)) <= 1e-12);
    }
}

TEST_CASE("small denominator screen") {
    auto hit = small_denominator(0.5, 1000000, 1e-12);
    REQUIRE(hit.has_value());
    CHECK(hit->second == 2);
    auto hit2 = small_denominator(3.0 / 7.0, 1000000, 1e-12);
    REQUIRE(hit2.has_value());
    CHECK(hit2->first == 3);
    CHECK(hit2->second == 7);
    CHECK(!small_denominator((std::sqrt(5.0) - 1.0) / 2.0, 1000000, 1e-12).has_value());
}

TEST_CASE("growth smoothing") {
    // constant sequence stays constant
    std::vector<double> ones(100, 1.0);
    auto g1 = smooth_growth(ones);
    for (double v : g1) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

    // the floor-log example: frozen value g(3) = exp(2/3 (1 + 1 + 2))
    std::vector<double> f;
    for (int n = 1; n <= 1000; ++n) f.push_back(std::exp(std::floor(std::log2(n + 1))));
    auto g = smooth_growth(f);
    CHECK(g[2] == doctest::Approx(std::exp(8.0 / 3.0)).epsilon(1e-12));

    auto lemma_checks = [](const std::vector<double>& fv, const std::vector<double>& gv) {
        for (std::size_t i = 0; i < fv.size(); ++i) {
            CHECK(gv[i] >= fv[i] * (1.0 - 1e-12));
            CHECK(gv[i] <= fv[i] * fv[i] * (1.0 + 1e-12));
            if (i > 0) {
                CHECK(gv[i] >= gv[i - 1] * (1.0 - 1e-12));  // monotone
                CHECK(gv[i] / gv[i - 1] - 1.0 <= 10.0 / double(i));
            }
        }
    };
    lemma_checks(f, g);

    std::vector<double> fn;
    for (int n = 1; n <= 1000; ++n) fn.push_back(double(n));
    lemma_checks(fn, smooth_growth(fn));

    CHECK_THROWS_AS(smooth_growth(std::vector<double>{1.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(smooth_growth(std::vector<double>{2.0, 1.5}), std::invalid_argument);
    CHECK_THROWS_AS(smooth_growth(std::vector<double>{}), std::invalid_argument);
}
