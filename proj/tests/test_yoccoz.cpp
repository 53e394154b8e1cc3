#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "denjoy/quadrature.hpp"
#include "denjoy/yoccoz.hpp"

using namespace denjoy;

TEST_CASE("bump kernel integrates to one") {
    for (double R : {0.1, 0.5, 1.0, 2.0, 10.0}) {
        double got = adaptive_simpson([R](double t) { return bump(R, t); }, 0.0, 1.0, 1e-12);
        CHECK(got == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("transfer map endpoints and midpoint") {
    YoccozMap phi{0.4, 0.9, 3.0};
    CHECK(phi.value(0.0) == 0.0);
    CHECK(phi.value(0.4) == 0.9);
    CHECK(phi.value(0.2) == doctest::Approx(0.45).epsilon(1e-14));  // cot vanishes
    CHECK_THROWS_AS(phi.value(-0.1), std::domain_error);
    CHECK_THROWS_AS(phi.value(0.5), std::domain_error);
    // R = 1 is the linear map t b / a
    YoccozMap lin{0.4, 0.9, 1.0};
    for (double t : {0.05, 0.13, 0.31, 0.39})
        CHECK(lin.value(t) == doctest::Approx(t * 0.9 / 0.4).epsilon(1e-13));
}

TEST_CASE("transfer map is strictly increasing") {
    YoccozMap phi{1.0, 0.3, 7.5};
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
        double v = phi.value(i / 1000.0);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("equivariance under composition") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int trip = 0; trip < 20; ++trip) {
        double a = 0.05 + u(rng), b = 0.05 + u(rng), c = 0.05 + u(rng);
        double R = std::exp(std::log(0.05) + u(rng) * std::log(400.0));
        double S = std::exp(std::log(0.05) + u(rng) * std::log(400.0));
        YoccozMap f1{a, b, R}, f2{b, c, S}, f3{a, c, R * S};
        for (int i = 0; i < 1000; ++i) {
            double t = a * u(rng);
            worst = std::max(worst, std::fabs(f2.value(f1.value(t)) - f3.value(t)));
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("derivative closed form") {
    YoccozMap phi{0.7, 0.2, 4.0};
    // endpoint value b/(aR)
    CHECK(phi.deriv(0.0) == doctest::Approx(0.2 / (0.7 * 4.0)).epsilon(1e-14));
    CHECK(phi.deriv(0.7) == doctest::Approx(0.2 / (0.7 * 4.0)).epsilon(1e-14));
    // midpoint value bR/a
    CHECK(phi.deriv(0.35) == doctest::Approx(0.2 * 4.0 / 0.7).epsilon(1e-13));
    // R = 1 makes the derivative constant b/a
    YoccozMap lin{0.7, 0.2, 1.0};
    for (double t : {0.0, 0.1, 0.35, 0.69, 0.7})
        CHECK(lin.deriv(t) == doctest::Approx(0.2 / 0.7).epsilon(1e-14));

    // finite-difference oracle
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        double a = 0.1 + u(rng), b = 0.1 + u(rng);
        double R = std::exp(std::log(0.1) + u(rng) * std::log(100.0));
        YoccozMap m{a, b, R};
        double t = a * (0.02 + 0.96 * u(rng));
        double h = 1e-5 * a;
        double fd = (m.value(t + h) - m.value(t - h)) / (2.0 * h);
        CHECK(std::fabs(fd - m.deriv(t)) <= 1e-6 * m.deriv(t));
    }
}

TEST_CASE("bump batch matches pointwise values") {
    std::vector<double> ts, out;
    for (int i = 0; i <= 257; ++i) ts.push_back(i / 257.0);
    out.resize(ts.size());
    bump_batch(1.7, ts, out);
    for (std::size_t i = 0; i < ts.size(); ++i) CHECK(out[i] == bump(1.7, ts[i]));
}

TEST_CASE("bump antiderivative") {
    for (double R : {0.1, 0.5, 1.0, 1.0 - 1e-5, 1.0 + 1e-5, 1.0 - 3e-7, 1.0 + 3e-7, 2.0, 10.0}) {
        CHECK(bump_integral(R, 0.0) == 0.0);
        CHECK(bump_integral(R, 1.0) == 1.0);
        for (double uu : {0.2, 0.5, 0.9}) {
            double want = adaptive_simpson([R](double t) { return bump(R, t); }, 0.0, uu, 1e-12);
            CHECK(bump_integral(R, uu) == doctest::Approx(want).epsilon(1e-9));
        }
    }
    // R = 1 closed form: u - sin(2 pi u)/(2 pi), symmetric at 1/2
    CHECK(bump_integral(1.0, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(bump_integral(-1.0, 0.5), std::domain_error);
}
