#pragma once

#include <span>

namespace denjoy {

/// Interval transfer map phi(a, b, R): [0, a] -> [0, b], strictly increasing,
/// with phi(a, b, 1) linear. Built from psi(a, A)(t) = -cot(pi t/a)/A; the
/// derivative is (b/(aR)) * (1 - (1-R) xi(R)(t/a)) for the bump kernel xi.
struct YoccozMap {
    double a = 1.0;
    double b = 1.0;
    double R = 1.0;

    double value(double t) const;
    double deriv(double t) const;
};

/// xi(R)(t) = (1+R) / (1 + R^2 cot^2(pi t)) on (0, 1), 0 outside.
double bump(double R, double t);

/// Batch xi with fixed R through the active kernel backend.
void bump_batch(double R, std::span<const double> t, std::span<double> out);

/// Antiderivative: int_0^u xi(R), u in [0, 1]. Closed form away from R = 1,
/// a 3-term series in (1-R) near it, blended over |1-R| in [1e-6, 1e-4].
double bump_integral(double R, double u);

}  // namespace denjoy
