#pragma once

#include <cstdint>
#include <functional>
#include <limits>

namespace denjoy {

/// Outcome of an improper-integral evaluation over (0, upper].
///
/// The dyadic-shell classifier integrates shells [upper*2^-(k+1), upper*2^-k]
/// and watches the shell-sum decay. `divergent` / `classified_convergent` is
/// the classifier verdict; `converged` additionally requires the estimated
/// tail to sit below the configured tolerance. Quadrature cannot prove
/// divergence, so the verdict is an explicit heuristic; its thresholds are
/// part of this report.
struct IntegrabilityReport {
    double value = 0.0;
    bool converged = false;
    bool classified_convergent = false;
    bool divergent = false;
    double tail_estimate = 0.0;
    std::int64_t evaluations = 0;
    int shells = 0;
    double decay_exponent = std::numeric_limits<double>::quiet_NaN();
    double tol = 0.0;
};

/// Fixed 15-point Gauss-Legendre rule on [a, b].
double gauss_legendre_15(const std::function<double(double)>& f, double a, double b);

/// Adaptive Simpson with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 48);

/// Improper integral of a positive integrand over (0, upper] by geometric
/// shell refinement toward 0. `tol` is relative to the accumulated value.
IntegrabilityReport integrate_to_zero(const std::function<double(double)>& f,
                                      double upper, double tol);

}  // namespace denjoy
