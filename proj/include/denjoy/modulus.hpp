#pragma once

#include <span>
#include <string>
#include <vector>

#include "denjoy/quadrature.hpp"

namespace denjoy {

enum class ModulusFamily { power, herman_log, dkn, iterated_log, inv_log, tabulated };

/// Result of a grid supremum estimate.
struct SupReport {
    double value = 0.0;
    double argmax = 0.0;
    bool infinite = false;  // values grow without bound toward the small end
    int samples = 0;
};

/// A concave modulus of continuity alpha on (0, domain_cap], alpha(0) = 0.
///
/// Catalog families are evaluated by their closed forms on the whole queried
/// domain. The log families stop being increasing-and-concave above a knee
/// point (`monotone_cap`); all modulus invariants hold on (0, monotone_cap]
/// and that is where schemes, inverses and the integrability integrals
/// evaluate them. Values above the knee are raw closed-form values.
class Modulus {
public:
    /// x^tau, 0 < tau <= 1.
    static Modulus power(double tau, double cap = 1.0);
    /// x * log(1/x)^(1+eps), eps >= 0.
    static Modulus herman_log(double eps, double cap = 1.0);
    /// (x log(1/x))^(1/d) * log(1/x)^eps.
    static Modulus dkn(int d, double eps, double cap = 1.0);
    /// x * log(1/x) * loglog(1/x) * ... (depth factors, last raised to 1+eps).
    static Modulus iterated_log(int depth, double eps = 0.0);
    /// 1 / log(1/x); the standard example with unbounded alpha/(t alpha').
    static Modulus inv_log();
    /// Monotone concave piecewise-linear table; rejects violating tables.
    static Modulus tabulated(std::vector<double> xs, std::vector<double> ys);

    /// Literal syntax, e.g. "power:tau=0.5", "dkn:d=2,eps=0.1", "inv_log".
    static Modulus parse(const std::string& literal);
    std::string literal() const;

    ModulusFamily family() const { return family_; }
    double domain_cap() const { return cap_; }
    double monotone_cap() const { return knee_; }

    double value(double x) const;
    /// Unchecked batch evaluation; callers keep x inside (0, domain_cap)
    /// (log families vanish at 1 and the vector path does not guard it).
    void value_batch(std::span<const double> x, std::span<double> out) const;
    /// Raw d/dx of the closed form (central differences for tables). May be
    /// <= 0 at or beyond the knee of a log family.
    double derivative(double x) const;
    /// x with alpha(x) = t, for t in [0, value(monotone_cap)].
    double inverse(double t) const;
    void inverse_batch(std::span<const double> t, std::span<double> out) const;
    /// Largest representable inverse argument, alpha(monotone_cap).
    double inverse_cap() const;

    bool has_closed_inverse() const { return family_ == ModulusFamily::power; }

private:
    Modulus() = default;
    void compute_knee();

    ModulusFamily family_ = ModulusFamily::power;
    double tau_ = 1.0;
    double eps_ = 0.0;
    int d_ = 1;
    int depth_ = 1;
    double cap_ = 1.0;
    double knee_ = 1.0;
    std::string table_path_;
    std::vector<double> xs_, ys_;
};

/// integral over (0, U] of 1/alpha(x)^d, U = min(domain_cap, monotone_cap).
IntegrabilityReport integrate_reciprocal_power(const Modulus& alpha, int d, double tol);

/// integral over (0, T] of alpha^{-1}(t)/t^{d+1}, T = min(1, inverse_cap).
IntegrabilityReport integrate_inverse_ratio(const Modulus& alpha, int d, double tol);

/// sup over y of alpha(y^{d+1}/alpha(y)^d) / y, estimated on a refined
/// log-spaced grid. Requires d >= 2.
SupReport sup_composite_ratio(const Modulus& alpha, int d);

/// sup over t of alpha(t)/(t alpha'(t)); always >= 1 for a concave modulus.
SupReport sup_slope_ratio(const Modulus& alpha);

}  // namespace denjoy
