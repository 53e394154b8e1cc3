#include "denjoy/yoccoz.hpp"

#include <cmath>
#include <stdexcept>

#include "denjoy/kernels.hpp"

namespace denjoy {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double YoccozMap::value(double t) const {
    if (!(t >= -1e-12 * a) || t > a * (1.0 + 1e-12))
        throw std::domain_error("transfer map argument outside [0, a]");
    if (t <= 0.0) return 0.0;
    if (t >= a) return b;
    double u = t / a;
    // equivalent to psi(b,B)^{-1} o psi(a,A) with R = B/A; atan2 keeps the
    // endpoints finite where cot blows up
    return (b / kPi) * std::atan2(std::sin(kPi * u), R * std::cos(kPi * u));
}

double YoccozMap::deriv(double t) const {
    if (!(t >= -1e-12 * a) || t > a * (1.0 + 1e-12))
        throw std::domain_error("transfer map argument outside [0, a]");
    double u = t <= 0.0 ? 0.0 : (t >= a ? 1.0 : t / a);
    return (b / (a * R)) * (1.0 - (1.0 - R) * kernels::bump1(R, u));
}

double bump(double R, double t) { return kernels::bump1(R, t); }

void bump_batch(double R, std::span<const double> t, std::span<double> out) {
    kernels::active().bump_fixed(R, t.data(), out.data(), t.size());
}

double bump_integral(double R, double u) {
    if (!(R > 0.0)) throw std::domain_error("bump kernel ratio must be positive");
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    double eps = 1.0 - R;
    double aeps = std::fabs(eps);

    auto series = [&] {
        double s = std::sin(kPi * u), c = std::cos(kPi * u);
        double base = u - std::sin(2.0 * kPi * u) / (2.0 * kPi);
        double s3c = s * s * s * c;
        return base + eps * s3c / kPi + eps * eps * (4.0 / 3.0) * s3c * c * c / kPi;
    };
    auto exact = [&] {
        YoccozMap unit{1.0, 1.0, R};
        return (u - R * unit.value(u)) / eps;
    };

    if (aeps <= 1e-6) return series();
    if (aeps >= 1e-4) return exact();
    double w = (1e-4 - aeps) / (1e-4 - 1e-6);
    return w * series() + (1.0 - w) * exact();
}

}  // namespace denjoy
