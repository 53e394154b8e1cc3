#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace denjoy {

/// An element of Z^d written in the standard generators.
struct GroupElement {
    std::vector<std::int32_t> e;

    int norm() const {  // word length = L1 norm
        long n = 0;
        for (auto v : e) n += v < 0 ? -long(v) : long(v);
        return static_cast<int>(n);
    }
    bool operator==(const GroupElement&) const = default;
};

int word_length(const GroupElement& g);

/// Number of lattice points of Z^d with L1 norm exactly n.
std::int64_t spherical_growth(int d, int n);

/// The sphere of radius n, in lexicographic order of exponent vectors.
std::vector<GroupElement> enumerate_sphere(int d, int n);

/// Allocation-free sphere walk in the same order.
void for_each_sphere(int d, int n, const std::function<void(std::span<const std::int32_t>)>& fn);

/// Rotation action of Z^d on the circle: generator i rotates by theta[i].
struct RotationAction {
    std::vector<double> theta;
    // Rational independence of (1, theta_1, ..., theta_d) cannot be certified
    // in floating point; this records whether a small-denominator screen passed.
    bool assumed_independent = true;

    int rank() const { return static_cast<int>(theta.size()); }
    /// <sum_i g_i theta_i> in [0, 1), compensated.
    double orbit_point(std::span<const std::int32_t> g) const;
    double orbit_point(const GroupElement& g) const { return orbit_point(std::span(g.e)); }
};

/// Best rational approximation p/q with q <= qmax and |theta - p/q| < tol,
/// if one exists (continued fractions).
std::optional<std::pair<std::int64_t, std::int64_t>> small_denominator(double theta,
                                                                       std::int64_t qmax,
                                                                       double tol);

/// Growth smoothing: given f(1..n) monotone with f >= 1, returns g(1..n) with
/// g(k) = exp(2/k * sum_{i<=k} log f(i)); then f <= g <= f^2, g is monotone
/// and g(k+1)/g(k) -> 1.
std::vector<double> smooth_growth(std::span<const double> f);

}  // namespace denjoy
