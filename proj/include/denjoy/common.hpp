#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace denjoy {

/// Fractional part mapped to [0, 1).
inline double wrap01(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f -= 1.0;  // guards x = -1e-17 style round-ups
    if (f < 0.0) f += 1.0;
    return f;
}

/// Distance on the circle R/Z.
inline double circle_dist(double x, double y) {
    double d = std::fabs(wrap01(x) - wrap01(y));
    return std::min(d, 1.0 - d);
}

/// Neumaier compensated accumulator. Sums of 1e6+ interval lengths must not
/// drift; positions derived from them feed binary searches.
class KahanSum {
public:
    void add(double v) {
        double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Worker count taken from DENJOY_THREADS (default 1).
unsigned thread_count();

/// Deterministic parallel map: out[i] = fn(i) for i in [0, n). The work is
/// chunked over threads but every index writes its own slot, so results do
/// not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace denjoy
