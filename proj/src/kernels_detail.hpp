#pragma once

// Shared algorithm constants and scalar cores for the math kernels.
//
// Every backend (scalar loop, AVX2, NEON) follows the exact operation
// sequence written here, using fused multiply-adds throughout, so the
// backends produce bit-identical results lane for lane. The equivalence
// tests assert exactly that.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace denjoy::kernels::detail {

inline constexpr double kInvLn2 = 1.44269504088896340736e+00;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;   // 0x3FE62E42FEE00000
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;   // 0x3DEA39EF35793C76
inline constexpr double kRoundMagic = 6755399441055744.0;      // 1.5 * 2^52
inline constexpr double kSqrt2 = 1.41421356237309504880e+00;
inline constexpr double kPiHi = 3.14159265358979311600e+00;    // 0x400921FB54442D18
inline constexpr double kPiLo = 1.22464679914735320717e-16;    // 0x3CA1A62633145C07
inline constexpr double kMinNormal = 2.2250738585072014e-308;
inline constexpr double kExpClamp = 700.0;

// exp(r) Taylor on |r| <= ln2/2, degree 13
inline constexpr double kExpC[14] = {
    1.0,
    1.0,
    5.0000000000000000e-01,
    1.6666666666666666e-01,
    4.1666666666666664e-02,
    8.3333333333333332e-03,
    1.3888888888888889e-03,
    1.9841269841269841e-04,
    2.4801587301587302e-05,
    2.7557319223985893e-06,
    2.7557319223985888e-07,
    2.5052108385441720e-08,
    2.0876756987868100e-09,
    1.6059043836821615e-10,
};

// 2*atanh(t)/t = sum 2/(2j+1) * t^{2j}, |t| <= 3-2*sqrt(2) side of [sqrt2/2, sqrt2]
inline constexpr double kLogC[12] = {
    2.0,
    6.6666666666666663e-01,
    4.0000000000000002e-01,
    2.8571428571428570e-01,
    2.2222222222222221e-01,
    1.8181818181818182e-01,
    1.5384615384615385e-01,
    1.3333333333333333e-01,
    1.1764705882352941e-01,
    1.0526315789473684e-01,
    9.5238095238095233e-02,
    8.6956521739130432e-02,
};

// sin(z)/z on |z| <= pi/4
inline constexpr double kSinC[9] = {
    1.0,
    -1.6666666666666666e-01,
    8.3333333333333332e-03,
    -1.9841269841269841e-04,
    2.7557319223985893e-06,
    -2.5052108385441719e-08,
    1.6059043836821615e-10,
    -7.6471637318198164e-13,
    2.8114572543455206e-15,
};

// cos(z) on |z| <= pi/4
inline constexpr double kCosC[10] = {
    1.0,
    -5.0000000000000000e-01,
    4.1666666666666664e-02,
    -1.3888888888888889e-03,
    2.4801587301587302e-05,
    -2.7557319223985888e-07,
    2.0876756987868100e-09,
    -1.1470745597729725e-11,
    4.7794773323873853e-14,
    -1.5619206968586225e-16,
};

// Round-to-nearest-even without touching the FP environment.
inline double round_nearest(double x) {
    double t = x + kRoundMagic;
    return t - kRoundMagic;
}

inline double exp_core(double x) {
    if (x > kExpClamp) x = kExpClamp;
    if (x < -kExpClamp) x = -kExpClamp;
    double k = round_nearest(x * kInvLn2);
    double r = std::fma(k, -kLn2Hi, x);
    r = std::fma(k, -kLn2Lo, r);
    double p = kExpC[13];
    for (int i = 12; i >= 0; --i) p = std::fma(p, r, kExpC[i]);
    auto ik = static_cast<std::int64_t>(k);
    double scale = std::bit_cast<double>(static_cast<std::uint64_t>(ik + 1023) << 52);
    return p * scale;
}

inline double log_core(double x) {
    if (!(x > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    std::int64_t e = 0;
    if (x < kMinNormal) {
        x *= 0x1p54;
        e = -54;
    }
    std::uint64_t u = std::bit_cast<std::uint64_t>(x);
    e += static_cast<std::int64_t>((u >> 52) & 0x7FF) - 1023;
    double m = std::bit_cast<double>((u & 0x000FFFFFFFFFFFFFULL) | 0x3FF0000000000000ULL);
    if (m > kSqrt2) {
        m *= 0.5;
        e += 1;
    }
    double t = (m - 1.0) / (m + 1.0);
    double w = t * t;
    double p = kLogC[11];
    for (int i = 10; i >= 0; --i) p = std::fma(p, w, kLogC[i]);
    double ed = static_cast<double>(e);
    return std::fma(ed, kLn2Hi, std::fma(ed, kLn2Lo, t * p));
}

inline double pow_core(double x, double y) {
    if (x == 0.0) return y > 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    if (x < 0.0) return std::numeric_limits<double>::quiet_NaN();
    return exp_core(y * log_core(x));
}

inline double cospi_core(double u) {
    double n = round_nearest(2.0 * u);
    double r = std::fma(-0.5, n, u);  // exact, |r| <= 0.25
    double z = std::fma(kPiLo, r, kPiHi * r);
    double z2 = z * z;
    double c = kCosC[9];
    for (int i = 8; i >= 0; --i) c = std::fma(c, z2, kCosC[i]);
    double s = kSinC[8];
    for (int i = 7; i >= 0; --i) s = std::fma(s, z2, kSinC[i]);
    s *= z;
    switch (static_cast<std::int64_t>(n) & 3) {
        case 0: return c;
        case 1: return -s;
        case 2: return -c;
        default: return s;
    }
}

// Derivative bump kernel: (1+R) / (1 + R^2 cot^2(pi t)) on (0,1), 0 outside.
// Evaluated as (1+R)(1-C) / ((1-C) + R^2 (1+C)) with C = cos(2 pi t), which
// has no pole at the endpoints.
inline double bump_core(double R, double t) {
    if (!(t > 0.0) || !(t < 1.0)) return 0.0;
    double C = cospi_core(2.0 * t);
    double sm = 1.0 - C;
    double sp = 1.0 + C;
    return ((1.0 + R) * sm) / std::fma(R * R, sp, sm);
}

}  // namespace denjoy::kernels::detail
