#include "denjoy/kernels.hpp"

#include "kernels_detail.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace denjoy::kernels {

namespace {

using namespace detail;

inline float64x2_t set1(double v) { return vdupq_n_f64(v); }

inline float64x2_t round_nearest2(float64x2_t x) {
    const float64x2_t magic = set1(kRoundMagic);
    return vsubq_f64(vaddq_f64(x, magic), magic);
}

// vfmaq_f64(a, b, c) = a + b*c
inline float64x2_t exp2v(float64x2_t x) {
    x = vminq_f64(x, set1(kExpClamp));
    x = vmaxq_f64(x, set1(-kExpClamp));
    float64x2_t k = round_nearest2(vmulq_f64(x, set1(kInvLn2)));
    float64x2_t r = vfmaq_f64(x, k, set1(-kLn2Hi));
    r = vfmaq_f64(r, k, set1(-kLn2Lo));
    float64x2_t p = set1(kExpC[13]);
    for (int i = 12; i >= 0; --i) p = vfmaq_f64(set1(kExpC[i]), p, r);
    int64x2_t k64 = vcvtq_s64_f64(k);  // k is integral, truncation exact
    int64x2_t bits = vshlq_n_s64(vaddq_s64(k64, vdupq_n_s64(1023)), 52);
    return vmulq_f64(p, vreinterpretq_f64_s64(bits));
}

inline float64x2_t log2v(float64x2_t x) {
    uint64x2_t pos = vcgtq_f64(x, vdupq_n_f64(0.0));
    uint64x2_t small = vandq_u64(vcltq_f64(x, set1(kMinNormal)), pos);
    x = vbslq_f64(small, vmulq_f64(x, set1(0x1p54)), x);
    int64x2_t eoff = vandq_s64(vreinterpretq_s64_u64(small), vdupq_n_s64(-54));
    uint64x2_t u = vreinterpretq_u64_f64(x);
    int64x2_t e = vsubq_s64(
        vreinterpretq_s64_u64(vandq_u64(vshrq_n_u64(u, 52), vdupq_n_u64(0x7FF))),
        vdupq_n_s64(1023));
    e = vaddq_s64(e, eoff);
    float64x2_t m = vreinterpretq_f64_u64(
        vorrq_u64(vandq_u64(u, vdupq_n_u64(0x000FFFFFFFFFFFFFULL)),
                  vdupq_n_u64(0x3FF0000000000000ULL)));
    uint64x2_t gt = vcgtq_f64(m, set1(kSqrt2));
    m = vbslq_f64(gt, vmulq_f64(m, set1(0.5)), m);
    e = vaddq_s64(e, vandq_s64(vreinterpretq_s64_u64(gt), vdupq_n_s64(1)));
    float64x2_t t = vdivq_f64(vsubq_f64(m, set1(1.0)), vaddq_f64(m, set1(1.0)));
    float64x2_t w = vmulq_f64(t, t);
    float64x2_t p = set1(kLogC[11]);
    for (int i = 10; i >= 0; --i) p = vfmaq_f64(set1(kLogC[i]), p, w);
    float64x2_t ed = vcvtq_f64_s64(e);
    float64x2_t res = vfmaq_f64(vfmaq_f64(vmulq_f64(t, p), ed, set1(kLn2Lo)), ed, set1(kLn2Hi));
    return vbslq_f64(pos, res, set1(std::numeric_limits<double>::quiet_NaN()));
}

inline float64x2_t cospi2(float64x2_t u) {
    float64x2_t n = round_nearest2(vmulq_f64(u, set1(2.0)));
    float64x2_t r = vfmaq_f64(u, n, set1(-0.5));
    float64x2_t z = vfmaq_f64(vmulq_f64(r, set1(kPiHi)), r, set1(kPiLo));
    float64x2_t z2 = vmulq_f64(z, z);
    float64x2_t c = set1(kCosC[9]);
    for (int i = 8; i >= 0; --i) c = vfmaq_f64(set1(kCosC[i]), c, z2);
    float64x2_t s = set1(kSinC[8]);
    for (int i = 7; i >= 0; --i) s = vfmaq_f64(set1(kSinC[i]), s, z2);
    s = vmulq_f64(s, z);
    int64x2_t q = vandq_s64(vcvtq_s64_f64(n), vdupq_n_s64(3));
    float64x2_t res = c;
    res = vbslq_f64(vceqq_s64(q, vdupq_n_s64(1)), vnegq_f64(s), res);
    res = vbslq_f64(vceqq_s64(q, vdupq_n_s64(2)), vnegq_f64(c), res);
    res = vbslq_f64(vceqq_s64(q, vdupq_n_s64(3)), s, res);
    return res;
}

inline float64x2_t bump2(float64x2_t R, float64x2_t t) {
    uint64x2_t inside = vandq_u64(vcgtq_f64(t, vdupq_n_f64(0.0)), vcltq_f64(t, set1(1.0)));
    float64x2_t C = cospi2(vmulq_f64(t, set1(2.0)));
    float64x2_t sm = vsubq_f64(set1(1.0), C);
    float64x2_t sp = vaddq_f64(set1(1.0), C);
    float64x2_t num = vmulq_f64(vaddq_f64(set1(1.0), R), sm);
    float64x2_t den = vfmaq_f64(sm, vmulq_f64(R, R), sp);
    float64x2_t res = vdivq_f64(num, den);
    return vreinterpretq_f64_u64(vandq_u64(vreinterpretq_u64_f64(res), inside));
}

void exp_batch(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out + i, exp2v(vld1q_f64(x + i)));
    for (; i < n; ++i) out[i] = exp_core(x[i]);
}

void log_batch(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out + i, log2v(vld1q_f64(x + i)));
    for (; i < n; ++i) out[i] = log_core(x[i]);
}

void pow_batch(const double* x, double y, double* out, std::size_t n) {
    const float64x2_t yv = set1(y);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t xv = vld1q_f64(x + i);
        float64x2_t r = exp2v(vmulq_f64(yv, log2v(xv)));
        if (y > 0.0) {
            uint64x2_t zero = vceqq_f64(xv, vdupq_n_f64(0.0));
            r = vreinterpretq_f64_u64(vbicq_u64(vreinterpretq_u64_f64(r), zero));
        }
        vst1q_f64(out + i, r);
    }
    for (; i < n; ++i) out[i] = pow_core(x[i], y);
}

void cospi_batch(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out + i, cospi2(vld1q_f64(x + i)));
    for (; i < n; ++i) out[i] = cospi_core(x[i]);
}

void bump_batch(const double* R, const double* t, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(out + i, bump2(vld1q_f64(R + i), vld1q_f64(t + i)));
    for (; i < n; ++i) out[i] = bump_core(R[i], t[i]);
}

void bump_fixed_batch(double R, const double* t, double* out, std::size_t n) {
    const float64x2_t Rv = set1(R);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out + i, bump2(Rv, vld1q_f64(t + i)));
    for (; i < n; ++i) out[i] = bump_core(R, t[i]);
}

}  // namespace

const Ops* neon_ops() {
    static const Ops ops{"neon",      exp_batch,   log_batch,
                         pow_batch,   cospi_batch, bump_batch,
                         bump_fixed_batch};
    return &ops;
}

}  // namespace denjoy::kernels

#else

namespace denjoy::kernels {
const Ops* neon_ops() { return nullptr; }
}  // namespace denjoy::kernels

#endif
