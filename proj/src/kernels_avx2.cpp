#include "denjoy/kernels.hpp"

#include "kernels_detail.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace denjoy::kernels {

namespace {

using namespace detail;

inline __m256d set1(double v) { return _mm256_set1_pd(v); }

inline __m256d round_nearest4(__m256d x) {
    const __m256d magic = set1(kRoundMagic);
    return _mm256_sub_pd(_mm256_add_pd(x, magic), magic);
}

// (double)e for int64 lanes with |e| < 2^51
inline __m256d to_double(__m256i e) {
    __m256i biased = _mm256_add_epi64(e, _mm256_set1_epi64x(0x4338000000000000LL));
    return _mm256_sub_pd(_mm256_castsi256_pd(biased), set1(kRoundMagic));
}

inline __m256d exp4(__m256d x) {
    x = _mm256_min_pd(x, set1(kExpClamp));
    x = _mm256_max_pd(x, set1(-kExpClamp));
    __m256d k = round_nearest4(_mm256_mul_pd(x, set1(kInvLn2)));
    __m256d r = _mm256_fmadd_pd(k, set1(-kLn2Hi), x);
    r = _mm256_fmadd_pd(k, set1(-kLn2Lo), r);
    __m256d p = set1(kExpC[13]);
    for (int i = 12; i >= 0; --i) p = _mm256_fmadd_pd(p, r, set1(kExpC[i]));
    __m256i k64 = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(k));
    __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(k64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

inline __m256d log4(__m256d x) {
    __m256d pos = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_GT_OQ);
    __m256d small = _mm256_cmp_pd(x, set1(kMinNormal), _CMP_LT_OQ);
    small = _mm256_and_pd(small, pos);
    x = _mm256_blendv_pd(x, _mm256_mul_pd(x, set1(0x1p54)), small);
    __m256i eoff = _mm256_and_si256(_mm256_castpd_si256(small), _mm256_set1_epi64x(-54));
    __m256i u = _mm256_castpd_si256(x);
    __m256i e = _mm256_sub_epi64(
        _mm256_and_si256(_mm256_srli_epi64(u, 52), _mm256_set1_epi64x(0x7FF)),
        _mm256_set1_epi64x(1023));
    e = _mm256_add_epi64(e, eoff);
    __m256d m = _mm256_castsi256_pd(
        _mm256_or_si256(_mm256_and_si256(u, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
                        _mm256_set1_epi64x(0x3FF0000000000000LL)));
    __m256d gt = _mm256_cmp_pd(m, set1(kSqrt2), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, set1(0.5)), gt);
    e = _mm256_add_epi64(e, _mm256_and_si256(_mm256_castpd_si256(gt), _mm256_set1_epi64x(1)));
    __m256d t = _mm256_div_pd(_mm256_sub_pd(m, set1(1.0)), _mm256_add_pd(m, set1(1.0)));
    __m256d w = _mm256_mul_pd(t, t);
    __m256d p = set1(kLogC[11]);
    for (int i = 10; i >= 0; --i) p = _mm256_fmadd_pd(p, w, set1(kLogC[i]));
    __m256d ed = to_double(e);
    __m256d res = _mm256_fmadd_pd(ed, set1(kLn2Hi),
                                  _mm256_fmadd_pd(ed, set1(kLn2Lo), _mm256_mul_pd(t, p)));
    return _mm256_blendv_pd(set1(std::numeric_limits<double>::quiet_NaN()), res, pos);
}

inline __m256d neg(__m256d x) { return _mm256_xor_pd(x, set1(-0.0)); }

inline __m256d cospi4(__m256d u) {
    __m256d n = round_nearest4(_mm256_mul_pd(u, set1(2.0)));
    __m256d r = _mm256_fmadd_pd(set1(-0.5), n, u);
    __m256d z = _mm256_fmadd_pd(set1(kPiLo), r, _mm256_mul_pd(set1(kPiHi), r));
    __m256d z2 = _mm256_mul_pd(z, z);
    __m256d c = set1(kCosC[9]);
    for (int i = 8; i >= 0; --i) c = _mm256_fmadd_pd(c, z2, set1(kCosC[i]));
    __m256d s = set1(kSinC[8]);
    for (int i = 7; i >= 0; --i) s = _mm256_fmadd_pd(s, z2, set1(kSinC[i]));
    s = _mm256_mul_pd(s, z);
    __m256i q = _mm256_and_si256(_mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n)),
                                 _mm256_set1_epi64x(3));
    __m256d res = c;
    __m256d m1 = _mm256_castsi256_pd(_mm256_cmpeq_epi64(q, _mm256_set1_epi64x(1)));
    __m256d m2 = _mm256_castsi256_pd(_mm256_cmpeq_epi64(q, _mm256_set1_epi64x(2)));
    __m256d m3 = _mm256_castsi256_pd(_mm256_cmpeq_epi64(q, _mm256_set1_epi64x(3)));
    res = _mm256_blendv_pd(res, neg(s), m1);
    res = _mm256_blendv_pd(res, neg(c), m2);
    res = _mm256_blendv_pd(res, s, m3);
    return res;
}

inline __m256d bump4(__m256d R, __m256d t) {
    __m256d inside = _mm256_and_pd(_mm256_cmp_pd(t, _mm256_setzero_pd(), _CMP_GT_OQ),
                                   _mm256_cmp_pd(t, set1(1.0), _CMP_LT_OQ));
    __m256d C = cospi4(_mm256_mul_pd(t, set1(2.0)));
    __m256d sm = _mm256_sub_pd(set1(1.0), C);
    __m256d sp = _mm256_add_pd(set1(1.0), C);
    __m256d num = _mm256_mul_pd(_mm256_add_pd(set1(1.0), R), sm);
    __m256d den = _mm256_fmadd_pd(_mm256_mul_pd(R, R), sp, sm);
    return _mm256_and_pd(_mm256_div_pd(num, den), inside);
}

void exp_batch(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, exp4(_mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = exp_core(x[i]);
}

void log_batch(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, log4(_mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = log_core(x[i]);
}

void pow_batch(const double* x, double y, double* out, std::size_t n) {
    const __m256d yv = set1(y);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xv = _mm256_loadu_pd(x + i);
        __m256d r = exp4(_mm256_mul_pd(yv, log4(xv)));
        // x == 0 with y > 0 maps to 0; other non-positive x stay NaN via log4
        __m256d zero = _mm256_cmp_pd(xv, _mm256_setzero_pd(), _CMP_EQ_OQ);
        if (y > 0.0) r = _mm256_andnot_pd(zero, r);
        _mm256_storeu_pd(out + i, r);
    }
    for (; i < n; ++i) out[i] = pow_core(x[i], y);
}

void cospi_batch(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, cospi4(_mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = cospi_core(x[i]);
}

void bump_batch(const double* R, const double* t, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, bump4(_mm256_loadu_pd(R + i), _mm256_loadu_pd(t + i)));
    for (; i < n; ++i) out[i] = bump_core(R[i], t[i]);
}

void bump_fixed_batch(double R, const double* t, double* out, std::size_t n) {
    const __m256d Rv = set1(R);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, bump4(Rv, _mm256_loadu_pd(t + i)));
    for (; i < n; ++i) out[i] = bump_core(R, t[i]);
}

}  // namespace

const Ops* avx2_ops() {
    static const Ops ops{"avx2",      exp_batch,   log_batch,
                         pow_batch,   cospi_batch, bump_batch,
                         bump_fixed_batch};
    return &ops;
}

}  // namespace denjoy::kernels

#else

namespace denjoy::kernels {
const Ops* avx2_ops() { return nullptr; }
}  // namespace denjoy::kernels

#endif
