#include <cfloat>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "psqam/kernels/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace psqam::kernels::detail {

namespace {

// split of ln 2 for Cody-Waite argument reduction
constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;

// exp over 4 lanes; inputs clamped to [-708, 709] (normal-range results)
inline __m256d exp_pd(__m256d x) {
    x = _mm256_min_pd(_mm256_max_pd(x, _mm256_set1_pd(-708.0)), _mm256_set1_pd(709.0));
    const __m256d inv_ln2 = _mm256_set1_pd(1.4426950408889634074);
    const __m128i n32 = _mm256_cvtpd_epi32(_mm256_mul_pd(x, inv_ln2));  // nearest
    const __m256d nd = _mm256_cvtepi32_pd(n32);
    __m256d r = _mm256_fnmadd_pd(nd, _mm256_set1_pd(kLn2Hi), x);
    r = _mm256_fnmadd_pd(nd, _mm256_set1_pd(kLn2Lo), r);
    // Taylor on |r| <= ln2/2; degree 12 puts truncation near 1 ulp
    static const double coeff[13] = {
        1.0,
        1.0,
        1.0 / 2,
        1.0 / 6,
        1.0 / 24,
        1.0 / 120,
        1.0 / 720,
        1.0 / 5040,
        1.0 / 40320,
        1.0 / 362880,
        1.0 / 3628800,
        1.0 / 39916800,
        1.0 / 479001600,
    };
    __m256d poly = _mm256_set1_pd(coeff[12]);
    for (int j = 11; j >= 0; --j) poly = _mm256_fmadd_pd(poly, r, _mm256_set1_pd(coeff[j]));
    // scale by 2^n through the exponent field
    __m256i n64 = _mm256_cvtepi32_epi64(n32);
    n64 = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(poly, _mm256_castsi256_pd(n64));
}

// natural log over 4 lanes; inputs clamped up to DBL_MIN (positive, normal)
inline __m256d log_pd(__m256d x) {
    x = _mm256_max_pd(x, _mm256_set1_pd(DBL_MIN));
    const __m256i bits = _mm256_castpd_si256(x);
    // IEEE exponent of each lane -> packed int32 -> double
    const __m256i shifted = _mm256_srli_epi64(bits, 52);
    const __m256i packed =
        _mm256_permutevar8x32_epi32(shifted, _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0));
    __m256d e = _mm256_cvtepi32_pd(
        _mm_sub_epi32(_mm256_castsi256_si128(packed), _mm_set1_epi32(1023)));
    // mantissa in [1, 2), folded to [sqrt(1/2), sqrt(2))
    __m256d m = _mm256_castsi256_pd(
        _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
                        _mm256_set1_epi64x(0x3FF0000000000000LL)));
    const __m256d gt = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), gt);
    e = _mm256_add_pd(e, _mm256_and_pd(gt, _mm256_set1_pd(1.0)));
    // log(m) = 2 atanh(s), s = (m-1)/(m+1), |s| <= 0.1716; odd series to s^19
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    const __m256d s2 = _mm256_mul_pd(s, s);
    __m256d poly = _mm256_set1_pd(1.0 / 19);
    for (int k = 17; k >= 3; k -= 2) poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / k));
    poly = _mm256_fmadd_pd(poly, s2, one);
    const __m256d logm = _mm256_mul_pd(_mm256_add_pd(s, s), poly);
    return _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Hi),
                           _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Lo), logm));
}

}  // namespace

void ask_llrs_avx2(const double* y, std::size_t n, const AskDemapParams& p, double* out) {
    const int levels = p.n_levels, bits = p.n_bits;
    const __m256d inv_nv = _mm256_set1_pd(p.inv_noise_var);
    const __m256d dbl_min = _mm256_set1_pd(DBL_MIN);
    const __m256d clip_hi = _mm256_set1_pd(p.clip);
    const __m256d clip_lo = _mm256_set1_pd(-p.clip);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vy = _mm256_loadu_pd(y + i);
        __m256d t[8];
        __m256d m = _mm256_set1_pd(-1e300);
        for (int l = 0; l < levels; ++l) {
            const __m256d d = _mm256_sub_pd(vy, _mm256_set1_pd(p.levels[l]));
            t[l] = _mm256_fnmadd_pd(_mm256_mul_pd(d, d), inv_nv,
                                    _mm256_set1_pd(p.log_prior[l]));
            m = _mm256_max_pd(m, t[l]);
        }
        __m256d s0[3], s1[3];
        for (int b = 0; b < bits; ++b) s0[b] = s1[b] = _mm256_setzero_pd();
        for (int l = 0; l < levels; ++l) {
            const __m256d e = exp_pd(_mm256_sub_pd(t[l], m));
            for (int b = 0; b < bits; ++b) {
                if ((p.labels[l] >> (bits - 1 - b)) & 1)
                    s1[b] = _mm256_add_pd(s1[b], e);
                else
                    s0[b] = _mm256_add_pd(s0[b], e);
            }
        }
        for (int b = 0; b < bits; ++b) {
            __m256d llr = _mm256_sub_pd(log_pd(_mm256_max_pd(s0[b], dbl_min)),
                                        log_pd(_mm256_max_pd(s1[b], dbl_min)));
            llr = _mm256_min_pd(_mm256_max_pd(llr, clip_lo), clip_hi);
            alignas(32) double lanes[4];
            _mm256_store_pd(lanes, llr);
            for (int lane = 0; lane < 4; ++lane) out[(i + lane) * bits + b] = lanes[lane];
        }
    }
    if (i < n) ask_llrs_scalar(y + i, n - i, p, out + i * bits);
}

void mi_terms_avx2(const double* yi, const double* yq, const std::uint16_t* tx, std::size_t n,
                   const MiTermParams& p, double* terms) {
    constexpr double kInvLn2 = 1.4426950408889634074;
    const int points = p.n_points;
    const __m256d inv_nv = _mm256_set1_pd(p.inv_noise_var);

    std::size_t i = 0;
    alignas(32) double tbuf[64][4];
    for (; i + 4 <= n; i += 4) {
        const __m256d vi = _mm256_loadu_pd(yi + i);
        const __m256d vq = _mm256_loadu_pd(yq + i);
        __m256d m = _mm256_set1_pd(-1e300);
        for (int j = 0; j < points; ++j) {
            const __m256d di = _mm256_sub_pd(vi, _mm256_set1_pd(p.points_i[j]));
            const __m256d dq = _mm256_sub_pd(vq, _mm256_set1_pd(p.points_q[j]));
            const __m256d d2 = _mm256_fmadd_pd(dq, dq, _mm256_mul_pd(di, di));
            const __m256d t = _mm256_fnmadd_pd(d2, inv_nv, _mm256_set1_pd(p.log_prob[j]));
            _mm256_store_pd(tbuf[j], t);
            m = _mm256_max_pd(m, t);
        }
        __m256d s = _mm256_setzero_pd();
        for (int j = 0; j < points; ++j)
            s = _mm256_add_pd(s, exp_pd(_mm256_sub_pd(_mm256_load_pd(tbuf[j]), m)));
        alignas(32) double denom[4];
        _mm256_store_pd(denom, _mm256_add_pd(m, log_pd(s)));
        for (int lane = 0; lane < 4; ++lane)
            terms[i + lane] = (tbuf[tx[i + lane]][lane] - denom[lane]) * kInvLn2;
    }
    if (i < n) mi_terms_scalar(yi + i, yq + i, tx + i, n - i, p, terms + i);
}

}  // namespace psqam::kernels::detail

#else  // no AVX2/FMA at compile time: stubs, never selected at runtime

namespace psqam::kernels::detail {

void ask_llrs_avx2(const double*, std::size_t, const AskDemapParams&, double*) {
    throw std::runtime_error("avx2 kernels not compiled in");
}
void mi_terms_avx2(const double*, const double*, const std::uint16_t*, std::size_t,
                   const MiTermParams&, double*) {
    throw std::runtime_error("avx2 kernels not compiled in");
}

}  // namespace psqam::kernels::detail

#endif
