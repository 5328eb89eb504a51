// Copyright (c) 2026 the accprec authors
// SPDX-License-Identifier: MIT

// AVX2 backend: four independent emulated accumulators per instruction
// stream. Every arithmetic step below is exact in double (power-of-two
// scalings, floor/trunc, TwoSum), so results are bit-identical to the
// scalar reference; the equivalence tests assert exactly that.

#include "accprec/kernels.hpp"

#include <cstdlib>

#if defined(__AVX2__) && defined(__x86_64__)
#include <immintrin.h>
#endif

namespace accprec::kernels {

using softfloat::FloatFormat;
using softfloat::RoundingMode;

bool avx2_available() {
#if defined(__x86_64__)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

#if defined(__AVX2__) && defined(__x86_64__)

namespace {

struct VecCtx {
    __m256d sign_mask;
    __m256d abs_mask;
    __m256d half;
    __m256d one;
    __m256d zero;
    __m256d top;         // 2^(m+1) - 1
    __m256d max_finite;
    __m256d min_normal;
    __m256i emin_i;
    __m256i emax_i;
    __m256i m_i;
    __m256i bias_i;      // 1023
    bool flush_subnormals;

    explicit VecCtx(const FloatFormat& fmt) {
        sign_mask = _mm256_set1_pd(-0.0);
        abs_mask = _mm256_castsi256_pd(
            _mm256_set1_epi64x(0x7fffffffffffffffLL));
        half = _mm256_set1_pd(0.5);
        one = _mm256_set1_pd(1.0);
        zero = _mm256_setzero_pd();
        const int m = fmt.mantissa_bits;
        top = _mm256_set1_pd(static_cast<double>((std::int64_t{2} << m) - 1));
        max_finite = _mm256_set1_pd(fmt.max_finite());
        min_normal = _mm256_set1_pd(fmt.min_normal());
        emin_i = _mm256_set1_epi64x(fmt.min_exponent());
        emax_i = _mm256_set1_epi64x(fmt.max_exponent());
        m_i = _mm256_set1_epi64x(m);
        bias_i = _mm256_set1_epi64x(1023);
        flush_subnormals = !fmt.subnormals;
    }

    __m256d vabs(__m256d x) const { return _mm256_and_pd(x, abs_mask); }
    __m256d vsign(__m256d x) const { return _mm256_and_pd(x, sign_mask); }

    // Unbiased exponent of a positive normal double (or -1023 for +0).
    __m256i exponent(__m256d xabs) const {
        __m256i bits = _mm256_castpd_si256(xabs);
        return _mm256_sub_epi64(_mm256_srli_epi64(bits, 52), bias_i);
    }

    __m256i clamp_emin(__m256i e) const {
        __m256i below = _mm256_cmpgt_epi64(emin_i, e);
        return _mm256_blendv_epi8(e, emin_i, below);
    }

    // 2^k for per-lane int64 exponents within double's normal range.
    static __m256d pow2(__m256i k) {
        __m256i bits = _mm256_slli_epi64(
            _mm256_add_epi64(k, _mm256_set1_epi64x(1023)), 52);
        return _mm256_castsi256_pd(bits);
    }

    __m256d flush(__m256d mag) const {
        if (!flush_subnormals) return mag;
        __m256d tiny = _mm256_and_pd(
            _mm256_cmp_pd(mag, min_normal, _CMP_LT_OQ),
            _mm256_cmp_pd(mag, zero, _CMP_NEQ_OQ));
        return _mm256_andnot_pd(tiny, mag);
    }

    // Round-to-nearest-even of |s| with exact residual r (relative to the
    // signed s); mirrors the scalar quantize_mag NearestEven branch.
    __m256d quantize_ne_mag(__m256d sabs, __m256d r_rel) const {
        __m256i e = exponent(sabs);
        __m256i eg = clamp_emin(e);
        __m256d y = _mm256_mul_pd(sabs, pow2(_mm256_sub_epi64(m_i, eg)));
        __m256d i0 = _mm256_floor_pd(y);
        __m256d frac = _mm256_sub_pd(y, i0);

        __m256d r_pos = _mm256_cmp_pd(r_rel, zero, _CMP_GT_OQ);
        __m256d r_neg = _mm256_cmp_pd(r_rel, zero, _CMP_LT_OQ);
        __m256d gt_half = _mm256_cmp_pd(frac, half, _CMP_GT_OQ);
        __m256d eq_half = _mm256_cmp_pd(frac, half, _CMP_EQ_OQ);
        __m256d i0_half = _mm256_mul_pd(i0, half);
        __m256d odd = _mm256_cmp_pd(_mm256_floor_pd(i0_half), i0_half,
                                    _CMP_NEQ_OQ);
        __m256d tie_up = _mm256_andnot_pd(r_neg, _mm256_or_pd(r_pos, odd));
        __m256d up = _mm256_or_pd(gt_half, _mm256_and_pd(eq_half, tie_up));
        __m256d iq = _mm256_add_pd(i0, _mm256_and_pd(up, one));
        __m256d mag = _mm256_mul_pd(iq, pow2(_mm256_sub_epi64(eg, m_i)));

        __m256d sat_top = _mm256_or_pd(
            _mm256_cmp_pd(y, top, _CMP_GT_OQ),
            _mm256_and_pd(_mm256_cmp_pd(y, top, _CMP_EQ_OQ), r_pos));
        __m256d e_gt = _mm256_castsi256_pd(_mm256_cmpgt_epi64(e, emax_i));
        __m256d e_eq = _mm256_castsi256_pd(_mm256_cmpeq_epi64(e, emax_i));
        __m256d sat = _mm256_or_pd(e_gt, _mm256_and_pd(e_eq, sat_top));
        mag = _mm256_blendv_pd(mag, max_finite, sat);
        return flush(mag);
    }

    // Truncate-toward-zero of |x| onto the grid; mirrors the scalar
    // quantize_mag Truncate branch with a zero residual.
    __m256d quantize_rtz_mag(__m256d xabs) const {
        __m256i e = exponent(xabs);
        __m256i eg = clamp_emin(e);
        __m256d y = _mm256_mul_pd(xabs, pow2(_mm256_sub_epi64(m_i, eg)));
        __m256d i0 = _mm256_floor_pd(y);
        __m256d mag = _mm256_mul_pd(i0, pow2(_mm256_sub_epi64(eg, m_i)));
        __m256d sat = _mm256_or_pd(
            _mm256_castsi256_pd(_mm256_cmpgt_epi64(e, emax_i)),
            _mm256_and_pd(_mm256_castsi256_pd(_mm256_cmpeq_epi64(e, emax_i)),
                          _mm256_cmp_pd(y, top, _CMP_GT_OQ)));
        mag = _mm256_blendv_pd(mag, max_finite, sat);
        return flush(mag);
    }

    __m256d add_ne(__m256d a, __m256d b) const {
        __m256d s = _mm256_add_pd(a, b);
        __m256d bv = _mm256_sub_pd(s, a);
        __m256d av = _mm256_sub_pd(s, bv);
        __m256d br = _mm256_sub_pd(b, bv);
        __m256d ar = _mm256_sub_pd(a, av);
        __m256d r = _mm256_add_pd(ar, br);
        __m256d sgn = vsign(s);
        __m256d mag = quantize_ne_mag(vabs(s), _mm256_xor_pd(r, sgn));
        return _mm256_or_pd(mag, sgn);
    }

    __m256d add_rtz(__m256d a, __m256d b) const {
        __m256d aabs = vabs(a);
        __m256d babs = vabs(b);
        __m256d b_bigger = _mm256_cmp_pd(babs, aabs, _CMP_GT_OQ);
        __m256d big = _mm256_blendv_pd(a, b, b_bigger);
        __m256d small = _mm256_blendv_pd(b, a, b_bigger);
        __m256d bigabs = _mm256_blendv_pd(aabs, babs, b_bigger);

        __m256i eg = clamp_emin(exponent(bigabs));
        __m256d scaled = _mm256_mul_pd(small, pow2(_mm256_sub_epi64(m_i, eg)));
        __m256d tsm = _mm256_round_pd(scaled,
                                      _MM_FROUND_TO_ZERO | _MM_FROUND_NO_EXC);
        __m256d small_t = _mm256_mul_pd(tsm, pow2(_mm256_sub_epi64(eg, m_i)));
        __m256d s1 = _mm256_add_pd(big, small_t);
        __m256d sgn = vsign(s1);
        __m256d mag = quantize_rtz_mag(vabs(s1));
        return _mm256_or_pd(mag, sgn);
    }

    __m256d add(__m256d acc, __m256d t, RoundingMode mode) const {
        return mode == RoundingMode::NearestEven ? add_ne(acc, t)
                                                 : add_rtz(acc, t);
    }
};

}  // namespace

void accumulate4_avx2(const double* terms, std::size_t n,
                      const FloatFormat& fmt, RoundingMode mode,
                      std::size_t chunk, StreamStats out[4]) {
    const VecCtx ctx(fmt);
    __m256d intra = ctx.zero;
    __m256d inter = ctx.zero;
    __m256i swamps = _mm256_setzero_si256();
    const std::size_t stride = chunk == 0 ? n : chunk;
    std::size_t in_chunk = 0;

    for (std::size_t i = 0; i < n; ++i) {
        __m256d t = _mm256_loadu_pd(terms + 4 * i);
        __m256d q = ctx.add(intra, t, mode);
        __m256d full = _mm256_and_pd(
            _mm256_cmp_pd(q, intra, _CMP_EQ_OQ),
            _mm256_cmp_pd(t, ctx.zero, _CMP_NEQ_OQ));
        swamps = _mm256_sub_epi64(swamps, _mm256_castpd_si256(full));
        intra = q;
        if (++in_chunk == stride) {
            __m256d q2 = ctx.add(inter, intra, mode);
            __m256d full2 = _mm256_and_pd(
                _mm256_cmp_pd(q2, inter, _CMP_EQ_OQ),
                _mm256_cmp_pd(intra, ctx.zero, _CMP_NEQ_OQ));
            swamps = _mm256_sub_epi64(swamps, _mm256_castpd_si256(full2));
            inter = q2;
            intra = ctx.zero;
            in_chunk = 0;
        }
    }
    if (in_chunk != 0) {
        __m256d q2 = ctx.add(inter, intra, mode);
        __m256d full2 = _mm256_and_pd(
            _mm256_cmp_pd(q2, inter, _CMP_EQ_OQ),
            _mm256_cmp_pd(intra, ctx.zero, _CMP_NEQ_OQ));
        swamps = _mm256_sub_epi64(swamps, _mm256_castpd_si256(full2));
        inter = q2;
    }

    alignas(32) double sums[4];
    alignas(32) std::int64_t counts[4];
    _mm256_storeu_pd(sums, inter);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(counts), swamps);
    for (int lane = 0; lane < 4; ++lane) {
        out[lane].sum = sums[lane];
        out[lane].full_swamps = static_cast<std::uint64_t>(counts[lane]);
    }
}

void quantize_buffer_avx2(double* x, std::size_t n, const FloatFormat& fmt,
                          RoundingMode mode) {
    const VecCtx ctx(fmt);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        __m256d sgn = ctx.vsign(v);
        __m256d mag = mode == RoundingMode::NearestEven
                          ? ctx.quantize_ne_mag(ctx.vabs(v), ctx.zero)
                          : ctx.quantize_rtz_mag(ctx.vabs(v));
        _mm256_storeu_pd(x + i, _mm256_or_pd(mag, sgn));
    }
    for (; i < n; ++i) x[i] = softfloat::quantize(x[i], fmt, mode);
}

#else  // no AVX2 at compile time

void accumulate4_avx2(const double* terms, std::size_t n,
                      const FloatFormat& fmt, RoundingMode mode,
                      std::size_t chunk, StreamStats out[4]) {
    accumulate4_scalar(terms, n, fmt, mode, chunk, out);
}

void quantize_buffer_avx2(double* x, std::size_t n, const FloatFormat& fmt,
                          RoundingMode mode) {
    quantize_buffer_scalar(x, n, fmt, mode);
}

#endif

}  // namespace accprec::kernels
