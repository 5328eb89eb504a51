// Copyright (c) 2026 the accprec authors
// SPDX-License-Identifier: MIT
#include "oracle_mpfr.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace oracle {
namespace {

// S_t = sum_{j=1}^{t} 2^j (2^j - 1) (2^{j+1} - 1), exact for t <= 20.
std::uint64_t cubic_partial_sum(int t) {
    std::uint64_t s = 0;
    for (int j = 1; j <= t; ++j) {
        std::uint64_t p = std::uint64_t{1} << j;
        s += p * (p - 1) * (2 * p - 1);
    }
    return s;
}

// Largest i with 2^m_acc / sqrt(2 i) >= 12. Since erfc(y) < exp(-y^2), every
// skipped term is below 2^-207, and the whole skipped head contributes less
// than n^2 * 2^-207 to any retained sum: invisible at these tolerances.
std::uint64_t negligible_head(int m_acc, std::uint64_t n) {
    unsigned __int128 head = (static_cast<unsigned __int128>(1)
                              << (2 * m_acc)) /
                             288;
    if (head > n) return n;
    return static_cast<std::uint64_t>(head);
}

// y = 2^e2 / sqrt(2 i), then rop = erf(y).
void erf_scaled(mpfr_t rop, int e2, std::uint64_t i, mpfr_t scratch) {
    mpfr_sqrt_ui(scratch, static_cast<unsigned long>(2 * i), MPFR_RNDN);
    mpfr_set_ui_2exp(rop, 1, e2, MPFR_RNDN);
    mpfr_div(rop, rop, scratch, MPFR_RNDN);
    mpfr_erf(rop, rop, MPFR_RNDN);
}

}  // namespace

double vrr_reference(int m_acc, int m_p, std::uint64_t n, int precision_bits) {
    if (m_p < 1 || m_p > 20)
        throw std::invalid_argument("oracle supports m_p in [1, 20]");
    if (n <= 1) return 1.0;

    mpfr_t num, k, alpha, ajr, e, eprev, q, t, sq2n;
    mpfr_inits2(precision_bits, num, k, alpha, ajr, e, eprev, q, t, sq2n,
                static_cast<mpfr_ptr>(nullptr));

    // alpha = 2^(m_acc - 3 m_p) / 3 * S_{m_p}
    mpfr_set_ui(alpha, static_cast<unsigned long>(cubic_partial_sum(m_p)),
                MPFR_RNDN);
    mpfr_mul_2si(alpha, alpha, m_acc - 3 * m_p, MPFR_RNDN);
    mpfr_div_ui(alpha, alpha, 3, MPFR_RNDN);

    mpfr_set_ui(num, 0, MPFR_RNDN);
    mpfr_set_ui(k, 0, MPFR_RNDN);

    // sum over i = 2 .. n-1 of (i - alpha)+ q_i [i > alpha], with
    // q_i = erfc(2^m_acc / sqrt(2 i)) * erf(2^m_acc / sqrt(2 (i-1))).
    // erfc is formed as 1 - erf: the absolute error per term is below
    // 2^(1-precision), and both q_i factors are at most 1.
    std::uint64_t i0 = std::max<std::uint64_t>(2, negligible_head(m_acc, n) + 1);
    if (i0 <= n - 1) {
        erf_scaled(eprev, m_acc, i0 - 1, t);
        for (std::uint64_t i = i0; i <= n - 1; ++i) {
            erf_scaled(e, m_acc, i, t);
            mpfr_ui_sub(q, 1, e, MPFR_RNDN);
            mpfr_mul(q, q, eprev, MPFR_RNDN);
            if (mpfr_cmp_ui(alpha, static_cast<unsigned long>(i)) < 0) {
                mpfr_add(k, k, q, MPFR_RNDN);
                mpfr_ui_sub(t, static_cast<unsigned long>(i), alpha,
                            MPFR_RNDN);
                mpfr_mul(t, t, q, MPFR_RNDN);
                mpfr_add(num, num, t, MPFR_RNDN);
            }
            mpfr_swap(e, eprev);
        }
    }

    mpfr_sqrt_ui(sq2n, static_cast<unsigned long>(2 * n), MPFR_RNDN);

    // boundary terms j_r = 2 .. m_p:
    // q'_jr = 2^(m_acc-m_p+jr) erfc(2^(m_acc-m_p+jr-1)/sqrt(2n))
    //                          erf(2^(m_acc-m_p+jr)/sqrt(2n)),
    // counted only when n > alpha_jr, with weight (n - alpha_jr).
    for (int jr = 2; jr <= m_p; ++jr) {
        mpfr_set_ui(ajr,
                    static_cast<unsigned long>(cubic_partial_sum(jr - 1)),
                    MPFR_RNDN);
        mpfr_mul_2si(ajr, ajr, m_acc - 3 * m_p, MPFR_RNDN);
        mpfr_div_ui(ajr, ajr, 3, MPFR_RNDN);
        if (mpfr_cmp_ui(ajr, static_cast<unsigned long>(n)) >= 0) continue;
        mpfr_set_ui_2exp(t, 1, m_acc - m_p + jr - 1, MPFR_RNDN);
        mpfr_div(t, t, sq2n, MPFR_RNDN);
        mpfr_erfc(q, t, MPFR_RNDN);
        mpfr_set_ui_2exp(t, 1, m_acc - m_p + jr, MPFR_RNDN);
        mpfr_div(t, t, sq2n, MPFR_RNDN);
        mpfr_erf(e, t, MPFR_RNDN);
        mpfr_mul(q, q, e, MPFR_RNDN);
        mpfr_mul_2si(q, q, m_acc - m_p + jr, MPFR_RNDN);
        mpfr_add(k, k, q, MPFR_RNDN);
        mpfr_ui_sub(t, static_cast<unsigned long>(n), ajr, MPFR_RNDN);
        mpfr_mul(t, t, q, MPFR_RNDN);
        mpfr_add(num, num, t, MPFR_RNDN);
    }

    // k3 = erf(2^(m_acc-m_p+1)/sqrt(2n)); numerator gains n * k3.
    mpfr_set_ui_2exp(t, 1, m_acc - m_p + 1, MPFR_RNDN);
    mpfr_div(t, t, sq2n, MPFR_RNDN);
    mpfr_erf(e, t, MPFR_RNDN);
    mpfr_add(k, k, e, MPFR_RNDN);
    mpfr_mul_ui(t, e, static_cast<unsigned long>(n), MPFR_RNDN);
    mpfr_add(num, num, t, MPFR_RNDN);

    mpfr_mul_ui(k, k, static_cast<unsigned long>(n), MPFR_RNDN);
    mpfr_div(num, num, k, MPFR_RNDN);
    double out = mpfr_get_d(num, MPFR_RNDN);

    mpfr_clears(num, k, alpha, ajr, e, eprev, q, t, sq2n,
                static_cast<mpfr_ptr>(nullptr));
    return out;
}

double vrr_full_swamping_reference(int m_acc, std::uint64_t n,
                                   int precision_bits) {
    if (n <= 2) return 1.0;

    mpfr_t mass, weighted, e, eprev, q, t;
    mpfr_inits2(precision_bits, mass, weighted, e, eprev, q, t,
                static_cast<mpfr_ptr>(nullptr));
    mpfr_set_ui(mass, 0, MPFR_RNDN);
    mpfr_set_ui(weighted, 0, MPFR_RNDN);

    std::uint64_t i0 = std::max<std::uint64_t>(2, negligible_head(m_acc, n) + 1);
    if (i0 <= n - 1) {
        erf_scaled(eprev, m_acc, i0 - 1, t);
        for (std::uint64_t i = i0; i <= n - 1; ++i) {
            erf_scaled(e, m_acc, i, t);
            mpfr_ui_sub(q, 1, e, MPFR_RNDN);
            mpfr_mul(q, q, eprev, MPFR_RNDN);
            mpfr_add(mass, mass, q, MPFR_RNDN);
            mpfr_mul_ui(q, q, static_cast<unsigned long>(i), MPFR_RNDN);
            mpfr_add(weighted, weighted, q, MPFR_RNDN);
            mpfr_swap(e, eprev);
        }
    }

    // tail term erf(2^m_acc / sqrt(2 n)) enters numerator with weight n and
    // the normalizer with weight 1
    erf_scaled(e, m_acc, n, t);
    mpfr_mul_ui(t, e, static_cast<unsigned long>(n), MPFR_RNDN);
    mpfr_add(weighted, weighted, t, MPFR_RNDN);
    mpfr_add(mass, mass, e, MPFR_RNDN);
    mpfr_mul_ui(mass, mass, static_cast<unsigned long>(n), MPFR_RNDN);
    mpfr_div(weighted, weighted, mass, MPFR_RNDN);
    double out = mpfr_get_d(weighted, MPFR_RNDN);

    mpfr_clears(mass, weighted, e, eprev, q, t,
                static_cast<mpfr_ptr>(nullptr));
    return out;
}

double upper_tail_reference(double x) {
    mpfr_t t, s;
    mpfr_inits2(192, t, s, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_d(t, x, MPFR_RNDN);
    mpfr_sqrt_ui(s, 2, MPFR_RNDN);
    mpfr_div(t, t, s, MPFR_RNDN);
    mpfr_erfc(t, t, MPFR_RNDN);
    mpfr_div_ui(t, t, 2, MPFR_RNDN);
    double out = mpfr_get_d(t, MPFR_RNDN);
    mpfr_clears(t, s, static_cast<mpfr_ptr>(nullptr));
    return out;
}

}  // namespace oracle
