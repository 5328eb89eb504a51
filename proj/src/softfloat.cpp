// Copyright (c) 2026 the accprec authors
// SPDX-License-Identifier: MIT

#include "accprec/softfloat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace accprec::softfloat {

namespace {

// Knuth TwoSum: s = fl(a+b), r = (a+b) - s exactly.
inline void two_sum(double a, double b, double& s, double& r) {
    s = a + b;
    double bv = s - a;
    double av = s - bv;
    double br = b - bv;
    double ar = a - av;
    r = ar + br;
}

// Rounds magnitude mag > 0 onto fmt's grid. rsign in {-1,0,+1} is the sign
// of an exact correction to mag smaller in magnitude than half the grid
// quantum at mag (the TwoSum residual); it disambiguates ties and exact
// grid hits. All intermediate scalings are exact for mantissa_bits <= 51.
double quantize_mag(double mag, int rsign, const FloatFormat& fmt,
                    RoundingMode mode, bool& overflow, bool& underflow) {
    const int m = fmt.mantissa_bits;
    const int emin = fmt.min_exponent();
    const int emax = fmt.max_exponent();
    const int e = std::ilogb(mag);

    if (e > emax) {
        overflow = true;
        return fmt.max_finite();
    }

    const int eg = e < emin ? emin : e;
    const double y = std::ldexp(mag, m - eg);
    const double i = std::floor(y);
    const double frac = y - i;

    if (e == emax) {
        const double top = std::ldexp(2.0, m) - 1.0;
        if (y > top || (y == top && rsign > 0)) {
            overflow = true;
            return fmt.max_finite();
        }
    }

    double iq;
    if (mode == RoundingMode::NearestEven) {
        if (frac > 0.5) {
            iq = i + 1.0;
        } else if (frac == 0.5) {
            if (rsign > 0)
                iq = i + 1.0;
            else if (rsign < 0)
                iq = i;
            else
                iq = (std::fmod(i, 2.0) == 0.0) ? i : i + 1.0;
        } else {
            iq = i;  // frac < 0.5; a negative residual cannot cross a grid
                     // point here, and on an exact hit the value stays put
        }
    } else {
        if (frac == 0.0 && rsign < 0) {
            // True value sits just below a grid point. Stepping down from
            // the bottom of a binade lands on the finer grid beneath it.
            if (y == std::ldexp(1.0, m) && e > emin)
                return std::ldexp(std::ldexp(2.0, m) - 1.0, e - 1 - m);
            iq = i - 1.0;
        } else {
            iq = i;
        }
    }

    double res = std::ldexp(iq, eg - m);
    if (!fmt.subnormals && res != 0.0 && res < fmt.min_normal()) res = 0.0;
    if (res == 0.0) underflow = true;
    return res;
}

inline void apply_flags(FlagCounters* flags, bool ovf, bool unf) {
    if (flags) {
        flags->overflow += ovf ? 1 : 0;
        flags->underflow += unf ? 1 : 0;
    }
}

}  // namespace

double FloatFormat::max_finite() const {
    return std::ldexp(2.0 - std::ldexp(1.0, -mantissa_bits), max_exponent());
}

double FloatFormat::min_normal() const { return std::ldexp(1.0, min_exponent()); }

double FloatFormat::min_positive() const {
    return subnormals && mantissa_bits > 0
               ? std::ldexp(1.0, min_exponent() - mantissa_bits)
               : min_normal();
}

bool FloatFormat::valid() const {
    return exponent_bits >= kMinExponentBits &&
           exponent_bits <= kMaxExponentBits &&
           mantissa_bits >= kMinMantissaBits &&
           mantissa_bits <= kMaxMantissaBits;
}

FloatFormat make_format(int exponent_bits, int mantissa_bits, bool subnormals) {
    FloatFormat fmt{exponent_bits, mantissa_bits, subnormals};
    if (!fmt.valid()) {
        throw std::invalid_argument(
            "unsupported float format (1," + std::to_string(exponent_bits) +
            "," + std::to_string(mantissa_bits) + "): exponent_bits must be in [" +
            std::to_string(kMinExponentBits) + "," +
            std::to_string(kMaxExponentBits) + "], mantissa_bits in [" +
            std::to_string(kMinMantissaBits) + "," +
            std::to_string(kMaxMantissaBits) + "]");
    }
    return fmt;
}

double quantize(double x, const FloatFormat& fmt, RoundingMode mode,
                FlagCounters* flags) {
    if (x == 0.0) return x;
    bool ovf = false, unf = false;
    double q = quantize_mag(std::fabs(x), 0, fmt, mode, ovf, unf);
    apply_flags(flags, ovf, unf);
    return std::copysign(q, x);
}

double fp_mul(double a, double b, const FloatFormat& out_fmt, RoundingMode mode,
              FlagCounters* flags) {
    if (a == 0.0 || b == 0.0) return a * b;
    // Split off the exponents so the exact double product of the fractions
    // never over- or underflows, whatever the operand formats.
    int ea = 0, eb = 0;
    const double fa = std::frexp(a, &ea);
    const double fb = std::frexp(b, &eb);
    const double p0 = fa * fb;
    const double r0 = std::fma(fa, fb, -p0);  // exact product residual
    const int scale = ea + eb;

    bool ovf = false, unf = false;
    const double mag = std::fabs(p0);
    const int e_true = std::ilogb(mag) + scale;
    const int emax = out_fmt.max_exponent();
    double q;
    if (e_true > emax) {
        ovf = true;
        q = out_fmt.max_finite();
    } else {
        // Rescale the fraction product into the true binade; exact because
        // e_true is within the format range, far from double's limits.
        const double mag_t = std::ldexp(mag, scale);
        int rs = 0;
        if (r0 != 0.0) rs = ((r0 > 0.0) == (p0 > 0.0)) ? +1 : -1;
        q = quantize_mag(mag_t, rs, out_fmt, mode, ovf, unf);
    }
    apply_flags(flags, ovf, unf);
    return std::copysign(q, p0);
}

double fp_add(double a, double b, const FloatFormat& acc_fmt, RoundingMode mode,
              FlagCounters* flags) {
    if (mode == RoundingMode::NearestEven) {
        double s = 0.0, r = 0.0;
        two_sum(a, b, s, r);
        if (s == 0.0) return a + b;  // exact sum of two doubles is zero
        bool ovf = false, unf = false;
        int rs = 0;
        if (r != 0.0) rs = ((r > 0.0) == (s > 0.0)) ? +1 : -1;
        const double q = quantize_mag(std::fabs(s), rs, acc_fmt, mode, ovf, unf);
        apply_flags(flags, ovf, unf);
        return std::copysign(q, s);
    }

    if (a == 0.0 || b == 0.0) {
        if (a == 0.0 && b == 0.0) return a + b;
        return quantize(a == 0.0 ? b : a, acc_fmt, mode, flags);
    }

    const int m = acc_fmt.mantissa_bits;
    const int emin = acc_fmt.min_exponent();
    double big = a, small = b;
    if (std::fabs(b) > std::fabs(a)) {
        big = b;
        small = a;
    }
    const int ebig = std::ilogb(std::fabs(big));
    const int eg = ebig < emin ? emin : ebig;
    // Truncate the smaller operand onto the larger one's grid, then add;
    // both steps are exact in the double carrier.
    const double small_t =
        std::ldexp(std::trunc(std::ldexp(small, m - eg)), eg - m);
    const double s1 = big + small_t;
    if (s1 == 0.0) return s1;
    // A carry can push the sum into the next binade; truncate it onto the
    // grid of its own binade (exact when no bits are below that grid).
    bool ovf = false, unf = false;
    const double q = quantize_mag(std::fabs(s1), 0, acc_fmt,
                                  RoundingMode::TruncateTowardZero, ovf, unf);
    apply_flags(flags, ovf, unf);
    return std::copysign(q, s1);
}

namespace {

inline void record_step(SwampingTrace& trace, double s_prev, double term,
                        double q, std::int64_t index) {
    StepKind kind;
    if (term == 0.0) {
        kind = StepKind::Exact;
    } else {
        double sd = 0.0, rr = 0.0;
        two_sum(s_prev, term, sd, rr);
        if (q == sd && rr == 0.0)
            kind = StepKind::Exact;
        else if (q == s_prev)
            kind = StepKind::Full;
        else
            kind = StepKind::Partial;
    }
    int gap = SwampingTrace::kNoGap;
    if (s_prev != 0.0 && term != 0.0)
        gap = std::ilogb(std::fabs(s_prev)) - std::ilogb(std::fabs(term));
    trace.steps.push_back(kind);
    trace.exponent_gap.push_back(gap);
    switch (kind) {
        case StepKind::Exact: ++trace.exact_steps; break;
        case StepKind::Partial: ++trace.partial_steps; break;
        case StepKind::Full:
            ++trace.full_steps;
            if (trace.first_full_step < 0) trace.first_full_step = index;
            break;
    }
}

double accumulate_into(std::span<const double> terms, const FloatFormat& fmt,
                       RoundingMode mode, double start, SwampingTrace& trace) {
    double s = start;
    for (double t : terms) {
        const double q = fp_add(s, t, fmt, mode, &trace.flags);
        record_step(trace, s, t, q,
                    static_cast<std::int64_t>(trace.steps.size()));
        s = q;
    }
    return s;
}

}  // namespace

AccumResult accumulate(std::span<const double> terms, const FloatFormat& acc_fmt,
                       RoundingMode mode) {
    AccumResult out;
    out.trace.steps.reserve(terms.size());
    out.trace.exponent_gap.reserve(terms.size());
    out.sum = accumulate_into(terms, acc_fmt, mode, 0.0, out.trace);
    return out;
}

AccumResult accumulate_chunked(std::span<const double> terms,
                               const FloatFormat& acc_fmt,
                               std::size_t chunk_size, RoundingMode mode) {
    if (chunk_size == 0)
        throw std::invalid_argument("chunk_size must be >= 1");
    AccumResult out;
    const std::size_t n = terms.size();
    if (n == 0) return out;
    const std::size_t n2 = (n + chunk_size - 1) / chunk_size;
    out.trace.steps.reserve(n + n2);
    out.trace.exponent_gap.reserve(n + n2);

    std::vector<double> partials;
    partials.reserve(n2);
    for (std::size_t c = 0; c < n; c += chunk_size) {
        const std::size_t len = std::min(chunk_size, n - c);
        partials.push_back(accumulate_into(terms.subspan(c, len), acc_fmt, mode,
                                           0.0, out.trace));
    }
    out.sum = accumulate_into(partials, acc_fmt, mode, 0.0, out.trace);
    return out;
}

std::vector<double> all_values(const FloatFormat& fmt) {
    std::vector<double> pos;
    const int m = fmt.mantissa_bits;
    if (fmt.subnormals) {
        for (std::int64_t k = 1; k < (std::int64_t{1} << m); ++k)
            pos.push_back(std::ldexp(static_cast<double>(k),
                                     fmt.min_exponent() - m));
    }
    for (int e = fmt.min_exponent(); e <= fmt.max_exponent(); ++e) {
        for (std::int64_t k = std::int64_t{1} << m;
             k < (std::int64_t{2} << m); ++k)
            pos.push_back(std::ldexp(static_cast<double>(k), e - m));
    }
    std::vector<double> all;
    all.reserve(2 * pos.size() + 1);
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) all.push_back(-*it);
    all.push_back(0.0);
    all.insert(all.end(), pos.begin(), pos.end());
    return all;
}

}  // namespace accprec::softfloat
