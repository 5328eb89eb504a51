// Copyright (c) 2026 the accprec authors
// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace accprec::softfloat {

enum class RoundingMode {
    NearestEven,        // round to nearest, ties to even last mantissa bit
    TruncateTowardZero  // discard bits shifted out during operand alignment
};

// Signed (1, e, m) format: 1 sign bit, e exponent bits, m stored fraction
// bits (hidden leading 1 not counted). Every bit pattern is finite: the top
// exponent field is an ordinary binade, not Inf/NaN, and field 0 holds
// subnormals. Values are carried in doubles; the supported ranges
// (exponent_bits in [2,10], mantissa_bits in [0,51]) are exactly those for
// which every representable value and every exact two-operand sum fits a
// double without rounding.
struct FloatFormat {
    int exponent_bits = 6;
    int mantissa_bits = 5;
    bool subnormals = true;  // false: flush results below min_normal to zero

    int bias() const { return (1 << (exponent_bits - 1)) - 1; }
    int min_exponent() const { return 2 - (1 << (exponent_bits - 1)); }
    int max_exponent() const { return 1 << (exponent_bits - 1); }
    double max_finite() const;
    double min_normal() const;    // 2^min_exponent
    double min_positive() const;  // smallest nonzero magnitude under switch
    bool valid() const;

    friend bool operator==(const FloatFormat&, const FloatFormat&) = default;
};

inline constexpr int kMinExponentBits = 2;
inline constexpr int kMaxExponentBits = 10;
inline constexpr int kMinMantissaBits = 0;
inline constexpr int kMaxMantissaBits = 51;

// Validated constructor; throws std::invalid_argument outside the ranges.
FloatFormat make_format(int exponent_bits, int mantissa_bits,
                        bool subnormals = true);

struct FlagCounters {
    std::uint64_t overflow = 0;   // true magnitude exceeded max_finite
    std::uint64_t underflow = 0;  // nonzero value quantized to zero
};

// Rounds x onto fmt's grid. Saturates to +-max_finite (flagging overflow)
// when |x| strictly exceeds max_finite; flags underflow when nonzero x
// quantizes to zero. Idempotent; sign-symmetric in both modes.
double quantize(double x, const FloatFormat& fmt, RoundingMode mode,
                FlagCounters* flags = nullptr);

// Exact product, then quantize to out_fmt.
double fp_mul(double a, double b, const FloatFormat& out_fmt,
              RoundingMode mode, FlagCounters* flags = nullptr);

// NearestEven: exact sum, then round. TruncateTowardZero: align the
// smaller-magnitude operand to the larger one's grid discarding shifted-out
// bits, add exactly, then truncate the result onto its own binade's grid.
double fp_add(double a, double b, const FloatFormat& acc_fmt,
              RoundingMode mode, FlagCounters* flags = nullptr);

// A value tagged with the format it is guaranteed representable in.
struct EmulatedValue {
    double value = 0.0;
    FloatFormat format;

    static EmulatedValue make(double x, const FloatFormat& fmt,
                              RoundingMode mode = RoundingMode::NearestEven) {
        return EmulatedValue{quantize(x, fmt, mode), fmt};
    }
};

enum class StepKind : unsigned char {
    Exact,    // step result equals the exact sum
    Partial,  // some low bits of the addend were lost
    Full      // the addend was entirely lost (sum unchanged, addend nonzero)
};

struct SwampingTrace {
    std::vector<StepKind> steps;
    // Exponent of the running sum minus exponent of the addend, per step;
    // kNoGap when either operand is zero.
    std::vector<int> exponent_gap;
    std::uint64_t exact_steps = 0;
    std::uint64_t partial_steps = 0;
    std::uint64_t full_steps = 0;
    std::int64_t first_full_step = -1;  // -1: no full-swamp event
    FlagCounters flags;

    static constexpr int kNoGap = INT32_MIN;
};

struct AccumResult {
    double sum = 0.0;
    SwampingTrace trace;
};

// Left-to-right fp_add over the terms, starting from zero. Each step is
// classified by outcome against the exact (double) step sum.
AccumResult accumulate(std::span<const double> terms,
                       const FloatFormat& acc_fmt, RoundingMode mode);

// Splits the terms into ceil(n / chunk_size) chunks (last may be short),
// accumulates each chunk, then accumulates the chunk partials, all in the
// same accumulator format. The trace covers intra-chunk steps first, then
// the inter-chunk steps.
AccumResult accumulate_chunked(std::span<const double> terms,
                               const FloatFormat& acc_fmt,
                               std::size_t chunk_size, RoundingMode mode);

// Every finite value of fmt, ascending, including one zero. Size is
// 2^(1+e+m) - 1 (the two signed zeros collapse).
std::vector<double> all_values(const FloatFormat& fmt);

}  // namespace accprec::softfloat
