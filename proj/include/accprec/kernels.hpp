// Copyright (c) 2026 the accprec authors
// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <cstdint>

#include "accprec/softfloat.hpp"

namespace accprec::kernels {

// Counter-only fast paths for the emulator's hot loops. Every backend is
// bit-identical to the softfloat reference; the AVX2 variant processes four
// independent streams per instruction. Backend selection happens once per
// process: ACCPREC_KERNEL=scalar|avx2 overrides CPU detection.
enum class Backend { Scalar, Avx2 };

Backend active_backend();
const char* backend_name(Backend b);

struct StreamStats {
    double sum = 0.0;
    std::uint64_t full_swamps = 0;
};

// Accumulates four independent term streams stored interleaved
// (terms[4*i + lane] is element i of stream `lane`), left-to-right in fmt,
// chunked when chunk > 0 (intra-chunk sums first, then the chunk partials,
// same format for both levels). A full swamp is a step whose nonzero addend
// leaves the running value unchanged; both levels count.
void accumulate4(const double* terms, std::size_t n,
                 const softfloat::FloatFormat& fmt,
                 softfloat::RoundingMode mode, std::size_t chunk,
                 StreamStats out[4]);

// In-place quantization of a contiguous buffer; matches softfloat::quantize
// element-wise (flags are not reported).
void quantize_buffer(double* x, std::size_t n,
                     const softfloat::FloatFormat& fmt,
                     softfloat::RoundingMode mode);

// Single-backend entry points, used by the equivalence tests.
void accumulate4_scalar(const double* terms, std::size_t n,
                        const softfloat::FloatFormat& fmt,
                        softfloat::RoundingMode mode, std::size_t chunk,
                        StreamStats out[4]);
void quantize_buffer_scalar(double* x, std::size_t n,
                            const softfloat::FloatFormat& fmt,
                            softfloat::RoundingMode mode);
bool avx2_available();
void accumulate4_avx2(const double* terms, std::size_t n,
                      const softfloat::FloatFormat& fmt,
                      softfloat::RoundingMode mode, std::size_t chunk,
                      StreamStats out[4]);
void quantize_buffer_avx2(double* x, std::size_t n,
                          const softfloat::FloatFormat& fmt,
                          softfloat::RoundingMode mode);

}  // namespace accprec::kernels
