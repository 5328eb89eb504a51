// Copyright (c) 2026 the accprec authors
// SPDX-License-Identifier: MIT

#include "accprec/kernels.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace accprec::kernels {

using softfloat::FloatFormat;
using softfloat::RoundingMode;

void accumulate4_scalar(const double* terms, std::size_t n,
                        const FloatFormat& fmt, RoundingMode mode,
                        std::size_t chunk, StreamStats out[4]) {
    for (int lane = 0; lane < 4; ++lane) out[lane] = StreamStats{};
    for (int lane = 0; lane < 4; ++lane) {
        double inter = 0.0;
        double intra = 0.0;
        std::uint64_t swamps = 0;
        const std::size_t stride = chunk == 0 ? n : chunk;
        std::size_t in_chunk = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = terms[4 * i + lane];
            const double q = softfloat::fp_add(intra, t, fmt, mode);
            if (t != 0.0 && q == intra) ++swamps;
            intra = q;
            if (++in_chunk == stride) {
                const double q2 = softfloat::fp_add(inter, intra, fmt, mode);
                if (intra != 0.0 && q2 == inter) ++swamps;
                inter = q2;
                intra = 0.0;
                in_chunk = 0;
            }
        }
        if (in_chunk != 0) {
            const double q2 = softfloat::fp_add(inter, intra, fmt, mode);
            if (intra != 0.0 && q2 == inter) ++swamps;
            inter = q2;
        }
        out[lane].sum = inter;
        out[lane].full_swamps = swamps;
    }
}

void quantize_buffer_scalar(double* x, std::size_t n, const FloatFormat& fmt,
                            RoundingMode mode) {
    for (std::size_t i = 0; i < n; ++i)
        x[i] = softfloat::quantize(x[i], fmt, mode);
}

namespace {

Backend detect_backend() {
    const char* env = std::getenv("ACCPREC_KERNEL");
    if (env != nullptr && env[0] != '\0') {
        if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
        if (std::strcmp(env, "avx2") == 0) {
            if (!avx2_available())
                throw std::runtime_error(
                    "ACCPREC_KERNEL=avx2 but this CPU has no AVX2");
            return Backend::Avx2;
        }
        std::fprintf(stderr,
                     "accprec: ignoring unknown ACCPREC_KERNEL=%s "
                     "(expected scalar or avx2)\n",
                     env);
    }
    return avx2_available() ? Backend::Avx2 : Backend::Scalar;
}

}  // namespace

Backend active_backend() {
    static const Backend backend = detect_backend();
    return backend;
}

const char* backend_name(Backend b) {
    return b == Backend::Avx2 ? "avx2" : "scalar";
}

void accumulate4(const double* terms, std::size_t n, const FloatFormat& fmt,
                 RoundingMode mode, std::size_t chunk, StreamStats out[4]) {
    if (active_backend() == Backend::Avx2)
        accumulate4_avx2(terms, n, fmt, mode, chunk, out);
    else
        accumulate4_scalar(terms, n, fmt, mode, chunk, out);
}

void quantize_buffer(double* x, std::size_t n, const FloatFormat& fmt,
                     RoundingMode mode) {
    if (active_backend() == Backend::Avx2)
        quantize_buffer_avx2(x, n, fmt, mode);
    else
        quantize_buffer_scalar(x, n, fmt, mode);
}

}  // namespace accprec::kernels
