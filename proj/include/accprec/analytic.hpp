// Copyright (c) 2026 the accprec authors
// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace accprec::analytic {

// Upper-tail probability of the standard normal, computed through erfc of
// x/sqrt(2). Exact zeros appear once erfc underflows double range (x above
// roughly 38.6); values are 12+ significant digits wherever the result is a
// normal double.
double q_function(double x);

struct Chunking {
    std::uint64_t n1 = 1;  // chunk size
    std::uint64_t n2 = 1;  // chunk count, n1 * n2 >= n
};

// One accumulation problem: n terms of m_p-bit products into an m_acc-bit
// accumulator, optionally chunked, with a non-zero ratio in (0, 1].
struct AccumulationSpec {
    std::uint64_t n = 1;
    int m_p = 5;
    int m_acc = 23;
    std::optional<Chunking> chunking;
    double nzr = 1.0;
};

// The variance retention ratio together with every intermediate of its
// defining sums, for auditability. The ratio is assembled as
// vrr = 1 - lost_mass / (k * n), which keeps the retention loss exact when
// vrr is close to 1 (the two sides of the ratio agree to many digits there).
struct VrrBreakdown {
    double vrr = 1.0;
    double alpha = 0.0;              // partial-swamping expected-loss offset
    std::vector<double> alpha_jr;    // per boundary stage j_r = 2..m_p
    double k1 = 0.0;                 // full-swamp mass above alpha
    double k2 = 0.0;                 // boundary mass where n > alpha_jr
    double k3 = 0.0;                 // no-swamp mass
    double k = 0.0;                  // k1 + k2 + k3
    double full_swamp_mass = 0.0;    // all q_i, i = 2..n-1, ungated
    double boundary_mass = 0.0;      // all q'_jr, ungated
    double lost_mass = 0.0;          // numerator of 1 - vrr
    std::uint64_t head_skip = 0;     // leading terms skipped as exact zeros
    int m_acc = 0;
    int m_p = 0;
    std::uint64_t n = 0;
};

// Retention when only full swamping is modeled; 1 for n <= 2.
double vrr_full_swamping(int m_acc, std::uint64_t n);

// Full retention model including partial swamping. n = 1 returns 1 by
// definition. Throws std::invalid_argument for m_acc < 1, m_p < 1, n < 1 or
// n too large to sum (> 2^32).
VrrBreakdown vrr(int m_acc, int m_p, std::uint64_t n);

// Same evaluation for one m_acc over every (n, m_p) pair, sharing the
// full-swamp summation across the grid: ns must be ascending. Entry order
// is n-major, m_p-minor. Pointwise identical to vrr().
std::vector<VrrBreakdown> vrr_grid(int m_acc, std::span<const int> m_ps,
                                   std::span<const std::uint64_t> ns);

// Inter-chunk input mantissa: floor(m_p + log2(nzr * n1)), clamped to
// [1, m_acc].
int effective_chunk_mantissa(int m_acc, int m_p, std::uint64_t n1, double nzr);

// Two-level retention: intra-chunk factor at length n1, inter-chunk factor
// at length n2 with the widened effective input mantissa.
double vrr_chunked(int m_acc, int m_p, std::uint64_t n1, std::uint64_t n2);

// Retention at the effective length round(nzr * n), minimum 1.
double vrr_sparse(int m_acc, int m_p, std::uint64_t n, double nzr);

double vrr_chunked_sparse(int m_acc, int m_p, std::uint64_t n1,
                          std::uint64_t n2, double nzr);

// n * (1 - VRR) for the variant the AccumulationSpec selects (plain, sparse,
// chunked, or both), evaluated without forming the near-1 VRR first. This
// is the log of the suitability measure; it is never exponentiated.
double variance_lost_exponent(const AccumulationSpec& spec);

inline constexpr double kDefaultCutoff = 50.0;
inline constexpr int kSearchFloor = 1;
inline constexpr int kSearchCeiling = 32;

struct PrecisionPrediction {
    bool satisfiable = false;
    int min_m_acc = -1;              // -1 when unsatisfiable
    double v_exponent_at_choice = 0.0;
    double cutoff_log = 0.0;         // ln(cutoff); comparisons stay in logs
};

// Smallest m_acc in [1, 32] whose lost exponent is at most ln(cutoff),
// scanning upward and taking the first crossing.
PrecisionPrediction predict_min_mantissa(
    int m_p, std::uint64_t n, std::optional<std::uint64_t> chunk_size = {},
    double nzr = 1.0, double cutoff = kDefaultCutoff);

struct ChunkSweepRow {
    std::uint64_t n1 = 0;  // 0 marks the unchunked baseline row
    double vrr = 1.0;
};

// One row per chunk size (n2 = ceil(n / n1)), preceded by the unchunked
// baseline row.
std::vector<ChunkSweepRow> sweep_chunk_size(
    int m_acc, int m_p, std::uint64_t n, double nzr,
    std::span<const std::uint64_t> chunk_sizes);

}  // namespace accprec::analytic
