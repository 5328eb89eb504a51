// Copyright (c) 2026 the accprec authors
// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "accprec/analytic.hpp"
#include "accprec/softfloat.hpp"

namespace accprec::montecarlo {

enum class Distribution {
    GaussianProduct,  // element-wise product of two standard normals
    Gaussian,         // direct standard normal draw
};

// Synthetic dot-product term model. Terms are i.i.d. and zero-mean; sparsity
// is the probability of forcing a term to exactly zero before quantization.
struct ProductModel {
    Distribution distribution = Distribution::GaussianProduct;
    int m_p = 5;
    int exponent_bits = 6;
    double sparsity = 0.0;
};

// Exact pre-quantization variance of one term: both distributions are unit
// variance, scaled by the surviving fraction.
double product_variance(const ProductModel& model);

// n draws from the model, quantized to the (1, exponent_bits, m_p) grid with
// round-to-nearest-even. Bit-reproducible per seed. One uniform is consumed
// per term for the sparsity mask even at sparsity zero, so value streams
// align across sparsity settings.
std::vector<double> sample_products(std::uint64_t n, const ProductModel& model,
                                    std::uint64_t seed);

struct EmpiricalVrr {
    double estimate = 0.0;        // mean of s_n^2 / (n * sigma_p^2)
    std::uint64_t trials = 0;
    double std_error = 0.0;       // sample standard deviation of the mean
    double swamp_fraction = 0.0;  // trials with at least one full swamp
};

// Emulates `trials` independent accumulations of spec.n model terms into a
// (1, model.exponent_bits, spec.m_acc) accumulator (chunked when
// spec.chunking is set) and reports the retention estimate. Trial t draws from
// rng::trial_seed(seed, t); per-trial results are reduced in index order, so
// the outcome is bit-identical for any thread count. threads = 0 reads
// ACCPREC_THREADS (default 1). spec.m_p and spec.nzr are not consulted; the
// model owns term generation.
EmpiricalVrr measure_vrr(const analytic::AccumulationSpec& spec,
                         const ProductModel& model, std::uint64_t trials,
                         std::uint64_t seed, softfloat::RoundingMode mode,
                         int threads = 0);

struct KneeLevel {
    int m_acc = 0;
    EmpiricalVrr vrr;
};

struct KneeResult {
    bool satisfiable = false;
    int m_acc = -1;  // smallest passing mantissa width; -1 when none
    double threshold = 0.0;
    std::vector<KneeLevel> scanned;  // ascending, ends at the knee
};

inline constexpr std::uint64_t kDefaultTrials = 1000;
inline constexpr std::uint64_t kDefaultSeed = 12345;
inline constexpr double kDefaultRetentionThreshold = 0.90;

// Smallest m_acc in [1, 32] whose empirical retention reaches the threshold,
// scanning upward with the same trials and per-trial seed schedule at every
// level (every level sees identical input terms). m_p overrides the model's
// product mantissa for generation.
KneeResult empirical_knee(int m_p, std::uint64_t n, const ProductModel& model,
                          softfloat::RoundingMode mode,
                          double retention_threshold = kDefaultRetentionThreshold,
                          std::uint64_t trials = kDefaultTrials,
                          std::uint64_t seed = kDefaultSeed, int threads = 0);

struct ProfileRow {
    analytic::AccumulationSpec spec;
    double ideal_variance = 0.0;      // spec.n * sigma_p^2
    double empirical_variance = 0.0;  // estimate * ideal
    double ratio = 0.0;               // the retention estimate itself
    double std_error = 0.0;
    double swamp_fraction = 0.0;
};

// Per-layer retention table in the style of a measured variance profile;
// every row reuses the same master seed.
std::vector<ProfileRow> variance_profile(
    std::span<const analytic::AccumulationSpec> specs,
    const ProductModel& model, std::uint64_t trials, std::uint64_t seed,
    softfloat::RoundingMode mode, int threads = 0);

// 0 resolves through ACCPREC_THREADS, then to 1.
int resolve_threads(int requested);

}  // namespace accprec::montecarlo
