// Copyright (c) 2026 the accprec authors
// SPDX-License-Identifier: MIT
#include "accprec/montecarlo.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

#include "accprec/kernels.hpp"
#include "accprec/rng.hpp"

namespace accprec::montecarlo {
namespace {

// Writes dst[stride * i] for i in [0, n); draw order (values before the
// sparsity mask, one mask uniform per term) must match sample_products
// exactly, which a unit test pins.
void generate_terms(double* dst, std::size_t stride, std::uint64_t n,
                    const ProductModel& model, std::uint64_t term_seed) {
    rng::GaussianStream g(term_seed);
    const bool product = model.distribution == Distribution::GaussianProduct;
    for (std::uint64_t i = 0; i < n; ++i) {
        double v;
        if (product) {
            double z0, z1;
            g.fresh_pair(z0, z1);
            v = z0 * z1;
        } else {
            v = g.next();
        }
        double mask = g.next_unit();
        dst[stride * i] = mask <= model.sparsity ? 0.0 : v;
    }
}

void validate_model(const ProductModel& model) {
    if (model.sparsity < 0.0 || model.sparsity > 1.0)
        throw std::invalid_argument("sparsity must be in [0, 1]");
    softfloat::make_format(model.exponent_bits, model.m_p);
}

struct TrialOutcome {
    double retention = 0.0;
    bool swamped = false;
};

// Runs `body(batch_index, scratch)` over all 4-trial batches, splitting the
// batch range contiguously across workers. Batch composition is a pure
// function of the trial index, so results do not depend on the split.
template <typename Body>
void for_each_batch(std::uint64_t batches, std::uint64_t scratch_len,
                    int threads, Body&& body) {
    int workers = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), batches));
    if (workers <= 1) {
        std::vector<double> scratch(scratch_len);
        for (std::uint64_t b = 0; b < batches; ++b) body(b, scratch.data());
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::uint64_t per = batches / static_cast<std::uint64_t>(workers);
    std::uint64_t extra = batches % static_cast<std::uint64_t>(workers);
    std::uint64_t begin = 0;
    for (int w = 0; w < workers; ++w) {
        std::uint64_t count = per + (static_cast<std::uint64_t>(w) < extra);
        std::uint64_t end = begin + count;
        pool.emplace_back([begin, end, scratch_len, &body] {
            std::vector<double> scratch(scratch_len);
            for (std::uint64_t b = begin; b < end; ++b) body(b, scratch.data());
        });
        begin = end;
    }
    for (auto& t : pool) t.join();
}

EmpiricalVrr reduce_outcomes(const std::vector<TrialOutcome>& outcomes) {
    EmpiricalVrr result;
    result.trials = outcomes.size();
    double sum = 0.0;
    std::uint64_t swamped = 0;
    for (const TrialOutcome& o : outcomes) {
        sum += o.retention;
        swamped += o.swamped;
    }
    double mean = sum / static_cast<double>(outcomes.size());
    double ss = 0.0;
    for (const TrialOutcome& o : outcomes) {
        double d = o.retention - mean;
        ss += d * d;
    }
    double nt = static_cast<double>(outcomes.size());
    result.estimate = mean;
    result.std_error = std::sqrt(ss / (nt - 1.0)) / std::sqrt(nt);
    result.swamp_fraction = static_cast<double>(swamped) / nt;
    return result;
}

}  // namespace

double product_variance(const ProductModel& model) {
    return 1.0 - model.sparsity;
}

std::vector<double> sample_products(std::uint64_t n, const ProductModel& model,
                                    std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample count must be positive");
    validate_model(model);
    std::vector<double> out(n);
    generate_terms(out.data(), 1, n, model, seed);
    auto fmt = softfloat::make_format(model.exponent_bits, model.m_p);
    kernels::quantize_buffer(out.data(), out.size(), fmt,
                             softfloat::RoundingMode::NearestEven);
    return out;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("ACCPREC_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

EmpiricalVrr measure_vrr(const analytic::AccumulationSpec& spec,
                         const ProductModel& model, std::uint64_t trials,
                         std::uint64_t seed, softfloat::RoundingMode mode,
                         int threads) {
    if (trials < 2) throw std::invalid_argument("trials must be at least 2");
    if (spec.n < 1) throw std::invalid_argument("length must be positive");
    validate_model(model);
    double sigma2 = product_variance(model);
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("product variance must be positive");

    auto pfmt = softfloat::make_format(model.exponent_bits, model.m_p);
    auto afmt = softfloat::make_format(model.exponent_bits, spec.m_acc);
    std::uint64_t chunk = spec.chunking ? spec.chunking->n1 : 0;
    if (spec.chunking && chunk < 1)
        throw std::invalid_argument("chunk size must be positive");

    const std::uint64_t n = spec.n;
    const double norm = static_cast<double>(n) * sigma2;
    std::uint64_t batches = (trials + 3) / 4;
    std::vector<TrialOutcome> outcomes(trials);

    for_each_batch(
        batches, 4 * n, resolve_threads(threads),
        [&](std::uint64_t b, double* scratch) {
            for (int lane = 0; lane < 4; ++lane) {
                std::uint64_t t = 4 * b + static_cast<std::uint64_t>(lane);
                if (t < trials) {
                    generate_terms(scratch + lane, 4, n, model,
                                   rng::trial_seed(seed, t));
                } else {
                    for (std::uint64_t i = 0; i < n; ++i)
                        scratch[4 * i + static_cast<std::uint64_t>(lane)] = 0.0;
                }
            }
            kernels::quantize_buffer(scratch, 4 * n, pfmt,
                                     softfloat::RoundingMode::NearestEven);
            kernels::StreamStats stats[4];
            kernels::accumulate4(scratch, n, afmt, mode, chunk, stats);
            for (int lane = 0; lane < 4; ++lane) {
                std::uint64_t t = 4 * b + static_cast<std::uint64_t>(lane);
                if (t >= trials) continue;
                double s = stats[lane].sum;
                outcomes[t].retention = s * s / norm;
                outcomes[t].swamped = stats[lane].full_swamps > 0;
            }
        });
    return reduce_outcomes(outcomes);
}

KneeResult empirical_knee(int m_p, std::uint64_t n, const ProductModel& model,
                          softfloat::RoundingMode mode,
                          double retention_threshold, std::uint64_t trials,
                          std::uint64_t seed, int threads) {
    if (!(retention_threshold > 0.0) || !(retention_threshold < 1.0))
        throw std::invalid_argument("retention threshold must be in (0, 1)");
    if (trials < 2) throw std::invalid_argument("trials must be at least 2");
    if (n < 1) throw std::invalid_argument("length must be positive");

    ProductModel gen = model;
    gen.m_p = m_p;
    validate_model(gen);
    double sigma2 = product_variance(gen);
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("product variance must be positive");

    constexpr int kLevels = analytic::kSearchCeiling;
    auto pfmt = softfloat::make_format(gen.exponent_bits, gen.m_p);
    softfloat::FloatFormat afmt[kLevels];
    for (int m = 1; m <= kLevels; ++m)
        afmt[m - 1] = softfloat::make_format(gen.exponent_bits, m);

    const double norm = static_cast<double>(n) * sigma2;
    std::uint64_t batches = (trials + 3) / 4;
    // All mantissa levels share each batch's generated terms; term synthesis
    // dominates the runtime otherwise.
    std::vector<std::vector<TrialOutcome>> outcomes(
        kLevels, std::vector<TrialOutcome>(trials));

    for_each_batch(
        batches, 4 * n, resolve_threads(threads),
        [&](std::uint64_t b, double* scratch) {
            for (int lane = 0; lane < 4; ++lane) {
                std::uint64_t t = 4 * b + static_cast<std::uint64_t>(lane);
                if (t < trials) {
                    generate_terms(scratch + lane, 4, n, gen,
                                   rng::trial_seed(seed, t));
                } else {
                    for (std::uint64_t i = 0; i < n; ++i)
                        scratch[4 * i + static_cast<std::uint64_t>(lane)] = 0.0;
                }
            }
            kernels::quantize_buffer(scratch, 4 * n, pfmt,
                                     softfloat::RoundingMode::NearestEven);
            for (int level = 0; level < kLevels; ++level) {
                kernels::StreamStats stats[4];
                kernels::accumulate4(scratch, n, afmt[level], mode, 0, stats);
                for (int lane = 0; lane < 4; ++lane) {
                    std::uint64_t t = 4 * b + static_cast<std::uint64_t>(lane);
                    if (t >= trials) continue;
                    double s = stats[lane].sum;
                    outcomes[static_cast<std::size_t>(level)][t] = {
                        s * s / norm, stats[lane].full_swamps > 0};
                }
            }
        });

    KneeResult result;
    result.threshold = retention_threshold;
    for (int level = 0; level < kLevels; ++level) {
        KneeLevel kl;
        kl.m_acc = level + 1;
        kl.vrr = reduce_outcomes(outcomes[static_cast<std::size_t>(level)]);
        result.scanned.push_back(kl);
        if (kl.vrr.estimate >= retention_threshold) {
            result.satisfiable = true;
            result.m_acc = kl.m_acc;
            return result;
        }
    }
    return result;
}

std::vector<ProfileRow> variance_profile(
    std::span<const analytic::AccumulationSpec> specs,
    const ProductModel& model, std::uint64_t trials, std::uint64_t seed,
    softfloat::RoundingMode mode, int threads) {
    if (specs.empty()) throw std::invalid_argument("no accumulation specs");
    std::vector<ProfileRow> rows;
    rows.reserve(specs.size());
    for (const analytic::AccumulationSpec& spec : specs) {
        EmpiricalVrr vrr = measure_vrr(spec, model, trials, seed, mode, threads);
        ProfileRow row;
        row.spec = spec;
        row.ideal_variance =
            static_cast<double>(spec.n) * product_variance(model);
        row.empirical_variance = vrr.estimate * row.ideal_variance;
        row.ratio = vrr.estimate;
        row.std_error = vrr.std_error;
        row.swamp_fraction = vrr.swamp_fraction;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace accprec::montecarlo
