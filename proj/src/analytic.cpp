// Copyright (c) 2026 the accprec authors
// SPDX-License-Identifier: MIT
#include "accprec/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace accprec::analytic {
namespace {

constexpr int kMaxAccMantissa = 63;
constexpr int kMaxProductMantissa = 32;
constexpr std::uint64_t kMaxLength = std::uint64_t{1} << 32;

// erfc underflows to an exact double zero for arguments >= 28, so q_i is an
// exact zero while 2^m_acc / sqrt(2 i) >= 28, i.e. for i <= 2^(2 m_acc)/1568.
// Skipping those terms changes no sum by even one ulp.
std::uint64_t exact_zero_head(int m_acc) {
    double bound = std::ldexp(1.0, 2 * m_acc) / 1568.0;
    if (bound >= 1e18) return ~std::uint64_t{0};
    return static_cast<std::uint64_t>(bound);
}

struct Kahan {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

// Cumulative sums of 2^j (2^j - 1) (2^(j+1) - 1); index t holds j = 1..t.
// Accumulated exactly in 128 bits (overflows 64 bits past t = 20), then
// rounded once to double.
std::vector<double> alpha_partial_sums(int m_p) {
    std::vector<double> s(static_cast<std::size_t>(m_p) + 1, 0.0);
    unsigned __int128 acc = 0;
    for (int j = 1; j <= m_p; ++j) {
        unsigned __int128 pj = static_cast<unsigned __int128>(1) << j;
        acc += pj * (pj - 1) * (2 * pj - 1);
        s[static_cast<std::size_t>(j)] = static_cast<double>(acc);
    }
    return s;
}

void validate_args(int m_acc, int m_p, std::uint64_t n) {
    if (m_acc < 1 || m_acc > kMaxAccMantissa)
        throw std::invalid_argument("accumulator mantissa out of range");
    if (m_p < 1 || m_p > kMaxProductMantissa)
        throw std::invalid_argument("product mantissa out of range");
    if (n < 1 || n > kMaxLength)
        throw std::invalid_argument("accumulation length out of range");
}

void validate_nzr(double nzr) {
    if (!(nzr > 0.0) || nzr > 1.0)
        throw std::invalid_argument("non-zero ratio must be in (0, 1]");
}

std::uint64_t effective_length(std::uint64_t n, double nzr) {
    auto r = std::llround(nzr * static_cast<double>(n));
    return r < 1 ? 1 : static_cast<std::uint64_t>(r);
}

struct Stage {
    int m_p = 0;
    double alpha = 0.0;
    std::vector<double> alpha_jr;  // index 0 is boundary stage j_r = 2
    Kahan k1;                      // gated full-swamp mass
    Kahan s1;                      // gated sum of i * q_i
};

VrrBreakdown close_point(int m_acc, std::uint64_t n, const Stage& st,
                         double full_swamp_mass, std::uint64_t i_zero) {
    VrrBreakdown bd;
    bd.m_acc = m_acc;
    bd.m_p = st.m_p;
    bd.n = n;
    bd.alpha = st.alpha;
    bd.alpha_jr = st.alpha_jr;
    bd.full_swamp_mass = full_swamp_mass;
    bd.k1 = st.k1.value();
    std::uint64_t head_end = std::min(n - 1, i_zero);
    bd.head_skip = head_end >= 2 ? head_end - 1 : 0;

    double nd = static_cast<double>(n);
    double lost_full =
        std::max(0.0, (nd + st.alpha) * st.k1.value() - st.s1.value());

    double sq2n = std::sqrt(2.0 * nd);
    bd.k3 = std::erf(std::ldexp(1.0, m_acc - st.m_p + 1) / sq2n);
    double lost_boundary = 0.0;
    for (int jr = 2; jr <= st.m_p; ++jr) {
        double xp = std::ldexp(1.0, m_acc - st.m_p + jr - 1) / sq2n;
        double xc = std::ldexp(1.0, m_acc - st.m_p + jr) / sq2n;
        double qp = std::ldexp(std::erfc(xp) * std::erf(xc),
                               m_acc - st.m_p + jr);
        bd.boundary_mass += qp;
        double ajr = st.alpha_jr[static_cast<std::size_t>(jr) - 2];
        if (nd > ajr) {
            bd.k2 += qp;
            lost_boundary += ajr * qp;
        }
    }
    bd.k = bd.k1 + bd.k2 + bd.k3;
    if (n == 1 || bd.k <= 0.0) {
        bd.lost_mass = 0.0;
        bd.vrr = 1.0;
        return bd;
    }
    bd.lost_mass = lost_full + lost_boundary;
    bd.vrr = std::max(0.0, 1.0 - bd.lost_mass / (bd.k * nd));
    return bd;
}

}  // namespace

double q_function(double x) {
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

std::vector<VrrBreakdown> vrr_grid(int m_acc, std::span<const int> m_ps,
                                   std::span<const std::uint64_t> ns) {
    if (m_ps.empty() || ns.empty())
        throw std::invalid_argument("empty evaluation grid");
    for (std::size_t j = 1; j < ns.size(); ++j)
        if (ns[j] <= ns[j - 1])
            throw std::invalid_argument("grid lengths must be ascending");
    for (int m_p : m_ps) validate_args(m_acc, m_p, ns.front());
    validate_args(m_acc, m_ps.front(), ns.back());

    std::vector<Stage> stages;
    stages.reserve(m_ps.size());
    for (int m_p : m_ps) {
        Stage st;
        st.m_p = m_p;
        auto sums = alpha_partial_sums(m_p);
        int shift = m_acc - 3 * m_p;
        st.alpha =
            std::ldexp(sums[static_cast<std::size_t>(m_p)], shift) / 3.0;
        for (int jr = 2; jr <= m_p; ++jr)
            st.alpha_jr.push_back(
                std::ldexp(sums[static_cast<std::size_t>(jr) - 1], shift) /
                3.0);
        stages.push_back(std::move(st));
    }

    std::uint64_t i_zero = exact_zero_head(m_acc);
    std::uint64_t i_start =
        std::max<std::uint64_t>(2, std::min(i_zero, kMaxLength) + 1);
    double base2 = std::ldexp(1.0, 2 * m_acc - 1);  // y_i = sqrt(base2 / i)

    std::vector<VrrBreakdown> out;
    out.reserve(ns.size() * m_ps.size());
    Kahan q_all;
    std::size_t next = 0;
    auto emit_through = [&](std::uint64_t done) {
        while (next < ns.size() && ns[next] - 1 <= done) {
            for (const Stage& st : stages)
                out.push_back(
                    close_point(m_acc, ns[next], st, q_all.value(), i_zero));
            ++next;
        }
    };

    emit_through(i_start - 1);
    double carry =
        next < ns.size()
            ? std::erf(std::sqrt(base2 / static_cast<double>(i_start - 1)))
            : 0.0;
    for (std::uint64_t i = i_start; next < ns.size(); ++i) {
        double id = static_cast<double>(i);
        double y = std::sqrt(base2 / id);
        double q = std::erfc(y) * carry;
        carry = std::erf(y);
        q_all.add(q);
        for (Stage& st : stages) {
            if (id > st.alpha) {
                st.k1.add(q);
                st.s1.add(id * q);
            }
        }
        emit_through(i);
    }
    return out;
}

VrrBreakdown vrr(int m_acc, int m_p, std::uint64_t n) {
    const int ps[] = {m_p};
    const std::uint64_t ns[] = {n};
    return vrr_grid(m_acc, ps, ns).front();
}

double vrr_full_swamping(int m_acc, std::uint64_t n) {
    validate_args(m_acc, 1, n);
    if (n <= 2) return 1.0;

    std::uint64_t i_zero = exact_zero_head(m_acc);
    std::uint64_t i_start =
        std::max<std::uint64_t>(2, std::min(i_zero, kMaxLength) + 1);
    double base2 = std::ldexp(1.0, 2 * m_acc - 1);
    double nd = static_cast<double>(n);

    Kahan mass, weighted;
    if (i_start <= n - 1) {
        double carry =
            std::erf(std::sqrt(base2 / static_cast<double>(i_start - 1)));
        for (std::uint64_t i = i_start; i <= n - 1; ++i) {
            double id = static_cast<double>(i);
            double y = std::sqrt(base2 / id);
            double q = std::erfc(y) * carry;
            carry = std::erf(y);
            mass.add(q);
            weighted.add(id * q);
        }
    }
    double tail = std::erf(std::sqrt(base2 / nd));
    double k = mass.value() + tail;
    if (k <= 0.0) return 1.0;
    double lost = std::max(0.0, nd * mass.value() - weighted.value());
    return std::max(0.0, 1.0 - lost / (k * nd));
}

int effective_chunk_mantissa(int m_acc, int m_p, std::uint64_t n1,
                             double nzr) {
    validate_nzr(nzr);
    if (n1 < 1) throw std::invalid_argument("chunk size must be positive");
    double raw = m_p + std::log2(nzr * static_cast<double>(n1));
    int m_eff = static_cast<int>(std::floor(raw));
    return std::clamp(m_eff, 1, m_acc);
}

double vrr_chunked(int m_acc, int m_p, std::uint64_t n1, std::uint64_t n2) {
    return vrr_chunked_sparse(m_acc, m_p, n1, n2, 1.0);
}

double vrr_sparse(int m_acc, int m_p, std::uint64_t n, double nzr) {
    validate_nzr(nzr);
    return vrr(m_acc, m_p, effective_length(n, nzr)).vrr;
}

double vrr_chunked_sparse(int m_acc, int m_p, std::uint64_t n1,
                          std::uint64_t n2, double nzr) {
    validate_nzr(nzr);
    double intra = vrr(m_acc, m_p, effective_length(n1, nzr)).vrr;
    int m_eff = effective_chunk_mantissa(m_acc, m_p, n1, nzr);
    double inter = vrr(m_acc, m_eff, n2).vrr;
    return intra * inter;
}

double variance_lost_exponent(const AccumulationSpec& spec) {
    validate_nzr(spec.nzr);
    auto loss_share = [](const VrrBreakdown& b) {  // 1 - vrr, cancellation-free
        return b.k > 0.0 ? b.lost_mass / (b.k * static_cast<double>(b.n)) : 0.0;
    };
    double nd = static_cast<double>(spec.n);
    if (!spec.chunking) {
        VrrBreakdown b =
            vrr(spec.m_acc, spec.m_p, effective_length(spec.n, spec.nzr));
        return nd * loss_share(b);
    }
    const Chunking& ch = *spec.chunking;
    if (static_cast<double>(ch.n1) * static_cast<double>(ch.n2) <
        static_cast<double>(spec.n))
        throw std::invalid_argument("chunking does not cover the length");
    VrrBreakdown b1 =
        vrr(spec.m_acc, spec.m_p, effective_length(ch.n1, spec.nzr));
    int m_eff =
        effective_chunk_mantissa(spec.m_acc, spec.m_p, ch.n1, spec.nzr);
    VrrBreakdown b2 = vrr(spec.m_acc, m_eff, ch.n2);
    double l1 = loss_share(b1);
    double l2 = loss_share(b2);
    return nd * (l1 + (1.0 - l1) * l2);
}

PrecisionPrediction predict_min_mantissa(int m_p, std::uint64_t n,
                                         std::optional<std::uint64_t> chunk_size,
                                         double nzr, double cutoff) {
    validate_nzr(nzr);
    if (!(cutoff > 0.0))
        throw std::invalid_argument("cutoff must be positive");
    if (chunk_size && *chunk_size < 1)
        throw std::invalid_argument("chunk size must be positive");

    PrecisionPrediction pred;
    pred.cutoff_log = std::log(cutoff);
    AccumulationSpec spec;
    spec.n = n;
    spec.m_p = m_p;
    spec.nzr = nzr;
    if (chunk_size) {
        std::uint64_t n1 = std::min(*chunk_size, n);
        spec.chunking = Chunking{n1, (n + n1 - 1) / n1};
    }
    for (int m = kSearchFloor; m <= kSearchCeiling; ++m) {
        spec.m_acc = m;
        double v = variance_lost_exponent(spec);
        pred.v_exponent_at_choice = v;
        if (v <= pred.cutoff_log) {
            pred.satisfiable = true;
            pred.min_m_acc = m;
            return pred;
        }
    }
    return pred;
}

std::vector<ChunkSweepRow> sweep_chunk_size(
    int m_acc, int m_p, std::uint64_t n, double nzr,
    std::span<const std::uint64_t> chunk_sizes) {
    std::vector<ChunkSweepRow> rows;
    rows.reserve(chunk_sizes.size() + 1);
    rows.push_back({0, vrr_sparse(m_acc, m_p, n, nzr)});
    for (std::uint64_t c : chunk_sizes) {
        if (c < 1) throw std::invalid_argument("chunk size must be positive");
        std::uint64_t n1 = std::min(c, n);
        std::uint64_t n2 = (n + n1 - 1) / n1;
        rows.push_back({c, vrr_chunked_sparse(m_acc, m_p, n1, n2, nzr)});
    }
    return rows;
}

}  // namespace accprec::analytic
