// Copyright (c) 2026 the accprec authors
// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace accprec::netpredict {

enum class LayerKind { Conv, Fc };
enum class Gemm { Fwd, Bwd, Grad };

const char* gemm_name(Gemm g);

// One GEMM-bearing layer. Grouped convolutions store per-group channel
// counts, since the accumulation never crosses groups. Excluded layers are
// carried through tables at fixed precision and never predicted.
struct LayerSpec {
    std::string name;
    LayerKind kind = LayerKind::Conv;
    std::string block;  // grouping key for the per-block summary rows
    bool excluded = false;
    std::uint64_t kernel_h = 0, kernel_w = 0;
    std::uint64_t c_in = 0, c_out = 0;
    std::uint64_t out_h = 0, out_w = 0;
    std::uint64_t in_features = 0, out_features = 0;
    double nzr_fwd = 1.0, nzr_bwd = 1.0, nzr_grad = 1.0;
};

struct NetworkSpec {
    std::string name;
    std::vector<LayerSpec> layers;
    std::uint64_t batch_size = 1;
    int m_p = 5;
    std::optional<std::uint64_t> chunk_size = 64;
    double cutoff = 50.0;
};

struct GemmLengths {
    std::uint64_t fwd = 0;
    std::optional<std::uint64_t> bwd;  // absent for the first layer
    std::uint64_t grad = 0;
};

// Dot-product lengths of the three GEMMs:
// conv: fwd = kh*kw*c_in, bwd = kh*kw*c_out, grad = batch*out_h*out_w;
// fc: fwd = in_features, bwd = out_features, grad = batch.
GemmLengths accumulation_lengths(const LayerSpec& layer,
                                 std::uint64_t batch_size,
                                 bool first_layer = false);

struct TableRow {
    std::string layer;  // empty on block summary rows
    std::string block;
    Gemm gemm = Gemm::Fwd;
    bool excluded = false;
    std::uint64_t n = 0;  // raw accumulation length
    double nzr = 1.0;
    bool normal_satisfiable = false;
    int m_acc_normal = -1;
    bool chunked_satisfiable = false;
    int m_acc_chunked = -1;
};

struct PrecisionTable {
    std::string network;
    int m_p = 5;
    std::optional<std::uint64_t> chunk_size;
    double cutoff = 50.0;
    std::vector<TableRow> rows;        // one per (layer, gemm) that exists
    std::vector<TableRow> block_rows;  // max over each block's member rows
};

// Runs predict_min_mantissa per row, normal and chunked. Unsatisfiable rows
// keep satisfiable = false rather than aborting the table. Excluded layers
// get placeholder rows and never contribute to block summaries.
PrecisionTable predict_network(const NetworkSpec& net);

// Shifts every satisfiable prediction by pp (pp <= 0 required), flooring at
// 1 bit; excluded rows are untouched.
PrecisionTable apply_perturbation(const PrecisionTable& table, int pp);

// Loads the JSON topology schema shipped under data/. Throws
// std::runtime_error naming the offending field on schema violations.
NetworkSpec load_topology(const std::string& path);

}  // namespace accprec::netpredict
