// Copyright (c) 2026 the accprec authors
// SPDX-License-Identifier: MIT
#include "accprec/netpredict.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "accprec/analytic.hpp"

namespace accprec::netpredict {
namespace {

void validate_layer(const LayerSpec& layer) {
    if (layer.name.empty())
        throw std::invalid_argument("layer name must not be empty");
    auto positive = [&](std::uint64_t v, const char* field) {
        if (v < 1)
            throw std::invalid_argument("layer " + layer.name + ": " + field +
                                        " must be at least 1");
    };
    if (layer.kind == LayerKind::Conv) {
        positive(layer.kernel_h, "kernel_h");
        positive(layer.kernel_w, "kernel_w");
        positive(layer.c_in, "c_in");
        positive(layer.c_out, "c_out");
        positive(layer.out_h, "out_h");
        positive(layer.out_w, "out_w");
    } else {
        positive(layer.in_features, "in_features");
        positive(layer.out_features, "out_features");
    }
    for (double nzr : {layer.nzr_fwd, layer.nzr_bwd, layer.nzr_grad})
        if (!(nzr > 0.0) || nzr > 1.0)
            throw std::invalid_argument("layer " + layer.name +
                                        ": nzr must be in (0, 1]");
}

TableRow predict_row(const NetworkSpec& net, const LayerSpec& layer, Gemm gemm,
                     std::uint64_t n, double nzr) {
    TableRow row;
    row.layer = layer.name;
    row.block = layer.block.empty() ? layer.name : layer.block;
    row.gemm = gemm;
    row.excluded = layer.excluded;
    row.n = n;
    row.nzr = nzr;
    if (layer.excluded) return row;

    auto normal =
        analytic::predict_min_mantissa(net.m_p, n, {}, nzr, net.cutoff);
    row.normal_satisfiable = normal.satisfiable;
    row.m_acc_normal = normal.min_m_acc;
    auto chunked = analytic::predict_min_mantissa(net.m_p, n, net.chunk_size,
                                                  nzr, net.cutoff);
    row.chunked_satisfiable = chunked.satisfiable;
    row.m_acc_chunked = chunked.min_m_acc;
    return row;
}

}  // namespace

const char* gemm_name(Gemm g) {
    switch (g) {
        case Gemm::Fwd: return "FWD";
        case Gemm::Bwd: return "BWD";
        case Gemm::Grad: return "GRAD";
    }
    return "?";
}

GemmLengths accumulation_lengths(const LayerSpec& layer,
                                 std::uint64_t batch_size, bool first_layer) {
    validate_layer(layer);
    if (batch_size < 1)
        throw std::invalid_argument("batch size must be at least 1");
    GemmLengths lengths;
    if (layer.kind == LayerKind::Conv) {
        std::uint64_t window = layer.kernel_h * layer.kernel_w;
        lengths.fwd = window * layer.c_in;
        if (!first_layer) lengths.bwd = window * layer.c_out;
        lengths.grad = batch_size * layer.out_h * layer.out_w;
    } else {
        lengths.fwd = layer.in_features;
        if (!first_layer) lengths.bwd = layer.out_features;
        lengths.grad = batch_size;
    }
    return lengths;
}

PrecisionTable predict_network(const NetworkSpec& net) {
    if (net.layers.empty())
        throw std::invalid_argument("network has no layers");
    if (net.chunk_size && *net.chunk_size < 1)
        throw std::invalid_argument("chunk size must be positive");

    PrecisionTable table;
    table.network = net.name;
    table.m_p = net.m_p;
    table.chunk_size = net.chunk_size;
    table.cutoff = net.cutoff;

    for (std::size_t li = 0; li < net.layers.size(); ++li) {
        const LayerSpec& layer = net.layers[li];
        GemmLengths len =
            accumulation_lengths(layer, net.batch_size, li == 0);
        table.rows.push_back(
            predict_row(net, layer, Gemm::Fwd, len.fwd, layer.nzr_fwd));
        if (len.bwd)
            table.rows.push_back(
                predict_row(net, layer, Gemm::Bwd, *len.bwd, layer.nzr_bwd));
        table.rows.push_back(
            predict_row(net, layer, Gemm::Grad, len.grad, layer.nzr_grad));
    }

    // Per-block worst case over member layers; a block whose members include
    // an unsatisfiable row is itself unsatisfiable.
    std::map<std::pair<std::string, int>, TableRow> blocks;
    for (const TableRow& row : table.rows) {
        if (row.excluded) continue;
        auto key = std::make_pair(row.block, static_cast<int>(row.gemm));
        auto it = blocks.find(key);
        if (it == blocks.end()) {
            TableRow summary = row;
            summary.layer.clear();
            blocks.emplace(key, std::move(summary));
            continue;
        }
        TableRow& summary = it->second;
        summary.n = std::max(summary.n, row.n);
        summary.nzr = std::min(summary.nzr, row.nzr);
        if (!row.normal_satisfiable)
            summary.normal_satisfiable = false;
        else if (summary.normal_satisfiable)
            summary.m_acc_normal =
                std::max(summary.m_acc_normal, row.m_acc_normal);
        if (!row.chunked_satisfiable)
            summary.chunked_satisfiable = false;
        else if (summary.chunked_satisfiable)
            summary.m_acc_chunked =
                std::max(summary.m_acc_chunked, row.m_acc_chunked);
    }
    // Preserve first-appearance block order.
    for (const TableRow& row : table.rows) {
        if (row.excluded) continue;
        for (auto it = blocks.begin(); it != blocks.end(); ++it) {
            if (it->second.block == row.block &&
                it->second.gemm == row.gemm) {
                table.block_rows.push_back(it->second);
                blocks.erase(it);
                break;
            }
        }
    }
    return table;
}

PrecisionTable apply_perturbation(const PrecisionTable& table, int pp) {
    if (pp > 0)
        throw std::invalid_argument("precision perturbation must be <= 0");
    PrecisionTable out = table;
    auto shift = [pp](TableRow& row) {
        if (row.excluded) return;
        if (row.normal_satisfiable)
            row.m_acc_normal = std::max(1, row.m_acc_normal + pp);
        if (row.chunked_satisfiable)
            row.m_acc_chunked = std::max(1, row.m_acc_chunked + pp);
    };
    for (TableRow& row : out.rows) shift(row);
    for (TableRow& row : out.block_rows) shift(row);
    return out;
}

NetworkSpec load_topology(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open topology file " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("topology " + path + ": " + e.what());
    }

    NetworkSpec net;
    try {
        net.name = j.at("name").get<std::string>();
        net.batch_size = j.at("batch_size").get<std::uint64_t>();
        net.m_p = j.value("m_p", 5);
        net.cutoff = j.value("cutoff", 50.0);
        if (j.contains("chunk_size") && j["chunk_size"].is_null())
            net.chunk_size.reset();
        else
            net.chunk_size = j.value("chunk_size", std::uint64_t{64});
        for (const auto& jl : j.at("layers")) {
            LayerSpec layer;
            layer.name = jl.at("name").get<std::string>();
            std::string kind = jl.at("kind").get<std::string>();
            if (kind == "conv")
                layer.kind = LayerKind::Conv;
            else if (kind == "fc")
                layer.kind = LayerKind::Fc;
            else
                throw std::runtime_error("layer " + layer.name +
                                         ": unknown kind '" + kind + "'");
            layer.block = jl.value("block", layer.name);
            layer.excluded = jl.value("excluded", false);
            if (layer.kind == LayerKind::Conv) {
                layer.kernel_h = jl.at("kernel_h").get<std::uint64_t>();
                layer.kernel_w = jl.at("kernel_w").get<std::uint64_t>();
                layer.c_in = jl.at("c_in").get<std::uint64_t>();
                layer.c_out = jl.at("c_out").get<std::uint64_t>();
                layer.out_h = jl.at("out_h").get<std::uint64_t>();
                layer.out_w = jl.at("out_w").get<std::uint64_t>();
            } else {
                layer.in_features = jl.at("in_features").get<std::uint64_t>();
                layer.out_features = jl.at("out_features").get<std::uint64_t>();
            }
            layer.nzr_fwd = jl.value("nzr_fwd", 1.0);
            layer.nzr_bwd = jl.value("nzr_bwd", 1.0);
            layer.nzr_grad = jl.value("nzr_grad", 1.0);
            validate_layer(layer);
            net.layers.push_back(std::move(layer));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("topology " + path + ": " + e.what());
    }
    if (net.layers.empty())
        throw std::runtime_error("topology " + path + ": no layers");
    return net;
}

}  // namespace accprec::netpredict
