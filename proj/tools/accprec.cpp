// Copyright (c) 2026 the accprec authors
// SPDX-License-Identifier: MIT
//
// Command-line front end: analytic retention queries, precision prediction,
// chunk-size sweeps, Monte Carlo validation, and network precision tables.
#include <algorithm>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "accprec/analytic.hpp"
#include "accprec/csv.hpp"
#include "accprec/exitcodes.hpp"
#include "accprec/manifest.hpp"
#include "accprec/montecarlo.hpp"
#include "accprec/netpredict.hpp"
#include "accprec/softfloat.hpp"
#include "accprec/version.hpp"

namespace {

using namespace accprec;

// Counts accept plain integers or a power form like "2^14".
std::uint64_t parse_count(const std::string& text) {
    auto parse_u64 = [](const std::string& s) {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("not a count: '" + s + "'");
        return std::stoull(s);
    };
    auto caret = text.find('^');
    if (caret == std::string::npos) return parse_u64(text);
    std::uint64_t base = parse_u64(text.substr(0, caret));
    std::uint64_t exp = parse_u64(text.substr(caret + 1));
    if (base != 2 || exp > 63)
        throw std::invalid_argument("only powers 2^0..2^63 are supported: '" +
                                    text + "'");
    return std::uint64_t{1} << exp;
}

// "2^1..2^22" doubles from the left endpoint; "16,64,256" lists values.
// The result is ascending and duplicate-free.
std::vector<std::uint64_t> parse_grid(const std::string& text) {
    std::vector<std::uint64_t> grid;
    auto dots = text.find("..");
    if (dots != std::string::npos) {
        std::uint64_t lo = parse_count(text.substr(0, dots));
        std::uint64_t hi = parse_count(text.substr(dots + 2));
        if (lo < 1 || hi < lo)
            throw std::invalid_argument("empty grid range: '" + text + "'");
        for (std::uint64_t n = lo; n <= hi; n *= 2) {
            grid.push_back(n);
            if (n > hi / 2) break;  // avoid wrap past the endpoint
        }
    } else {
        std::size_t pos = 0;
        while (pos <= text.size()) {
            auto comma = text.find(',', pos);
            std::string item = text.substr(
                pos, comma == std::string::npos ? std::string::npos
                                                : comma - pos);
            if (!item.empty()) grid.push_back(parse_count(item));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    if (grid.empty()) throw std::invalid_argument("empty grid: '" + text + "'");
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

softfloat::RoundingMode parse_mode(const std::string& name) {
    if (name == "nearest") return softfloat::RoundingMode::NearestEven;
    if (name == "truncate") return softfloat::RoundingMode::TruncateTowardZero;
    throw std::invalid_argument("mode must be nearest or truncate");
}

montecarlo::Distribution parse_dist(const std::string& name) {
    if (name == "gaussian-product")
        return montecarlo::Distribution::GaussianProduct;
    if (name == "gaussian") return montecarlo::Distribution::Gaussian;
    throw std::invalid_argument(
        "distribution must be gaussian-product or gaussian");
}

void print_table(const csv::Table& table) {
    std::vector<std::size_t> width(table.header.size());
    for (std::size_t c = 0; c < table.header.size(); ++c)
        width[c] = table.header[c].size();
    for (const auto& row : table.rows)
        for (std::size_t c = 0; c < row.size() && c < width.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    auto print_row = [&width](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c)
            std::printf("%-*s%s", static_cast<int>(width[c]), row[c].c_str(),
                        c + 1 == row.size() ? "\n" : "  ");
    };
    print_row(table.header);
    for (const auto& row : table.rows) print_row(row);
}

// Writes the CSV plus its manifest sidecar when a path was given, otherwise
// pretty-prints to stdout.
void deliver(const csv::Table& table, const std::string& csv_path,
             manifest::RunManifest m) {
    if (csv_path.empty()) {
        print_table(table);
        return;
    }
    csv::write_file(csv_path, table);
    m.csv_columns = table.header;
    manifest::write_alongside(csv_path, m);
    std::printf("wrote %s (%zu rows)\n", csv_path.c_str(), table.rows.size());
}

std::string fmt_d(double x) { return csv::format_double(x); }
std::string fmt_u(std::uint64_t v) { return csv::format_u64(v); }

struct VrrArgs {
    int m_acc = 0;
    int m_p = 5;
    std::string n_text;
    std::string grid_text;
    std::uint64_t chunk = 0;
    double nzr = 1.0;
    std::string csv_path;
    bool full_swamp_only = false;
};

double variant_vrr(int m_acc, int m_p, std::uint64_t n, std::uint64_t chunk,
                   double nzr, bool full_swamp_only) {
    if (full_swamp_only) {
        auto neff = std::max<long long>(
            1, std::llround(nzr * static_cast<double>(n)));
        return analytic::vrr_full_swamping(
            m_acc, static_cast<std::uint64_t>(neff));
    }
    if (chunk == 0) return analytic::vrr_sparse(m_acc, m_p, n, nzr);
    std::uint64_t n1 = std::min(chunk, n);
    std::uint64_t n2 = (n + n1 - 1) / n1;
    return analytic::vrr_chunked_sparse(m_acc, m_p, n1, n2, nzr);
}

int run_vrr(const VrrArgs& args) {
    if (args.full_swamp_only && args.chunk > 0)
        throw std::invalid_argument(
            "--full-swamp-only models unchunked accumulation; drop --chunk");
    manifest::RunManifest m;
    m.command = "vrr";
    m.parameters = {{"macc", std::to_string(args.m_acc)},
                    {"mp", std::to_string(args.m_p)},
                    {"n", args.n_text},
                    {"grid_n", args.grid_text},
                    {"chunk", fmt_u(args.chunk)},
                    {"nzr", fmt_d(args.nzr)},
                    {"full_swamp_only", args.full_swamp_only ? "1" : "0"}};

    if (!args.grid_text.empty()) {
        auto grid = parse_grid(args.grid_text);
        csv::Table table;
        table.header = {"n", "m_p", "m_acc", "chunk", "nzr", "vrr_analytic"};
        auto add_row = [&](std::uint64_t n, double value) {
            table.rows.push_back({fmt_u(n), std::to_string(args.m_p),
                                  std::to_string(args.m_acc),
                                  fmt_u(args.chunk), fmt_d(args.nzr),
                                  fmt_d(value)});
        };
        if (!args.full_swamp_only && args.chunk == 0 && args.nzr == 1.0) {
            const int ps[] = {args.m_p};
            auto points = analytic::vrr_grid(args.m_acc, ps, grid);
            for (std::size_t i = 0; i < grid.size(); ++i)
                add_row(grid[i], points[i].vrr);
        } else {
            for (std::uint64_t n : grid)
                add_row(n, variant_vrr(args.m_acc, args.m_p, n, args.chunk,
                                       args.nzr, args.full_swamp_only));
        }
        deliver(table, args.csv_path, m);
        return kExitOk;
    }

    std::uint64_t n = parse_count(args.n_text);
    if (args.full_swamp_only) {
        std::printf("m_acc=%d n=%" PRIu64 " nzr=%s\n", args.m_acc, n,
                    fmt_d(args.nzr).c_str());
        std::printf("vrr_full_swamping=%s\n",
                    fmt_d(variant_vrr(args.m_acc, args.m_p, n, 0, args.nzr,
                                      true))
                        .c_str());
        return kExitOk;
    }
    analytic::AccumulationSpec spec;
    spec.n = n;
    spec.m_p = args.m_p;
    spec.m_acc = args.m_acc;
    spec.nzr = args.nzr;
    if (args.chunk > 0) {
        std::uint64_t n1 = std::min(args.chunk, n);
        spec.chunking = analytic::Chunking{n1, (n + n1 - 1) / n1};
    }
    double v = analytic::variance_lost_exponent(spec);
    std::printf("m_acc=%d m_p=%d n=%" PRIu64 " chunk=%" PRIu64 " nzr=%s\n",
                args.m_acc, args.m_p, n, args.chunk, fmt_d(args.nzr).c_str());
    if (args.chunk > 0) {
        double value = variant_vrr(args.m_acc, args.m_p, n, args.chunk,
                                   args.nzr, false);
        int m_eff = analytic::effective_chunk_mantissa(args.m_acc, args.m_p,
                                                       spec.chunking->n1,
                                                       args.nzr);
        std::printf("vrr=%s\n", fmt_d(value).c_str());
        std::printf("m_eff=%d n1=%" PRIu64 " n2=%" PRIu64 "\n", m_eff,
                    spec.chunking->n1, spec.chunking->n2);
    } else {
        auto bd = analytic::vrr(
            args.m_acc, args.m_p,
            std::max<std::uint64_t>(
                1, static_cast<std::uint64_t>(std::llround(
                       args.nzr * static_cast<double>(n)))));
        std::printf("vrr=%s\n", fmt_d(bd.vrr).c_str());
        std::printf("alpha=%s\n", fmt_d(bd.alpha).c_str());
        std::printf("k1=%s k2=%s k3=%s k=%s\n", fmt_d(bd.k1).c_str(),
                    fmt_d(bd.k2).c_str(), fmt_d(bd.k3).c_str(),
                    fmt_d(bd.k).c_str());
        std::printf("full_swamp_mass=%s boundary_mass=%s lost_mass=%s\n",
                    fmt_d(bd.full_swamp_mass).c_str(),
                    fmt_d(bd.boundary_mass).c_str(),
                    fmt_d(bd.lost_mass).c_str());
        std::printf("head_skip=%" PRIu64 "\n", bd.head_skip);
    }
    std::printf("v_exponent=%s\n", fmt_d(v).c_str());
    return kExitOk;
}

struct PredictArgs {
    int m_p = 5;
    std::string n_text;
    std::uint64_t chunk = 0;
    double nzr = 1.0;
    double cutoff = analytic::kDefaultCutoff;
};

int run_predict(const PredictArgs& args) {
    std::uint64_t n = parse_count(args.n_text);
    std::optional<std::uint64_t> chunk;
    if (args.chunk > 0) chunk = args.chunk;
    auto pred = analytic::predict_min_mantissa(args.m_p, n, chunk, args.nzr,
                                               args.cutoff);
    std::printf("satisfiable=%s\n", pred.satisfiable ? "true" : "false");
    std::printf("min_m_acc=%d\n", pred.min_m_acc);
    std::printf("v_exponent=%s\n", fmt_d(pred.v_exponent_at_choice).c_str());
    std::printf("cutoff_log=%s\n", fmt_d(pred.cutoff_log).c_str());
    if (!pred.satisfiable) {
        std::fprintf(stderr,
                     "no accumulator mantissa in [%d, %d] reaches the cutoff\n",
                     analytic::kSearchFloor, analytic::kSearchCeiling);
        return kExitUnsatisfiable;
    }
    return kExitOk;
}

struct SweepArgs {
    int m_acc = 0;
    int m_p = 5;
    std::string n_text;
    double nzr = 1.0;
    std::string sizes_text = "16,32,64,128,256,512,1024";
    std::string csv_path;
};

int run_sweep(const SweepArgs& args) {
    std::uint64_t n = parse_count(args.n_text);
    auto sizes = parse_grid(args.sizes_text);
    auto rows = analytic::sweep_chunk_size(args.m_acc, args.m_p, n, args.nzr,
                                           sizes);
    csv::Table table;
    table.header = {"n", "m_p", "m_acc", "chunk", "nzr", "vrr_analytic"};
    for (const auto& row : rows)
        table.rows.push_back({fmt_u(n), std::to_string(args.m_p),
                              std::to_string(args.m_acc), fmt_u(row.n1),
                              fmt_d(args.nzr), fmt_d(row.vrr)});
    manifest::RunManifest m;
    m.command = "sweep-chunk";
    m.parameters = {{"macc", std::to_string(args.m_acc)},
                    {"mp", std::to_string(args.m_p)},
                    {"n", args.n_text},
                    {"nzr", fmt_d(args.nzr)},
                    {"chunk_sizes", args.sizes_text}};
    deliver(table, args.csv_path, m);
    return kExitOk;
}

struct ValidateArgs {
    int m_p = 5;
    std::optional<int> m_acc;
    std::string n_text;
    std::uint64_t trials = montecarlo::kDefaultTrials;
    std::uint64_t seed = montecarlo::kDefaultSeed;
    std::string mode_text = "nearest";
    std::string dist_text = "gaussian-product";
    std::uint64_t chunk = 0;
    double nzr = 1.0;
    bool knee = false;
    double threshold = montecarlo::kDefaultRetentionThreshold;
    std::string csv_path;
    int threads = 0;
};

int run_validate(const ValidateArgs& args) {
    std::uint64_t n = parse_count(args.n_text);
    auto mode = parse_mode(args.mode_text);
    montecarlo::ProductModel model;
    model.distribution = parse_dist(args.dist_text);
    model.m_p = args.m_p;
    model.sparsity = 1.0 - args.nzr;

    csv::Table table;
    table.header = {"n",      "m_p",   "m_acc", "chunk",
                    "nzr",    "mode",  "trials", "seed",
                    "vrr_analytic", "vrr_empirical", "std_error",
                    "swamp_fraction"};
    auto add_row = [&](int m_acc, std::uint64_t chunk, double analytic_value,
                       const montecarlo::EmpiricalVrr& e) {
        table.rows.push_back({fmt_u(n), std::to_string(args.m_p),
                              std::to_string(m_acc), fmt_u(chunk),
                              fmt_d(args.nzr), args.mode_text,
                              fmt_u(e.trials), fmt_u(args.seed),
                              fmt_d(analytic_value), fmt_d(e.estimate),
                              fmt_d(e.std_error), fmt_d(e.swamp_fraction)});
    };

    manifest::RunManifest m;
    m.command = "validate";
    m.parameters = {{"mp", std::to_string(args.m_p)},
                    {"macc", args.m_acc ? std::to_string(*args.m_acc) : ""},
                    {"n", args.n_text},
                    {"trials", fmt_u(args.trials)},
                    {"seed", fmt_u(args.seed)},
                    {"mode", args.mode_text},
                    {"dist", args.dist_text},
                    {"chunk", fmt_u(args.chunk)},
                    {"nzr", fmt_d(args.nzr)},
                    {"knee", args.knee ? "1" : "0"},
                    {"threshold", fmt_d(args.threshold)},
                    {"threads", std::to_string(args.threads)}};

    if (args.knee) {
        auto knee = montecarlo::empirical_knee(args.m_p, n, model, mode,
                                               args.threshold, args.trials,
                                               args.seed, args.threads);
        for (const auto& level : knee.scanned)
            add_row(level.m_acc, 0,
                    analytic::vrr_sparse(level.m_acc, args.m_p, n, args.nzr),
                    level.vrr);
        auto pred = analytic::predict_min_mantissa(args.m_p, n, {}, args.nzr);
        deliver(table, args.csv_path, m);
        std::printf("empirical_knee=%d\n", knee.satisfiable ? knee.m_acc : -1);
        std::printf("analytic_prediction=%d\n",
                    pred.satisfiable ? pred.min_m_acc : -1);
        if (!knee.satisfiable) {
            std::fprintf(stderr,
                         "no accumulator mantissa in [1, %d] reaches the "
                         "retention threshold %s\n",
                         analytic::kSearchCeiling,
                         fmt_d(args.threshold).c_str());
            return kExitUnsatisfiable;
        }
        return kExitOk;
    }

    if (!args.m_acc)
        throw std::invalid_argument("--macc is required unless --knee is set");
    analytic::AccumulationSpec spec;
    spec.n = n;
    spec.m_p = args.m_p;
    spec.m_acc = *args.m_acc;
    spec.nzr = args.nzr;

    auto plain = montecarlo::measure_vrr(spec, model, args.trials, args.seed,
                                         mode, args.threads);
    add_row(spec.m_acc, 0,
            analytic::vrr_sparse(spec.m_acc, args.m_p, n, args.nzr), plain);
    if (args.chunk > 0) {
        std::uint64_t n1 = std::min(args.chunk, n);
        spec.chunking = analytic::Chunking{n1, (n + n1 - 1) / n1};
        auto chunked = montecarlo::measure_vrr(spec, model, args.trials,
                                               args.seed, mode, args.threads);
        add_row(spec.m_acc, args.chunk,
                analytic::vrr_chunked_sparse(spec.m_acc, args.m_p,
                                             spec.chunking->n1,
                                             spec.chunking->n2, args.nzr),
                chunked);
    }
    deliver(table, args.csv_path, m);
    return kExitOk;
}

struct NetArgs {
    std::string topology;
    int pp = 0;
    std::string format = "table";
    std::string csv_path;
};

std::string entry_text(bool excluded, bool satisfiable, int m_acc) {
    if (excluded) return "fixed";
    if (!satisfiable) return "unsat";
    return std::to_string(m_acc);
}

int run_net(const NetArgs& args) {
    if (args.format != "table" && args.format != "csv")
        throw std::invalid_argument("format must be table or csv");
    auto net = netpredict::load_topology(args.topology);
    auto table = netpredict::predict_network(net);
    if (args.pp != 0) table = netpredict::apply_perturbation(table, args.pp);

    csv::Table out;
    out.header = {"network", "row_kind", "layer",         "block",
                  "gemm",    "n",        "nzr",           "m_acc_normal",
                  "m_acc_chunked", "status"};
    auto add = [&](const netpredict::TableRow& row, const char* kind) {
        std::string status = row.excluded
                                 ? "excluded"
                                 : (row.normal_satisfiable &&
                                            row.chunked_satisfiable
                                        ? "ok"
                                        : "unsatisfiable");
        out.rows.push_back(
            {table.network, kind, row.layer, row.block,
             netpredict::gemm_name(row.gemm), fmt_u(row.n), fmt_d(row.nzr),
             entry_text(row.excluded, row.normal_satisfiable,
                        row.m_acc_normal),
             entry_text(row.excluded, row.chunked_satisfiable,
                        row.m_acc_chunked),
             status});
    };
    for (const auto& row : table.rows) add(row, "layer");
    for (const auto& row : table.block_rows) add(row, "block");

    manifest::RunManifest m;
    m.command = "net";
    m.parameters = {{"topology", args.topology},
                    {"pp", std::to_string(args.pp)},
                    {"format", args.format}};

    if (!args.csv_path.empty()) {
        deliver(out, args.csv_path, m);
        return kExitOk;
    }
    if (args.format == "csv") {
        auto print_csv_row = [](const std::vector<std::string>& row) {
            for (std::size_t i = 0; i < row.size(); ++i)
                std::printf("%s%s", row[i].c_str(),
                            i + 1 == row.size() ? "\n" : ",");
        };
        print_csv_row(out.header);
        for (const auto& row : out.rows) print_csv_row(row);
        return kExitOk;
    }
    std::printf("network %s  (m_p=%d, chunk=%s, cutoff=%s, pp=%d)\n",
                table.network.c_str(), table.m_p,
                table.chunk_size ? fmt_u(*table.chunk_size).c_str() : "none",
                fmt_d(table.cutoff).c_str(), args.pp);
    print_table(out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Accumulation precision prediction for long dot products"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    VrrArgs vrr_args;
    auto* vrr_cmd = app.add_subcommand(
        "vrr", "Evaluate the variance retention ratio");
    vrr_cmd->add_option("--macc", vrr_args.m_acc,
                        "accumulator mantissa bits")->required();
    vrr_cmd->add_option("--mp", vrr_args.m_p, "product mantissa bits");
    auto* vrr_n = vrr_cmd->add_option("--n", vrr_args.n_text,
                                      "accumulation length (int or 2^k)");
    auto* vrr_grid_opt = vrr_cmd->add_option(
        "--grid-n", vrr_args.grid_text,
        "length grid, e.g. 2^1..2^22 (doubling) or a comma list");
    vrr_n->excludes(vrr_grid_opt);
    vrr_cmd->add_option("--chunk", vrr_args.chunk,
                        "chunk size, 0 for unchunked");
    vrr_cmd->add_option("--nzr", vrr_args.nzr, "non-zero ratio in (0,1]");
    vrr_cmd->add_option("--csv", vrr_args.csv_path, "write rows to this file");
    vrr_cmd->add_flag("--full-swamp-only", vrr_args.full_swamp_only,
                      "use the full-swamping-only model");

    PredictArgs predict_args;
    auto* predict_cmd = app.add_subcommand(
        "predict", "Smallest suitable accumulator mantissa");
    predict_cmd->add_option("--mp", predict_args.m_p, "product mantissa bits");
    predict_cmd->add_option("--n", predict_args.n_text,
                            "accumulation length (int or 2^k)")->required();
    predict_cmd->add_option("--chunk", predict_args.chunk,
                            "chunk size, 0 for unchunked");
    predict_cmd->add_option("--nzr", predict_args.nzr,
                            "non-zero ratio in (0,1]");
    predict_cmd->add_option("--cutoff", predict_args.cutoff,
                            "suitability cutoff on e^(n(1-VRR))");

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand(
        "sweep-chunk", "Retention across chunk sizes");
    sweep_cmd->add_option("--macc", sweep_args.m_acc,
                          "accumulator mantissa bits")->required();
    sweep_cmd->add_option("--mp", sweep_args.m_p, "product mantissa bits");
    sweep_cmd->add_option("--n", sweep_args.n_text,
                          "accumulation length (int or 2^k)")->required();
    sweep_cmd->add_option("--nzr", sweep_args.nzr, "non-zero ratio in (0,1]");
    sweep_cmd->add_option("--chunk-sizes", sweep_args.sizes_text,
                          "comma list of chunk sizes");
    sweep_cmd->add_option("--csv", sweep_args.csv_path,
                          "write rows to this file");

    ValidateArgs validate_args;
    auto* validate_cmd = app.add_subcommand(
        "validate", "Monte Carlo emulation against the analytic model");
    validate_cmd->add_option("--mp", validate_args.m_p,
                             "product mantissa bits");
    validate_cmd->add_option("--macc", validate_args.m_acc,
                             "accumulator mantissa bits");
    validate_cmd->add_option("--n", validate_args.n_text,
                             "accumulation length (int or 2^k)")->required();
    validate_cmd->add_option("--trials", validate_args.trials,
                             "Monte Carlo trials");
    validate_cmd->add_option("--seed", validate_args.seed, "master seed");
    validate_cmd->add_option("--mode", validate_args.mode_text,
                             "rounding: nearest or truncate");
    validate_cmd->add_option("--dist", validate_args.dist_text,
                             "term model: gaussian-product or gaussian");
    validate_cmd->add_option("--chunk", validate_args.chunk,
                             "also measure with this chunk size");
    validate_cmd->add_option("--nzr", validate_args.nzr,
                             "non-zero ratio in (0,1]");
    validate_cmd->add_flag("--knee", validate_args.knee,
                           "scan m_acc upward for the empirical knee");
    validate_cmd->add_option("--threshold", validate_args.threshold,
                             "retention threshold for --knee");
    validate_cmd->add_option("--csv", validate_args.csv_path,
                             "write rows to this file");
    validate_cmd->add_option("--threads", validate_args.threads,
                             "worker threads (0: ACCPREC_THREADS or 1)");

    NetArgs net_args;
    auto* net_cmd = app.add_subcommand(
        "net", "Per-layer precision table for a network topology");
    net_cmd->add_option("--topology", net_args.topology,
                        "topology JSON file")->required();
    net_cmd->add_option("--pp", net_args.pp,
                        "precision perturbation (<= 0)");
    net_cmd->add_option("--format", net_args.format, "stdout format: table or csv");
    net_cmd->add_option("--csv", net_args.csv_path, "write rows to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }

    try {
        if (vrr_cmd->parsed()) {
            if (vrr_args.n_text.empty() && vrr_args.grid_text.empty())
                throw std::invalid_argument("one of --n or --grid-n is required");
            return run_vrr(vrr_args);
        }
        if (predict_cmd->parsed()) return run_predict(predict_args);
        if (sweep_cmd->parsed()) return run_sweep(sweep_args);
        if (validate_cmd->parsed()) return run_validate(validate_args);
        if (net_cmd->parsed()) return run_net(net_args);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
    return kExitOk;
}
